"""Tension operators and the tension solve in the theta parametrization.

    Q[F]    = tau . d/dtheta S[F]
    L sigma = Q[d/dtheta (sigma tau)]

and the tension solves ``L sigma = -Q[F]``.  With ``D`` the (antisymmetric)
spectral differentiation matrix, ``L = -B^T S B`` where
``B sigma = D (sigma tau)``, so the assembled matrix is symmetric whenever
the single-layer matrix is.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
import scipy.linalg as sla

from .curve import ClosedCurve
from .errors import IllConditioned, SingularOperator
from .potentials import single_layer_matrix
from .spectral import differentiation_matrix, fourier_derivative, trapezoid

__all__ = [
    "ForceDensity",
    "OperatorMatrix",
    "TensionSolution",
    "apply_Q",
    "apply_L",
    "assemble_Q",
    "assemble_L",
    "solve_tension",
    "decompose_rhs",
    "RANK_TOL",
    "COND_WARN",
]

RANK_TOL = 1e-8
COND_WARN = 1e6

Mode = Literal["auto", "plain", "mean_zero"]


@dataclass(frozen=True)
class ForceDensity:
    """Interfacial force per unit parameter, sampled at the nodes, shape ``(N, 2)``."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2:
            raise ValueError(f"force samples must have shape (N, 2), got {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    @classmethod
    def from_frame_coeffs(cls, n_points: int, a=(), b=(), c=(), d=()) -> "ForceDensity":
        """``sum (a_n cos + b_n sin) X_c + sum (c_n cos + d_n sin) dX_c/dtheta``, ``n`` from 0."""
        th = 2.0 * np.pi * np.arange(n_points) / n_points
        Xc = np.column_stack([np.cos(th), np.sin(th)])
        dXc = np.column_stack([-np.sin(th), np.cos(th)])

        def series(cos_c, sin_c):
            out = np.zeros(n_points)
            for n, v in enumerate(cos_c):
                out += v * np.cos(n * th)
            for n, v in enumerate(sin_c):
                out += v * np.sin(n * th)
            return out

        return cls(series(a, b)[:, None] * Xc + series(c, d)[:, None] * dXc)

    def is_mean_zero(self, tol: float = 1e-10) -> bool:
        v = self.values
        return bool(np.all(np.abs(trapezoid(v)) <= tol * max(np.abs(v).max(), 1e-300)))


def _force(F) -> np.ndarray:
    return np.asarray(F.values if isinstance(F, ForceDensity) else F, dtype=float)


def decompose_rhs(curve: ClosedCurve, F) -> tuple[np.ndarray, np.ndarray]:
    """Tangential and normal parts ``(F . tau, F . n)``."""
    F = _force(F)
    return (F * curve.tangent).sum(axis=1), (F * curve.normal).sum(axis=1)


def apply_Q(curve: ClosedCurve, F, S=None) -> np.ndarray:
    """``tau . d/dtheta S[F]`` at the nodes."""
    F = _force(F)
    S = single_layer_matrix(curve) if S is None else S
    n = curve.n_points
    u = S @ np.concatenate([F[:, 0], F[:, 1]])
    du = fourier_derivative(np.column_stack([u[:n], u[n:]]))
    return (curve.tangent * du).sum(axis=1)


def apply_L(curve: ClosedCurve, sigma, S=None) -> np.ndarray:
    sigma = np.asarray(sigma, dtype=float)
    return apply_Q(curve, fourier_derivative(sigma[:, None] * curve.tangent), S)


@dataclass(frozen=True)
class OperatorMatrix:
    """Collocation matrix on the nodal (trigonometric cardinal) basis.

    The natural inner product is the trapezoid rule with uniform weight
    ``2pi/N``, so symmetry of ``entries`` is symmetry of the operator.
    """

    entries: np.ndarray
    weight: float
    asymmetry: float = field(default=np.nan)

    @classmethod
    def from_entries(cls, entries, weight):
        M = np.asarray(entries, dtype=float)
        if not np.all(np.isfinite(M)):
            raise FloatingPointError("operator matrix has non-finite entries")
        norm = np.linalg.norm(M)
        asym = float(np.linalg.norm(M - M.T) / norm) if norm > 0 else 0.0
        return cls(M, float(weight), asym)

    @property
    def shape(self):
        return self.entries.shape

    def __matmul__(self, other):
        return self.entries @ other

    def symmetrized(self) -> np.ndarray:
        return 0.5 * (self.entries + self.entries.T)


def _frame_matrices(curve):
    n = curve.n_points
    D = differentiation_matrix(n)
    tx, ty = curve.tangent[:, 0], curve.tangent[:, 1]
    # rows: tau . D(u);  columns: D(sigma tau)
    A = np.hstack([tx[:, None] * D, ty[:, None] * D])
    B = np.vstack([D * tx[None, :], D * ty[None, :]])
    return A, B


def assemble_Q(curve: ClosedCurve, S=None) -> np.ndarray:
    """``N x 2N`` matrix of :func:`apply_Q` on ``[F_x, F_y]``."""
    S = single_layer_matrix(curve) if S is None else S
    A, _ = _frame_matrices(curve)
    return A @ S


def assemble_L(curve: ClosedCurve, S=None) -> OperatorMatrix:
    S = single_layer_matrix(curve) if S is None else S
    A, B = _frame_matrices(curve)
    return OperatorMatrix.from_entries(A @ S @ B, curve.grid.weight)


@dataclass(frozen=True)
class TensionSolution:
    sigma: np.ndarray
    interface_velocity: np.ndarray
    residual_inext: float
    mode: str
    condition_estimate: float
    multiplier: float = 0.0
    eigenvalues: np.ndarray | None = field(default=None, repr=False)


def solve_tension(
    curve: ClosedCurve,
    F,
    mode: Mode = "auto",
    *,
    rank_tol: float = RANK_TOL,
    cond_warn: float = COND_WARN,
) -> TensionSolution:
    """Solve ``L sigma = -Q[F]`` for the tension.

    ``plain`` solves the square system and raises ``SingularOperator`` when
    the smallest eigenvalue magnitude of ``L`` is at most
    ``rank_tol * spectral radius`` (the circle).  ``mean_zero`` solves the
    bordered system ``[[L, 1], [1^T, 0]]`` which pins ``int sigma = 0``.
    ``auto`` picks ``mean_zero`` exactly when ``plain`` would raise.
    """
    if mode not in ("auto", "plain", "mean_zero"):
        raise ValueError(f"unknown mode {mode!r}")
    F = _force(F)
    if F.shape != (curve.n_points, 2):
        raise ValueError(f"force has shape {F.shape}, curve has {curve.n_points} nodes")
    n = curve.n_points
    S = single_layer_matrix(curve)
    L = assemble_L(curve, S)
    rhs = -(assemble_Q(curve, S) @ np.concatenate([F[:, 0], F[:, 1]]))

    evals = np.linalg.eigvalsh(L.symmetrized())
    mags = np.sort(np.abs(evals))
    radius = mags[-1]
    singular = mags[0] <= rank_tol * radius
    if mode == "auto":
        mode = "mean_zero" if singular else "plain"

    multiplier = 0.0
    if mode == "plain":
        if singular:
            raise SingularOperator(
                f"smallest |eigenvalue| {mags[0]:.3e} <= {rank_tol:g} * {radius:.3e}; "
                "the interface is a circle, use mode='mean_zero'"
            )
        cond = radius / mags[0]
        if cond > cond_warn:
            warnings.warn(
                f"near-circular interface, condition estimate {cond:.3e}", IllConditioned, stacklevel=2
            )
        sigma = sla.lu_solve(sla.lu_factor(L.entries), rhs)
    else:
        K = np.zeros((n + 1, n + 1))
        K[:n, :n] = L.entries
        K[:n, n] = 1.0
        K[n, :n] = 1.0
        sol = sla.lu_solve(sla.lu_factor(K), np.append(rhs, 0.0))
        sigma, multiplier = sol[:n], float(sol[n])
        cond = radius / mags[1] if singular else radius / mags[0]

    Fhat = F + fourier_derivative(sigma[:, None] * curve.tangent)
    u = S @ np.concatenate([Fhat[:, 0], Fhat[:, 1]])
    U = np.column_stack([u[:n], u[n:]])
    resid = float(np.max(np.abs((curve.tangent * fourier_derivative(U)).sum(axis=1))))
    return TensionSolution(
        sigma=sigma,
        interface_velocity=U,
        residual_inext=resid,
        mode=mode,
        condition_estimate=float(cond),
        multiplier=multiplier,
        eigenvalues=np.sort(evals)[::-1],
    )
