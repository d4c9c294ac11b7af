"""Closed-form and independently coded cross-checks.

Nothing here touches the single-layer matrix or the tension assembly; the
only shared pieces are the spectral multipliers, which are checked on their
own against exact trigonometric tables.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curve import ClosedCurve
from .kernels import cot_regularization
from .spectral import PeriodicGrid, fourier_derivative, hilbert_dtheta, hilbert_transform

__all__ = [
    "FrameFourierForce",
    "frame_coefficients",
    "circle_sigma",
    "Q0_closed_form",
    "L0_closed_form",
    "toland_check",
    "split_Q_check",
    "table1_force",
    "table1_exact",
]


def _unit_frame(theta):
    Xc = np.column_stack([np.cos(theta), np.sin(theta)])
    dXc = np.column_stack([-np.sin(theta), np.cos(theta)])
    return Xc, dXc


@dataclass(frozen=True)
class FrameFourierForce:
    """``F = sum (a_n cos + b_n sin) X_c + sum (c_n cos + d_n sin) dX_c``; index ``n`` from 0."""

    a: tuple = ()
    b: tuple = ()
    c: tuple = ()
    d: tuple = ()

    def coeff(self, name: str, n: int) -> float:
        seq = getattr(self, name)
        return float(seq[n]) if n < len(seq) else 0.0

    @property
    def n_max(self) -> int:
        return max(len(self.a), len(self.b), len(self.c), len(self.d)) - 1

    def values(self, grid: PeriodicGrid) -> np.ndarray:
        th = grid.nodes
        Xc, dXc = _unit_frame(th)
        p = np.zeros_like(th)
        q = np.zeros_like(th)
        for n in range(self.n_max + 1):
            p += self.coeff("a", n) * np.cos(n * th) + self.coeff("b", n) * np.sin(n * th)
            q += self.coeff("c", n) * np.cos(n * th) + self.coeff("d", n) * np.sin(n * th)
        return p[:, None] * Xc + q[:, None] * dXc


def frame_coefficients(F, grid: PeriodicGrid, n_max: int | None = None) -> FrameFourierForce:
    """Recover the frame coefficients of sampled ``F`` on the unit-circle frame."""
    F = np.asarray(F, dtype=float)
    n = grid.n_points
    n_max = n // 2 - 1 if n_max is None else n_max
    Xc, dXc = _unit_frame(grid.nodes)

    def cos_sin(f):
        c = np.fft.rfft(f) / n
        cos = [c[0].real] + [2.0 * c[k].real for k in range(1, n_max + 1)]
        sin = [0.0] + [-2.0 * c[k].imag for k in range(1, n_max + 1)]
        return tuple(cos), tuple(sin)

    a, b = cos_sin((F * Xc).sum(axis=1))
    c, d = cos_sin((F * dXc).sum(axis=1))
    return FrameFourierForce(a, b, c, d)


def circle_sigma(F: FrameFourierForce, grid: PeriodicGrid) -> np.ndarray:
    """Mean-zero tension on the unit circle from the frame coefficients."""
    th = grid.nodes
    sigma = 0.5 * (F.coeff("a", 1) + F.coeff("d", 1)) * np.cos(th)
    sigma += 0.5 * (F.coeff("b", 1) - F.coeff("c", 1)) * np.sin(th)
    for n in range(2, F.n_max + 1):
        sigma += F.coeff("d", n) / n * np.cos(n * th) - F.coeff("c", n) / n * np.sin(n * th)
    return sigma


def Q0_closed_form(F) -> np.ndarray:
    """``Q`` on the unit circle: ``-dX_c . H[F]/4 - (1/8pi) int X_c . F``."""
    F = np.asarray(F, dtype=float)
    grid = PeriodicGrid(F.shape[0])
    Xc, dXc = _unit_frame(grid.nodes)
    HF = hilbert_transform(F)
    mean_term = grid.weight * np.sum(Xc * F) / (8.0 * np.pi)
    return -0.25 * (dXc * HF).sum(axis=1) - mean_term


def L0_closed_form(sigma) -> np.ndarray:
    """``L`` on the unit circle reduces to ``-H d/dtheta / 4``."""
    return -0.25 * hilbert_dtheta(sigma)


def toland_check(g) -> tuple[np.ndarray, np.ndarray]:
    """Both sides of Toland's identity for a band-limited ``g``.

    ``lhs = g H g' - H (g^2)'/2`` by multipliers; ``rhs`` is the trapezoid
    rule for ``(1/8pi) int |g(theta) - g(t)|^2 / sin^2((theta - t)/2) dt``,
    whose integrand is smooth with diagonal value ``4 g'(theta)^2``.
    """
    g = np.asarray(g, dtype=float)
    n = g.shape[0]
    grid = PeriodicGrid(n)
    lhs = g * hilbert_dtheta(g) - 0.5 * hilbert_dtheta(g * g)
    th = grid.nodes
    dg = g[:, None] - g[None, :]
    s2 = np.sin(0.5 * (th[:, None] - th[None, :])) ** 2
    np.fill_diagonal(s2, 1.0)
    integrand = dg * dg / s2
    np.fill_diagonal(integrand, 4.0 * fourier_derivative(g) ** 2)
    rhs = grid.weight * integrand.sum(axis=1) / (8.0 * np.pi)
    return lhs, rhs


def split_Q_check(curve: ClosedCurve, F) -> np.ndarray:
    """``Q[F]`` through the Hilbert / regularized-cot / dyadic split.

    d/dtheta of the log kernel is ``-cot(h/2)/2 + K_C`` with
    ``K_C = R_C(h) + (1/h - dX . X'/|dX|^2)``, ``h = theta - t`` wrapped;
    ``K_C(theta, theta) = -X' . X''/(2|X'|^2)``.  d/dtheta of ``dX dX^T/|dX|^2``
    has diagonal value ``c (n tau^T + tau n^T)``, ``c = X'' . n / (2|X'|)``.
    """
    F = np.asarray(F, dtype=float)
    n = curve.n_points
    w = curve.grid.weight
    th = curve.theta
    X, dX, d2X = curve.position, curve.dposition, curve.d2position
    tau, nrm, speed = curve.tangent, curve.normal, curve.speed

    h = th[:, None] - th[None, :]
    h = np.pi - np.mod(np.pi - h, 2.0 * np.pi)
    rx = X[:, 0][:, None] - X[:, 0][None, :]
    ry = X[:, 1][:, None] - X[:, 1][None, :]
    r2 = rx * rx + ry * ry
    diag = np.diag_indices(n)
    r2[diag] = 1.0
    hs = h.copy()
    hs[diag] = 1.0
    rdotv = rx * dX[:, 0][:, None] + ry * dX[:, 1][:, None]

    kc = cot_regularization(th[:, None], th[None, :]) + (1.0 / hs - rdotv / r2)
    kc[diag] = -(dX * d2X).sum(axis=1) / (2.0 * speed**2)

    # d/dtheta (r r^T / r^2) = (v r^T + r v^T)/r^2 - 2 (r . v) r r^T / r^4
    vx, vy = dX[:, 0][:, None], dX[:, 1][:, None]
    r4 = r2 * r2
    t_xx = 2.0 * vx * rx / r2 - 2.0 * rdotv * rx * rx / r4
    t_xy = (vx * ry + rx * vy) / r2 - 2.0 * rdotv * rx * ry / r4
    t_yy = 2.0 * vy * ry / r2 - 2.0 * rdotv * ry * ry / r4
    c = (d2X * nrm).sum(axis=1) / (2.0 * speed)
    t_xx[diag] = 2.0 * c * tau[:, 0] * nrm[:, 0]
    t_xy[diag] = c * (tau[:, 0] * nrm[:, 1] + nrm[:, 0] * tau[:, 1])
    t_yy[diag] = 2.0 * c * tau[:, 1] * nrm[:, 1]

    fc = w * np.column_stack([kc @ F[:, 0], kc @ F[:, 1]])
    ft = w * np.column_stack([t_xx @ F[:, 0] + t_xy @ F[:, 1], t_xy @ F[:, 0] + t_yy @ F[:, 1]])
    HF = hilbert_transform(F)
    return (tau * (-0.25 * HF + (fc + ft) / (4.0 * np.pi))).sum(axis=1)


def table1_force(grid: PeriodicGrid) -> np.ndarray:
    th = grid.nodes
    return np.column_stack(
        [
            np.sin(2 * th) + 4 * np.cos(th) - 4 * np.sin(th),
            -np.cos(2 * th) + 4 * np.sin(th) + 4 * np.cos(th),
        ]
    )


def table1_exact(grid: PeriodicGrid) -> tuple[np.ndarray, np.ndarray]:
    """Exact mean-zero tension and interface velocity for :func:`table1_force`."""
    th = grid.nodes
    return np.sin(th), np.column_stack([-2.0 * np.sin(th), 2.0 * np.cos(th)])
