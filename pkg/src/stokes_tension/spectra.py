"""Spectrum of the tension operator and near-circle eigenvalue asymptotics."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .curve import ClosedCurve, PerturbationSpec, perturbed_circle
from .errors import NotSingular
from .spectral import PeriodicGrid
from .tension import RANK_TOL, assemble_L

__all__ = [
    "SpectrumReport",
    "SweepResult",
    "spectrum",
    "lambda2",
    "eigenvalue_sweep",
    "fit_lambda2_lambda3",
    "nullspace_vector",
]


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray  # descending
    leading: float
    asymmetry: float
    epsilon: float
    n_points: int


def spectrum(curve: ClosedCurve, epsilon: float = float("nan")) -> SpectrumReport:
    """Eigenvalues of the symmetrized collocation matrix of ``L``."""
    L = assemble_L(curve)
    ev = np.linalg.eigvalsh(L.symmetrized())[::-1].copy()
    return SpectrumReport(ev, float(ev[0]), L.asymmetry, float(epsilon), curve.n_points)


def lambda2(spec: PerturbationSpec) -> float:
    """Second-order coefficient of the leading eigenvalue, ``-1/8 sum_{n>=2} n(n^2-1)(g_n1^2 + g_n2^2)``."""
    return -0.125 * sum(n * (n * n - 1) * (a * a + b * b) for n, a, b in spec.mode_pairs())


def nullspace_vector(curve: ClosedCurve, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Eigenvector of the leading eigenvalue, normalized to ``int sigma^2 = 2pi`` with positive mean."""
    L = assemble_L(curve)
    ev, vec = np.linalg.eigh(L.symmetrized())
    radius = np.max(np.abs(ev))
    if abs(ev[-1]) > rank_tol * radius:
        raise NotSingular(f"leading eigenvalue {ev[-1]:.3e} exceeds {rank_tol:g} * {radius:.3e}")
    v = vec[:, -1]
    v = v * np.sqrt(2.0 * np.pi / (curve.grid.weight * np.dot(v, v)))
    return -v if v.sum() < 0 else v


@dataclass(frozen=True)
class SweepResult:
    epsilons: np.ndarray
    leading: np.ndarray
    lambda2_fit: float | None
    lambda3_fit: float | None
    n_points: int

    @property
    def ratio2(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.epsilons != 0, self.leading / self.epsilons**2, np.nan)

    @property
    def ratio4(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.epsilons != 0, self.leading / self.epsilons**4, np.nan)

    COLUMNS = ("epsilon", "lambda_eps", "lambda_over_eps2", "lambda_over_eps4", "lambda2_fit", "lambda3_fit")

    def rows(self) -> list[list[float]]:
        nan = float("nan")
        l2 = nan if self.lambda2_fit is None else self.lambda2_fit
        l3 = nan if self.lambda3_fit is None else self.lambda3_fit
        return [
            [float(e), float(l), float(r2), float(r4), l2, l3]
            for e, l, r2, r4 in zip(self.epsilons, self.leading, self.ratio2, self.ratio4)
        ]


def fit_lambda2_lambda3(epsilons, leading, window: int = 3) -> tuple[float, float] | tuple[None, None]:
    """Least squares ``lambda/eps^2 = lambda2 + lambda3 eps`` over the ``window`` smallest ``eps > 0``."""
    eps = np.asarray(epsilons, dtype=float)
    lam = np.asarray(leading, dtype=float)
    keep = eps > 0
    eps, lam = eps[keep], lam[keep]
    if eps.size < 2:
        return None, None
    order = np.argsort(eps)[:window]
    e = eps[order]
    A = np.column_stack([np.ones_like(e), e])
    (l2, l3), *_ = np.linalg.lstsq(A, lam[order] / e**2, rcond=None)
    return float(l2), float(l3)


def eigenvalue_sweep(
    spec_g: PerturbationSpec, epsilons, n_points: int = 128, *, workers: int = 1, fit: bool = True
) -> SweepResult:
    """Leading eigenvalue of ``L`` on ``(1 + eps g) X_c`` for each ``eps``; output in input order."""
    eps = np.asarray(list(epsilons), dtype=float)
    grid = PeriodicGrid(n_points)

    def one(e):
        return spectrum(perturbed_circle(spec_g.with_epsilon(e), grid), e).leading

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            leading = np.array(list(pool.map(one, eps)))
    else:
        leading = np.array([one(e) for e in eps])
    l2, l3 = fit_lambda2_lambda3(eps, leading) if fit else (None, None)
    return SweepResult(eps, leading, l2, l3, n_points)
