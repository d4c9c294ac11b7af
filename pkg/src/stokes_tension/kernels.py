"""Pointwise free-space Stokes kernels in 2D (unit viscosity).

    G(r)      = (1/4pi) (-log|r| I + r r^T / |r|^2)
    Pi(r)     = (1/2pi) r / |r|^2
    Theta(r)  = -(1/pi) r_i r_j r_k / |r|^4
"""

from __future__ import annotations

import numpy as np

from .errors import SingularPoint

__all__ = [
    "stokeslet",
    "pressure_kernel",
    "stresslet",
    "cot_regularization",
    "TOL_R",
]

TOL_R = 1e-13


def _check_r(r, scale):
    r = np.asarray(r, dtype=float)
    if r.shape != (2,):
        raise ValueError(f"r must be a 2-vector, got shape {r.shape}")
    rn = float(np.hypot(r[0], r[1]))
    if rn < TOL_R * scale:
        raise SingularPoint(f"|r| = {rn:.3e} below {TOL_R:g} * {scale:g}")
    return r, rn


def stokeslet(r, scale: float = 1.0) -> np.ndarray:
    r, rn = _check_r(r, scale)
    return (-np.log(rn) * np.eye(2) + np.outer(r, r) / rn**2) / (4.0 * np.pi)


def pressure_kernel(r, scale: float = 1.0) -> np.ndarray:
    r, rn = _check_r(r, scale)
    return r / (2.0 * np.pi * rn**2)


def stresslet(r, scale: float = 1.0) -> np.ndarray:
    """``Theta[i, j, k]``, fully symmetric in its three indices."""
    r, rn = _check_r(r, scale)
    return -np.einsum("i,j,k->ijk", r, r, r) / (np.pi * rn**4)


def cot_regularization(s, s_prime):
    """``R_C = cot((s - s')/2)/2 - 1/(s - s')``, with ``s - s'`` wrapped to ``(-pi, pi]``.

    Smooth through the diagonal, where it vanishes; vectorizes over arrays.
    """
    d = np.asarray(s, dtype=float) - np.asarray(s_prime, dtype=float)
    d = np.pi - np.mod(np.pi - d, 2.0 * np.pi)
    small = np.abs(d) < 1e-4
    safe = np.where(small, 1.0, d)
    out = 0.5 / np.tan(0.5 * safe) - 1.0 / safe
    # series -d/12 - d^3/720 near the diagonal avoids cancellation
    series = -d / 12.0 - d**3 / 720.0
    out = np.where(small, series, out)
    return out if out.ndim else float(out)
