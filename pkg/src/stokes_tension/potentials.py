"""Single-layer Stokes potentials on and off the interface.

Densities are per unit parameter: ``S[g](theta) = int G(X(theta) - X(t)) g(t) dt``.
On the interface the logarithm is split as

    -log|X(theta) - X(t)| = -log|2 sin((theta - t)/2)| - log(|dX| / |2 sin((theta - t)/2)|)

The first piece is applied exactly as a Fourier multiplier; the second is
smooth (diagonal value ``-log|X'(theta)|``) and, with the ``r r^T/|r|^2``
part (diagonal value ``tau tau^T``), goes through the periodic trapezoid rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _hot
from .curve import ClosedCurve
from .errors import TooCloseToInterface
from .spectral import log_kernel_matrix

__all__ = [
    "FieldSample",
    "single_layer_matrix",
    "single_layer_on_interface",
    "safe_distance",
    "velocity_at",
    "pressure_at",
    "stress_at",
    "evaluate_fields",
    "double_layer_identity",
    "stress_jump_probe",
]


def single_layer_matrix(curve: ClosedCurve) -> np.ndarray:
    """Dense ``2N x 2N`` matrix of the on-interface single layer.

    Unknowns are ordered ``[g_x(theta_0..N-1), g_y(theta_0..N-1)]``.  The
    matrix is symmetric.
    """
    n = curve.n_points
    w = curve.grid.weight
    rem, gxx, gxy, gyy = _hot.self_blocks(
        np.ascontiguousarray(curve.position),
        np.ascontiguousarray(curve.tangent),
        np.ascontiguousarray(curve.speed),
        curve.theta,
    )
    log_part = 2.0 * np.pi * log_kernel_matrix(n) + w * rem
    S = np.empty((2 * n, 2 * n))
    S[:n, :n] = log_part + w * gxx
    S[:n, n:] = w * gxy
    S[n:, :n] = w * gxy
    S[n:, n:] = log_part + w * gyy
    S /= 4.0 * np.pi
    return S


def single_layer_on_interface(curve: ClosedCurve, density, matrix=None) -> np.ndarray:
    """Interface velocity ``S[density]`` at the nodes, shape ``(N, 2)``."""
    g = np.asarray(density, dtype=float)
    S = single_layer_matrix(curve) if matrix is None else matrix
    u = S @ np.concatenate([g[:, 0], g[:, 1]])
    return np.column_stack([u[: curve.n_points], u[curve.n_points :]])


def safe_distance(curve: ClosedCurve) -> float:
    """Distance below which off-interface trapezoid evaluation is refused."""
    return 5.0 * curve.grid.weight * float(np.max(curve.speed))


def _targets(curve, points, guard=True):
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[-1] != 2:
        raise ValueError("points must have shape (2,) or (M, 2)")
    if guard:
        X = curve.position
        d = np.sqrt(((pts[:, None, :] - X[None, :, :]) ** 2).sum(-1)).min(axis=1)
        h = safe_distance(curve)
        bad = d <= h
        if np.any(bad):
            raise TooCloseToInterface(
                f"{int(bad.sum())} point(s) within {h:.3e} of the interface (min distance {d.min():.3e})"
            )
    return np.ascontiguousarray(pts)


def _fields(curve, density, points):
    single = np.ndim(points) == 1
    pts = _targets(curve, points)
    g = np.ascontiguousarray(np.asarray(density, dtype=float))
    vel, pres, stress = _hot.target_fields(pts, np.ascontiguousarray(curve.position), g, curve.grid.weight)
    if single:
        return vel[0], pres[0], stress[0]
    return vel, pres, stress


def velocity_at(curve: ClosedCurve, density, x) -> np.ndarray:
    """Velocity of the single layer at off-interface point(s) ``x``."""
    return _fields(curve, density, x)[0]


def pressure_at(curve: ClosedCurve, density, x):
    return _fields(curve, density, x)[1]


def stress_at(curve: ClosedCurve, density, x) -> np.ndarray:
    """Stress ``Sigma_ij = int Theta_ijk(x - X) g_k``; equals ``grad u + grad u^T - p I``."""
    return _fields(curve, density, x)[2]


@dataclass(frozen=True)
class FieldSample:
    point: np.ndarray
    velocity: np.ndarray
    pressure: float
    stress: np.ndarray

    def as_row(self) -> list[float]:
        return [
            *map(float, self.point),
            *map(float, self.velocity),
            float(self.pressure),
            float(self.stress[0, 0]),
            float(self.stress[0, 1]),
            float(self.stress[1, 0]),
            float(self.stress[1, 1]),
        ]


FIELD_COLUMNS = ["x", "y", "u1", "u2", "p", "s11", "s12", "s21", "s22"]


def evaluate_fields(curve: ClosedCurve, density, points) -> list[FieldSample]:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    vel, pres, stress = _fields(curve, density, pts)
    return [FieldSample(pts[i].copy(), vel[i], float(pres[i]), stress[i]) for i in range(pts.shape[0])]


def double_layer_identity(curve: ClosedCurve, x=None, on_curve_index: int | None = None) -> np.ndarray:
    """``int_Gamma Theta_ijk(y - x) n_k(y) ds(y)`` by the trapezoid rule.

    Exactly one of ``x`` (off-curve point) or ``on_curve_index`` must be
    given.  On the curve the kernel is bounded and its diagonal value is
    ``-kappa tau_i tau_j / (2 pi)``.
    """
    if (x is None) == (on_curve_index is None):
        raise ValueError("give exactly one of x or on_curve_index")
    X = np.ascontiguousarray(curve.position)
    nrm = np.ascontiguousarray(curve.normal)
    speed = np.ascontiguousarray(curve.speed)
    w = curve.grid.weight
    if x is not None:
        pts = np.atleast_2d(np.asarray(x, dtype=float))
        return _hot.double_layer_sum(np.ascontiguousarray(pts), X, nrm, speed, w)[0]
    i = int(on_curve_index) % curve.n_points
    mask = np.ones(curve.n_points, dtype=bool)
    mask[i] = False
    off = _hot.double_layer_sum(
        X[i : i + 1].copy(),
        np.ascontiguousarray(X[mask]),
        np.ascontiguousarray(nrm[mask]),
        np.ascontiguousarray(speed[mask]),
        w,
    )[0]
    t = curve.tangent[i]
    diag = -curve.curvature[i] * np.outer(t, t) / (2.0 * np.pi)
    return off + w * speed[i] * diag


def stress_jump_probe(curve: ClosedCurve, density, node_index: int, distances) -> list[dict]:
    """Traction jump across the interface at one node, probed at shrinking offsets.

    For each offset ``d`` the stress is evaluated at ``X -/+ d n`` (inside /
    outside).  The limit of ``Sigma_in n - Sigma_out n`` is the force per
    unit length ``density / |X'|`` at the node.
    """
    d = np.asarray(distances, dtype=float)
    if d.ndim != 1 or d.size == 0:
        raise ValueError("distances must be a non-empty 1D sequence")
    if np.any(np.diff(d) >= 0):
        raise ValueError("distances must be strictly decreasing")
    g = np.asarray(density, dtype=float)
    i = int(node_index) % curve.n_points
    x0 = curve.position[i]
    n = curve.normal[i]
    target = g[i] / curve.speed[i]
    scale = float(np.linalg.norm(target))
    inner = stress_at(curve, g, x0[None, :] - d[:, None] * n[None, :])
    outer = stress_at(curve, g, x0[None, :] + d[:, None] * n[None, :])
    rows = []
    for k, dk in enumerate(d):
        jump = (inner[k] - outer[k]) @ n
        err = float(np.linalg.norm(jump - target))
        rows.append(
            {
                "distance": float(dk),
                "jump": jump,
                "target": target,
                "error": err,
                "relative_error": err / scale if scale > 0 else err,
            }
        )
    return rows
