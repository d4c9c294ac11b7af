"""Closed-curve geometry on the periodic grid."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import _hot
from .errors import Orientation, SelfIntersecting, ZeroSpeed
from .spectral import (
    PeriodicGrid,
    fourier_antiderivative,
    fourier_derivative,
    trig_interpolate,
)

__all__ = [
    "ClosedCurve",
    "PerturbationSpec",
    "build_curve",
    "star_norm",
    "arclength_map",
    "perturbed_circle",
    "circle",
    "ellipse",
    "fourier_curve",
    "reparametrize_by_arclength",
    "rotate_normal",
]

SPEED_TOL = 1e-10
SIMPLICITY_TOL = 1e-6


def rotate_normal(tau):
    """Outward normal of a counter-clockwise curve: ``(tau_y, -tau_x)``."""
    tau = np.asarray(tau)
    return np.stack([tau[..., 1], -tau[..., 0]], axis=-1)


@dataclass(frozen=True, eq=False)
class ClosedCurve:
    """Sampled closed curve with spectrally computed frame and curvature.

    Build instances with :func:`build_curve`; the constructor does not check
    anything.  Arrays are marked read-only.
    """

    position: np.ndarray
    dposition: np.ndarray
    d2position: np.ndarray
    speed: np.ndarray
    tangent: np.ndarray
    normal: np.ndarray
    curvature: np.ndarray
    grid: PeriodicGrid = field(repr=False)

    @property
    def n_points(self) -> int:
        return self.grid.n_points

    @property
    def theta(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def total_length(self) -> float:
        return float(self.grid.weight * self.speed.sum())

    @property
    def signed_area(self) -> float:
        x, y = self.position.T
        dx, dy = self.dposition.T
        return float(0.5 * self.grid.weight * np.sum(x * dy - y * dx))

    @property
    def star_norm(self) -> float:
        return star_norm(self)


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def build_curve(position_samples, *, check: bool = True) -> ClosedCurve:
    """Derive the geometry (frame, speed, curvature) from samples ``X(theta_j)`` of shape ``(N, 2)``.

    Raises ``ZeroSpeed``, ``SelfIntersecting`` or ``Orientation`` (in that
    order of checking) when ``check`` is true.
    """
    X = np.asarray(position_samples, dtype=float)
    if X.ndim != 2 or X.shape[1] != 2:
        raise ValueError(f"position samples must have shape (N, 2), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("position samples must be finite")
    grid = PeriodicGrid(X.shape[0])
    dX = fourier_derivative(X)
    d2X = fourier_derivative(X, order=2)
    speed = np.hypot(dX[:, 0], dX[:, 1])
    scale = float(np.max(speed)) if speed.size else 0.0
    if check and (scale == 0.0 or np.min(speed) <= SPEED_TOL * scale):
        raise ZeroSpeed(f"min |dX/dtheta| = {np.min(speed):.3e}")
    with np.errstate(divide="ignore", invalid="ignore"):
        tau = dX / speed[:, None]
        kappa = (dX[:, 0] * d2X[:, 1] - dX[:, 1] * d2X[:, 0]) / speed**3
    curve = ClosedCurve(
        position=_frozen(X),
        dposition=_frozen(dX),
        d2position=_frozen(d2X),
        speed=_frozen(speed),
        tangent=_frozen(tau),
        normal=_frozen(rotate_normal(tau)),
        curvature=_frozen(kappa),
        grid=grid,
    )
    if check:
        length = curve.total_length
        s = star_norm(curve)
        if s <= SIMPLICITY_TOL * length:
            raise SelfIntersecting(f"star norm {s:.3e} <= {SIMPLICITY_TOL:g} * length")
        # the node-pair minimum misses crossings that fall between nodes
        crossing = _polygon_crossing(X)
        if crossing is not None:
            raise SelfIntersecting(f"segments {crossing[0]} and {crossing[1]} of the sampled polygon cross")
        if curve.signed_area <= 0.0:
            raise Orientation("curve must be parametrized counter-clockwise")
    return curve


def _polygon_crossing(X) -> tuple[int, int] | None:
    """First pair of non-adjacent crossing edges of the closed polygon through ``X``, if any."""
    n = X.shape[0]
    P, Q = X, np.roll(X, -1, axis=0)

    def orient(a, b, c):
        return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])

    i, j = np.triu_indices(n, k=2)
    keep = ~((i == 0) & (j == n - 1))
    i, j = i[keep], j[keep]
    o1 = orient(P[i], Q[i], P[j])
    o2 = orient(P[i], Q[i], Q[j])
    o3 = orient(P[j], Q[j], P[i])
    o4 = orient(P[j], Q[j], Q[i])
    hit = (o1 * o2 < 0) & (o3 * o4 < 0)
    if not np.any(hit):
        return None
    k = int(np.argmax(hit))
    return int(i[k]), int(j[k])


def star_norm(curve: ClosedCurve) -> float:
    """Discrete ``min_{j != k} |X_j - X_k| / d(theta_j, theta_k)`` with wrapped distance."""
    return float(_hot.star_norm_min(np.ascontiguousarray(curve.position), curve.theta))


def arclength_map(curve: ClosedCurve) -> tuple[np.ndarray, float]:
    """Return ``(Phi(theta_j), L)`` with ``Phi' = |dX/dtheta|`` and ``Phi(0) = 0``."""
    speed = curve.speed
    length = curve.total_length
    phi = length * curve.theta / (2.0 * np.pi) + fourier_antiderivative(speed)
    return phi, length


@dataclass(frozen=True)
class PerturbationSpec:
    """Radial perturbation ``(1 + eps g(theta)) X_c`` of the unit circle.

    ``cos_coeffs[n-1]`` and ``sin_coeffs[n-1]`` hold ``g_{n1}`` and ``g_{n2}``.
    """

    g0: float = 0.0
    cos_coeffs: tuple[float, ...] = ()
    sin_coeffs: tuple[float, ...] = ()
    epsilon: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "cos_coeffs", tuple(float(c) for c in self.cos_coeffs))
        object.__setattr__(self, "sin_coeffs", tuple(float(c) for c in self.sin_coeffs))
        vals = (self.g0, self.epsilon) + self.cos_coeffs + self.sin_coeffs
        if not np.all(np.isfinite(vals)):
            raise ValueError("perturbation coefficients must be finite")

    @property
    def n_max(self) -> int:
        return max(len(self.cos_coeffs), len(self.sin_coeffs))

    def mode_pairs(self):
        """Yield ``(n, g_n1, g_n2)`` for ``n = 1 .. n_max``."""
        for n in range(1, self.n_max + 1):
            a = self.cos_coeffs[n - 1] if n <= len(self.cos_coeffs) else 0.0
            b = self.sin_coeffs[n - 1] if n <= len(self.sin_coeffs) else 0.0
            yield n, a, b

    def g(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.full_like(theta, self.g0)
        for n, a, b in self.mode_pairs():
            out = out + a * np.cos(n * theta) + b * np.sin(n * theta)
        return out

    def with_epsilon(self, epsilon: float) -> "PerturbationSpec":
        return PerturbationSpec(self.g0, self.cos_coeffs, self.sin_coeffs, float(epsilon))


def perturbed_circle(spec: PerturbationSpec, grid: PeriodicGrid | int) -> ClosedCurve:
    if not isinstance(grid, PeriodicGrid):
        grid = PeriodicGrid(int(grid))
    th = grid.nodes
    radius = 1.0 + spec.epsilon * spec.g(th)
    if np.any(radius <= 0.0):
        raise ZeroSpeed("1 + eps*g must be positive at every node")
    X = radius[:, None] * np.column_stack([np.cos(th), np.sin(th)])
    return build_curve(X)


def circle(n_points: int, radius: float = 1.0, center=(0.0, 0.0)) -> ClosedCurve:
    th = PeriodicGrid(n_points).nodes
    X = radius * np.column_stack([np.cos(th), np.sin(th)]) + np.asarray(center, float)
    return build_curve(X)


def ellipse(n_points: int, a: float, b: float) -> ClosedCurve:
    th = PeriodicGrid(n_points).nodes
    return build_curve(np.column_stack([a * np.cos(th), b * np.sin(th)]))


def fourier_curve(n_points: int, x_cos=(), x_sin=(), y_cos=(), y_sin=()) -> ClosedCurve:
    """Curve from cosine/sine coefficients per component, index ``n`` starting at 0."""
    th = PeriodicGrid(n_points).nodes

    def series(cs, ss):
        out = np.zeros_like(th)
        for n, c in enumerate(cs):
            out += c * np.cos(n * th)
        for n, s in enumerate(ss):
            out += s * np.sin(n * th)
        return out

    return build_curve(np.column_stack([series(x_cos, x_sin), series(y_cos, y_sin)]))


def reparametrize_by_arclength(curve: ClosedCurve) -> tuple[ClosedCurve, np.ndarray]:
    """Resample the curve at equal arclength spacing.

    Returns the new curve (constant speed ``L/2pi``) and the original
    parameter values ``theta_j`` of its nodes, so grid functions on the old
    parametrization can be compared through :func:`trig_interpolate`.
    """
    phi, length = arclength_map(curve)
    periodic = phi - length * curve.theta / (2.0 * np.pi)

    def Phi(t):
        return length * t / (2.0 * np.pi) + float(trig_interpolate(periodic, t)[0])

    targets = length * curve.theta / (2.0 * np.pi)
    thetas = np.empty_like(targets)
    thetas[0] = 0.0
    lo = 0.0
    for j in range(1, targets.size):
        # Phi is strictly increasing, so the root is bracketed by [lo, 2pi]
        thetas[j] = brentq(lambda t: Phi(t) - targets[j], lo, 2.0 * np.pi, xtol=1e-15)
        lo = thetas[j]
    X = trig_interpolate(curve.position, thetas)
    return build_curve(X), thetas
