"""Hot O(N^2) and O(M N) kernel loops, in numba and pure numpy.

The backend is chosen once at import from ``STOKES_TENSION_NUMBA``:
``0``/``false``/``off`` forces numpy, anything else uses numba when it
imports.  Both implementations are always reachable through ``IMPLS`` so the
test-suite and the benchmark can compare them directly.
"""

from __future__ import annotations

import os

import numpy as np

try:
    import numba
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

_FLAG = os.environ.get("STOKES_TENSION_NUMBA", "1").strip().lower()
USE_NUMBA = numba is not None and _FLAG not in ("0", "false", "off", "no")

INV_4PI = 0.25 / np.pi
INV_2PI = 0.5 / np.pi
INV_PI = 1.0 / np.pi


# --------------------------------------------------------------------- numpy


def _np_self_blocks(X, tau, speed, theta):
    dx = X[:, 0][:, None] - X[:, 0][None, :]
    dy = X[:, 1][:, None] - X[:, 1][None, :]
    r2 = dx * dx + dy * dy
    s2 = 4.0 * np.sin(0.5 * (theta[:, None] - theta[None, :])) ** 2
    diag = np.diag_indices(X.shape[0])
    r2[diag] = 1.0
    s2[diag] = 1.0
    rem = -0.5 * np.log(r2 / s2)
    rem[diag] = -np.log(speed)
    gxx = dx * dx / r2
    gxy = dx * dy / r2
    gyy = dy * dy / r2
    gxx[diag] = tau[:, 0] * tau[:, 0]
    gxy[diag] = tau[:, 0] * tau[:, 1]
    gyy[diag] = tau[:, 1] * tau[:, 1]
    return rem, gxx, gxy, gyy


def _np_star_norm(X, theta):
    n = X.shape[0]
    d = np.abs(theta[:, None] - theta[None, :])
    d = np.minimum(d, 2.0 * np.pi - d)
    chord = np.hypot(X[:, 0][:, None] - X[:, 0][None, :], X[:, 1][:, None] - X[:, 1][None, :])
    iu = np.triu_indices(n, 1)
    return float(np.min(chord[iu] / d[iu]))


def _np_target_fields(points, X, F, w):
    rx = points[:, 0][:, None] - X[:, 0][None, :]
    ry = points[:, 1][:, None] - X[:, 1][None, :]
    r2 = rx * rx + ry * ry
    logr = 0.5 * np.log(r2)
    rdotf = rx * F[:, 0] + ry * F[:, 1]
    vel = np.empty((points.shape[0], 2))
    vel[:, 0] = (-logr * F[:, 0] + rx * rdotf / r2).sum(axis=1)
    vel[:, 1] = (-logr * F[:, 1] + ry * rdotf / r2).sum(axis=1)
    vel *= w * INV_4PI
    pres = w * INV_2PI * (rdotf / r2).sum(axis=1)
    c = rdotf / (r2 * r2)
    stress = np.empty((points.shape[0], 2, 2))
    stress[:, 0, 0] = (rx * rx * c).sum(axis=1)
    stress[:, 0, 1] = (rx * ry * c).sum(axis=1)
    stress[:, 1, 1] = (ry * ry * c).sum(axis=1)
    stress[:, 1, 0] = stress[:, 0, 1]
    stress *= -w * INV_PI
    return vel, pres, stress


def _np_double_layer(points, X, normal, speed, w):
    # K_ij(y, x) = Theta_ijk(y - x) n_k(y), integrated in arclength
    rx = X[:, 0][None, :] - points[:, 0][:, None]
    ry = X[:, 1][None, :] - points[:, 1][:, None]
    r2 = rx * rx + ry * ry
    c = (rx * normal[:, 0] + ry * normal[:, 1]) * speed / (r2 * r2)
    out = np.empty((points.shape[0], 2, 2))
    out[:, 0, 0] = (rx * rx * c).sum(axis=1)
    out[:, 0, 1] = (rx * ry * c).sum(axis=1)
    out[:, 1, 1] = (ry * ry * c).sum(axis=1)
    out[:, 1, 0] = out[:, 0, 1]
    return -w * INV_PI * out


# --------------------------------------------------------------------- numba

if numba is not None:

    @njit(cache=True)
    def _nb_self_blocks(X, tau, speed, theta):
        n = X.shape[0]
        rem = np.empty((n, n))
        gxx = np.empty((n, n))
        gxy = np.empty((n, n))
        gyy = np.empty((n, n))
        for i in range(n):
            rem[i, i] = -np.log(speed[i])
            gxx[i, i] = tau[i, 0] * tau[i, 0]
            gxy[i, i] = tau[i, 0] * tau[i, 1]
            gyy[i, i] = tau[i, 1] * tau[i, 1]
            for j in range(i + 1, n):
                dx = X[i, 0] - X[j, 0]
                dy = X[i, 1] - X[j, 1]
                r2 = dx * dx + dy * dy
                s = np.sin(0.5 * (theta[i] - theta[j]))
                v = -0.5 * np.log(r2 / (4.0 * s * s))
                rem[i, j] = v
                rem[j, i] = v
                a = dx * dx / r2
                b = dx * dy / r2
                c = dy * dy / r2
                gxx[i, j] = a
                gxx[j, i] = a
                gxy[i, j] = b
                gxy[j, i] = b
                gyy[i, j] = c
                gyy[j, i] = c
        return rem, gxx, gxy, gyy

    @njit(cache=True)
    def _nb_star_norm(X, theta):
        n = X.shape[0]
        best = np.inf
        two_pi = 2.0 * np.pi
        for i in range(n):
            for j in range(i + 1, n):
                d = abs(theta[i] - theta[j])
                d = min(d, two_pi - d)
                dx = X[i, 0] - X[j, 0]
                dy = X[i, 1] - X[j, 1]
                q = np.sqrt(dx * dx + dy * dy) / d
                if q < best:
                    best = q
        return best

    @njit(cache=True)
    def _nb_target_fields(points, X, F, w):
        m = points.shape[0]
        n = X.shape[0]
        vel = np.zeros((m, 2))
        pres = np.zeros(m)
        stress = np.zeros((m, 2, 2))
        for i in range(m):
            u0 = 0.0
            u1 = 0.0
            p = 0.0
            s00 = 0.0
            s01 = 0.0
            s11 = 0.0
            for j in range(n):
                rx = points[i, 0] - X[j, 0]
                ry = points[i, 1] - X[j, 1]
                r2 = rx * rx + ry * ry
                logr = 0.5 * np.log(r2)
                rf = rx * F[j, 0] + ry * F[j, 1]
                u0 += -logr * F[j, 0] + rx * rf / r2
                u1 += -logr * F[j, 1] + ry * rf / r2
                p += rf / r2
                c = rf / (r2 * r2)
                s00 += rx * rx * c
                s01 += rx * ry * c
                s11 += ry * ry * c
            vel[i, 0] = w * INV_4PI * u0
            vel[i, 1] = w * INV_4PI * u1
            pres[i] = w * INV_2PI * p
            stress[i, 0, 0] = -w * INV_PI * s00
            stress[i, 0, 1] = -w * INV_PI * s01
            stress[i, 1, 0] = -w * INV_PI * s01
            stress[i, 1, 1] = -w * INV_PI * s11
        return vel, pres, stress

    @njit(cache=True)
    def _nb_double_layer(points, X, normal, speed, w):
        m = points.shape[0]
        n = X.shape[0]
        out = np.zeros((m, 2, 2))
        for i in range(m):
            a = 0.0
            b = 0.0
            c = 0.0
            for j in range(n):
                rx = X[j, 0] - points[i, 0]
                ry = X[j, 1] - points[i, 1]
                r2 = rx * rx + ry * ry
                k = (rx * normal[j, 0] + ry * normal[j, 1]) * speed[j] / (r2 * r2)
                a += rx * rx * k
                b += rx * ry * k
                c += ry * ry * k
            out[i, 0, 0] = -w * INV_PI * a
            out[i, 0, 1] = -w * INV_PI * b
            out[i, 1, 0] = -w * INV_PI * b
            out[i, 1, 1] = -w * INV_PI * c
        return out


IMPLS = {
    "numpy": {
        "self_blocks": _np_self_blocks,
        "star_norm": _np_star_norm,
        "target_fields": _np_target_fields,
        "double_layer": _np_double_layer,
    }
}
if numba is not None:
    IMPLS["numba"] = {
        "self_blocks": _nb_self_blocks,
        "star_norm": _nb_star_norm,
        "target_fields": _nb_target_fields,
        "double_layer": _nb_double_layer,
    }

BACKEND = "numba" if USE_NUMBA else "numpy"
_active = IMPLS[BACKEND]

self_blocks = _active["self_blocks"]
star_norm_min = _active["star_norm"]
target_fields = _active["target_fields"]
double_layer_sum = _active["double_layer"]
