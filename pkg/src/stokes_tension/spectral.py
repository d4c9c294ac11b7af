"""Spectral calculus on the uniform periodic grid.

Grid functions are plain numpy arrays: shape ``(N,)`` for scalars and
``(N, 2)`` for vector fields.  Every operator acts along axis 0, so both
shapes go through the same code.

FFT convention: the forward transform is unnormalized and the inverse carries
``1/N`` (numpy's default), so a multiplier ``m(k)`` acts as
``ifft(m * fft(f))``.  The Nyquist mode ``k = N/2`` is zeroed by the
derivative and Hilbert multipliers to keep real data real.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import circulant

__all__ = [
    "PeriodicGrid",
    "wavenumbers",
    "fourier_derivative",
    "fourier_antiderivative",
    "hilbert_transform",
    "hilbert_dtheta",
    "log_kernel_multiplier",
    "differentiation_matrix",
    "log_kernel_matrix",
    "trig_interpolate",
    "trapezoid",
    "l2_norm",
]


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid ``theta_j = 2*pi*j/N`` on the circle, ``N`` even and >= 8."""

    n_points: int

    def __post_init__(self):
        n = self.n_points
        if int(n) != n or n < 8 or n % 2:
            raise ValueError(f"n_points must be an even integer >= 8, got {n!r}")

    @cached_property
    def nodes(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_points) / self.n_points

    @property
    def weight(self) -> float:
        """Trapezoid weight ``2*pi/N``."""
        return 2.0 * np.pi / self.n_points

    def __len__(self):
        return self.n_points


def wavenumbers(n: int) -> np.ndarray:
    """Integer wavenumbers in FFT order; index ``n//2`` holds ``-n/2``."""
    return np.fft.fftfreq(n, 1.0 / n)


def _apply_multiplier(f, mult):
    f = np.asarray(f, dtype=float)
    shape = (-1,) + (1,) * (f.ndim - 1)
    return np.fft.ifft(mult.reshape(shape) * np.fft.fft(f, axis=0), axis=0).real


def _derivative_multiplier(n, order=1):
    k = wavenumbers(n)
    m = (1j * k) ** order
    if order % 2:
        m[n // 2] = 0.0
    return m


def fourier_derivative(f, order: int = 1) -> np.ndarray:
    """Spectral derivative ``d^order f / dtheta^order``."""
    f = np.asarray(f, dtype=float)
    return _apply_multiplier(f, _derivative_multiplier(f.shape[0], order))


def fourier_antiderivative(f) -> np.ndarray:
    """Periodic antiderivative of the mean-free part of ``f``, zero at ``theta = 0``.

    The caller adds ``mean(f) * theta`` for the secular part.
    """
    f = np.asarray(f, dtype=float)
    n = f.shape[0]
    k = wavenumbers(n)
    m = np.zeros(n, dtype=complex)
    m[1:] = 1.0 / (1j * k[1:])
    m[n // 2] = 0.0
    F = _apply_multiplier(f, m)
    return F - F[:1]


def hilbert_transform(f) -> np.ndarray:
    """Periodic Hilbert transform, multiplier ``-i sign(k)``.

    Equals the principal value of ``(1/2pi) int cot((theta - t)/2) f(t) dt``
    for band-limited ``f``; the mean is annihilated.
    """
    f = np.asarray(f, dtype=float)
    n = f.shape[0]
    m = -1j * np.sign(wavenumbers(n))
    m[n // 2] = 0.0
    return _apply_multiplier(f, m)


def hilbert_dtheta(f) -> np.ndarray:
    """``H d/dtheta``, i.e. the multiplier ``|k|`` (zero at Nyquist)."""
    f = np.asarray(f, dtype=float)
    n = f.shape[0]
    m = np.abs(wavenumbers(n)).astype(complex)
    m[n // 2] = 0.0
    return _apply_multiplier(f, m)


def _log_multiplier(n):
    k = np.abs(wavenumbers(n))
    m = np.zeros(n)
    m[1:] = 0.5 / k[1:]
    return m


def log_kernel_multiplier(f) -> np.ndarray:
    """Apply ``(1/2pi) int -log|2 sin((theta - t)/2)| f(t) dt`` exactly.

    The kernel has Fourier series ``sum_{k>=1} cos(k x)/k``, so mode ``k``
    is scaled by ``1/(2|k|)`` and the mean is sent to zero.  The Nyquist
    mode keeps its exact factor ``1/N``: the operator acts on the
    trigonometric interpolant, for which that mode is ``cos(N theta/2)``.
    """
    f = np.asarray(f, dtype=float)
    return _apply_multiplier(f, _log_multiplier(f.shape[0]).astype(complex))


def differentiation_matrix(n: int) -> np.ndarray:
    """Dense matrix of :func:`fourier_derivative` (antisymmetric, circulant)."""
    col = np.fft.ifft(_derivative_multiplier(n)).real
    return circulant(col)


def log_kernel_matrix(n: int) -> np.ndarray:
    """Dense symmetric circulant matrix of :func:`log_kernel_multiplier`."""
    col = np.fft.ifft(_log_multiplier(n)).real
    return circulant(col)


def trig_interpolate(f, theta) -> np.ndarray:
    """Evaluate the trigonometric interpolant of grid samples at arbitrary angles.

    The Nyquist mode is split symmetrically, so a real ``f`` interpolates to
    a real function that matches the samples at the nodes.
    """
    f = np.asarray(f, dtype=float)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    n = f.shape[0]
    c = np.fft.fft(f, axis=0) / n
    k = wavenumbers(n)
    nyq = c[n // 2].real
    c[n // 2] = 0.0
    out = (np.exp(1j * np.outer(theta, k)) @ c).real
    nyq_wave = np.cos(0.5 * n * theta)
    if f.ndim > 1:
        nyq_wave = nyq_wave[:, None]
    return out + nyq_wave * nyq


def trapezoid(f, weight: float | None = None) -> np.ndarray | float:
    """Periodic trapezoid rule ``(2pi/N) sum f_j`` along axis 0."""
    f = np.asarray(f, dtype=float)
    w = 2.0 * np.pi / f.shape[0] if weight is None else weight
    return w * f.sum(axis=0)


def l2_norm(f) -> float:
    """Trapezoid ``L2`` norm, summing over vector components."""
    f = np.asarray(f, dtype=float)
    return float(np.sqrt(trapezoid(f * f).sum()))
