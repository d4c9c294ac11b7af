import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stokes_tension.errors import SingularPoint
from stokes_tension.kernels import cot_regularization, pressure_kernel, stokeslet, stresslet

vec = st.tuples(st.floats(-10, 10), st.floats(-10, 10)).filter(lambda r: np.hypot(*r) > 1e-3)


def test_stokeslet_values():
    assert np.allclose(stokeslet([1.0, 0.0]), np.array([[1, 0], [0, 0]]) / (4 * np.pi))
    expected = np.array([[-np.log(2), 0], [0, 1 - np.log(2)]]) / (4 * np.pi)
    assert np.allclose(stokeslet([0.0, 2.0]), expected, atol=1e-16)


@given(vec)
def test_stokeslet_even_and_trace(r):
    r = np.array(r)
    G = stokeslet(r)
    assert np.array_equal(G, stokeslet(-r))
    assert np.trace(4 * np.pi * G) == pytest.approx(-2 * np.log(np.linalg.norm(r)) + 1, abs=1e-13)


def test_singular_point():
    for fn in (stokeslet, pressure_kernel, stresslet):
        with pytest.raises(SingularPoint):
            fn([0.0, 0.0])
    with pytest.raises(SingularPoint):
        stresslet([1e-10, 0.0], scale=1e4)


def test_pressure_and_stresslet_values():
    assert np.allclose(pressure_kernel([0.0, 1.0]), [0.0, 1 / (2 * np.pi)])
    T = stresslet([1.0, 0.0])
    assert T[0, 0, 0] == pytest.approx(-1 / np.pi)
    mask = np.ones((2, 2, 2), bool)
    mask[0, 0, 0] = False
    assert np.abs(T[mask]).max() < 1e-17


@given(vec)
def test_stresslet_homogeneity_and_contraction(r):
    r = np.array(r)
    T = stresslet(r)
    assert np.allclose(stresslet(2 * r), T / 2, atol=1e-14)
    rho = np.linalg.norm(r)
    contracted = T @ (r / rho)
    assert np.allclose(contracted, -np.outer(r, r) / (np.pi * rho**3), atol=1e-14 / rho)


def test_cot_regularization():
    assert cot_regularization(1.0, 1.0) == 0.0
    assert cot_regularization(np.pi, 0.0) == pytest.approx(-1 / np.pi)
    s = np.linspace(-3, 3, 41)
    assert np.allclose(cot_regularization(s, 0.3), -cot_regularization(0.3, s), atol=1e-15)
    # smooth across the series switch
    assert cot_regularization(1e-4 * 1.0001, 0) == pytest.approx(cot_regularization(1e-4 * 0.9999, 0), rel=1e-3)


def test_cot_regularization_linear_bound():
    d = np.linspace(1e-6, np.pi, 2001)
    ratio = np.abs(cot_regularization(d, 0.0)) / d
    assert ratio.max() <= 0.12
