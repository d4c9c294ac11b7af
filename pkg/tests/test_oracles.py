import numpy as np
import pytest

from stokes_tension.curve import circle, ellipse
from stokes_tension.oracles import (
    FrameFourierForce,
    L0_closed_form,
    Q0_closed_form,
    circle_sigma,
    frame_coefficients,
    split_Q_check,
    table1_exact,
    table1_force,
    toland_check,
)
from stokes_tension.spectral import PeriodicGrid
from stokes_tension.tension import apply_L, apply_Q, solve_tension

GRID = PeriodicGrid(64)
TH = GRID.nodes
XC = np.column_stack([np.cos(TH), np.sin(TH)])
DXC = np.column_stack([-np.sin(TH), np.cos(TH)])


class TestCircleSigma:
    def test_table1_coefficients(self):
        ff = frame_coefficients(table1_force(GRID), GRID, 3)
        assert ff.coeff("a", 0) == pytest.approx(4.0)
        assert ff.coeff("b", 1) == pytest.approx(1.0)
        assert ff.coeff("c", 0) == pytest.approx(4.0)
        assert ff.coeff("c", 1) == pytest.approx(-1.0)
        assert np.abs(circle_sigma(ff, GRID) - np.sin(TH)).max() < 1e-13

    def test_a2_absent(self):
        ff = FrameFourierForce(a=(0, 0, 1.0))
        assert np.abs(circle_sigma(ff, GRID)).max() == 0

    def test_d2(self):
        ff = FrameFourierForce(d=(0, 0, 1.0))
        assert np.allclose(ff.values(GRID), np.sin(2 * TH)[:, None] * DXC)
        assert np.abs(circle_sigma(ff, GRID) - 0.5 * np.cos(2 * TH)).max() < 1e-15

    def test_agrees_with_solver(self, rng):
        c = circle(64)
        for _ in range(5):
            ff = FrameFourierForce(*(tuple(rng.standard_normal(9)) for _ in range(4)))
            sol = solve_tension(c, ff.values(GRID), "mean_zero")
            assert np.abs(sol.sigma - circle_sigma(ff, GRID)).max() < 1e-10

    def test_frame_round_trip(self, rng):
        ff = FrameFourierForce(*(tuple(rng.standard_normal(6)) for _ in range(4)))
        back = frame_coefficients(ff.values(GRID), GRID, 5)
        for name in "ac":
            assert np.allclose(getattr(back, name), getattr(ff, name), atol=1e-13)
        # sine coefficients of index 0 multiply sin(0) and carry no information
        for name in "bd":
            assert np.allclose(getattr(back, name)[1:], getattr(ff, name)[1:], atol=1e-13)


class TestQ0:
    @pytest.mark.parametrize("n", [2, 3, 6])
    def test_sin_dxc(self, n):
        assert np.abs(Q0_closed_form(np.sin(n * TH)[:, None] * DXC) - 0.25 * np.cos(n * TH)).max() < 1e-14

    def test_cos_xc(self):
        assert np.abs(Q0_closed_form(np.cos(TH)[:, None] * XC) - 0.125 * np.cos(TH)).max() < 1e-14

    def test_dxc(self):
        assert np.abs(Q0_closed_form(DXC)).max() < 1e-14

    def test_matches_apply_q(self, rng):
        c = circle(64)
        for _ in range(5):
            k = np.arange(10)
            F = np.cos(np.outer(TH, k)) @ rng.standard_normal((10, 2)) + np.sin(np.outer(TH, k)) @ rng.standard_normal(
                (10, 2)
            )
            assert np.abs(Q0_closed_form(F) - apply_Q(c, F)).max() < 1e-10

    def test_l0_matches_apply_l(self, rng):
        sig = sum(rng.standard_normal() * np.cos(k * TH + rng.uniform(0, 6)) for k in range(10))
        assert np.abs(L0_closed_form(sig) - apply_L(circle(64), sig)).max() < 1e-12


class TestToland:
    def test_cos(self):
        lhs, rhs = toland_check(np.cos(TH))
        assert np.abs(lhs - rhs).max() < 1e-10

    def test_const(self):
        lhs, rhs = toland_check(np.full(64, 2.0))
        assert np.abs(lhs).max() < 1e-13 and np.abs(rhs).max() < 1e-13

    def test_mixed(self):
        lhs, rhs = toland_check(np.cos(TH) + 0.5 * np.sin(3 * TH))
        assert np.abs(lhs - rhs).max() < 1e-9


class TestSplitQ:
    def test_circle(self):
        c = circle(64)
        F = np.sin(2 * TH)[:, None] * DXC
        assert np.abs(split_Q_check(c, F) - apply_Q(c, F)).max() < 1e-9

    def test_ellipse_random(self, rng):
        c = ellipse(64, 1.5, 1 / 1.5)
        k = np.arange(8)
        F = np.cos(np.outer(TH, k)) @ rng.standard_normal((8, 2))
        assert np.abs(split_Q_check(c, F) - apply_Q(c, F)).max() < 1e-8

    def test_zero(self):
        assert np.abs(split_Q_check(ellipse(32, 1.2, 1.0), np.zeros((32, 2)))).max() == 0


def test_table1_exact_values():
    s, U = table1_exact(GRID)
    assert np.allclose(s, np.sin(TH)) and np.allclose(U, np.column_stack([-2 * np.sin(TH), 2 * np.cos(TH)]))
