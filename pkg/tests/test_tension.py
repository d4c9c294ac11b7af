import warnings

import numpy as np
import pytest

from stokes_tension.curve import PerturbationSpec, circle, ellipse, fourier_curve, perturbed_circle, reparametrize_by_arclength
from stokes_tension.errors import IllConditioned, SingularOperator
from stokes_tension.oracles import table1_exact, table1_force
from stokes_tension.potentials import single_layer_on_interface
from stokes_tension.spectral import PeriodicGrid, fourier_derivative, trig_interpolate
from stokes_tension.tension import (
    ForceDensity,
    OperatorMatrix,
    apply_L,
    apply_Q,
    assemble_L,
    assemble_Q,
    decompose_rhs,
    solve_tension,
)


def frame(th):
    return np.column_stack([np.cos(th), np.sin(th)]), np.column_stack([-np.sin(th), np.cos(th)])


def bending_force(c):
    """Bending-type normal force per unit parameter: ``(d_s^2 kappa + kappa^3 / 2) n |X'|``."""
    ds = lambda f: fourier_derivative(f) / c.speed  # noqa: E731
    k = c.curvature
    return ((ds(ds(k)) + 0.5 * k**3) * c.speed)[:, None] * c.normal


class TestApplyQ:
    @pytest.mark.parametrize("n", [2, 3, 7])
    def test_circle_cos_dxc(self, n):
        c = circle(64)
        _, dXc = frame(c.theta)
        q = apply_Q(c, np.cos(n * c.theta)[:, None] * dXc)
        assert np.abs(q + 0.25 * np.sin(n * c.theta)).max() < 1e-13

    def test_circle_xc(self):
        c = circle(64)
        assert np.abs(apply_Q(c, c.position)).max() < 1e-13

    def test_integral_vanishes_on_circles(self, rng):
        for c in (circle(64), circle(64, 2.0, (0.5, -1.0))):
            F = rng.standard_normal((64, 2))
            F = np.real(np.fft.ifft(np.fft.fft(F, axis=0) * (np.abs(np.fft.fftfreq(64, 1 / 64)) < 10)[:, None], axis=0))
            assert abs(c.grid.weight * apply_Q(c, F).sum()) < 1e-12

    def test_integral_equals_curvature_flux(self, rng):
        # in general int Q dtheta = -int S[F] . dtau/dtheta dtheta, not zero
        c = ellipse(64, 1.5, 1 / 1.5)
        th = c.theta
        F = np.column_stack([np.cos(2 * th) + 0.3 * np.sin(th), np.sin(3 * th) + 0.5])
        u = single_layer_on_interface(c, F)
        lhs = c.grid.weight * apply_Q(c, F).sum()
        rhs = -c.grid.weight * np.sum(u * fourier_derivative(c.tangent))
        assert lhs == pytest.approx(rhs, abs=1e-13)
        assert abs(lhs) > 1e-2

    def test_matrix_matches(self, rng):
        c = fourier_curve(32, x_cos=[0, 1.2, 0.1], y_sin=[0, 1.0])
        F = rng.standard_normal((32, 2))
        assert np.allclose(assemble_Q(c) @ np.concatenate([F[:, 0], F[:, 1]]), apply_Q(c, F), atol=1e-12)


class TestApplyL:
    @pytest.mark.parametrize("n", [1, 2, 5])
    def test_circle_sin(self, n):
        c = circle(64)
        assert np.abs(apply_L(c, np.sin(n * c.theta)) + n / 4 * np.sin(n * c.theta)).max() < 1e-13

    def test_circle_constant(self):
        assert np.abs(apply_L(circle(64), np.ones(64))).max() < 1e-13

    def test_linear(self, rng):
        c = ellipse(32, 1.3, 0.9)
        a, b = rng.standard_normal(32), rng.standard_normal(32)
        assert np.allclose(apply_L(c, 2 * a - 3 * b), 2 * apply_L(c, a) - 3 * apply_L(c, b), atol=1e-12)

    def test_negative_semidefinite(self, rng):
        for _ in range(5):
            c = fourier_curve(64, x_cos=[0, 1, rng.uniform(-0.15, 0.15)], y_sin=[0, 1, rng.uniform(-0.15, 0.15)])
            th = c.theta
            sig = sum(rng.standard_normal() * np.cos(k * th + rng.uniform(0, 6)) for k in range(8))
            assert c.grid.weight * np.dot(sig, apply_L(c, sig)) <= 1e-10


class TestAssemble:
    def test_circle_spectrum(self):
        ev = np.sort(np.linalg.eigvalsh(assemble_L(circle(32)).symmetrized()))[::-1]
        expected = [0, -0.25, -0.25, -0.5, -0.5, -0.75, -0.75]
        assert np.allclose(ev[:7], expected, atol=1e-12)

    def test_matches_apply(self):
        c = fourier_curve(64, x_cos=[0, 1.2, 0.1], y_sin=[0, 1.0])
        s3 = np.sin(3 * c.theta)
        assert np.abs(assemble_L(c) @ s3 - apply_L(c, s3)).max() < 1e-10

    def test_asymmetry_small(self):
        L = assemble_L(fourier_curve(64, x_cos=[0, 1.2, 0.1], y_sin=[0, 1.0, 0, 0.1]))
        assert L.asymmetry <= 1e-8
        assert L.shape == (64, 64)

    def test_rejects_nonfinite(self):
        with pytest.raises(FloatingPointError):
            OperatorMatrix.from_entries(np.array([[np.nan]]), 1.0)


class TestSolve:
    @pytest.mark.parametrize("n", [32, 64])
    def test_table1(self, n):
        c = circle(n)
        sol = solve_tension(c, table1_force(c.grid), "mean_zero")
        s, U = table1_exact(c.grid)
        assert np.abs(sol.sigma - s).max() <= 1e-10
        assert np.abs(sol.interface_velocity - U).max() <= 1e-10
        assert sol.residual_inext < 1e-12
        assert abs(c.grid.weight * sol.sigma.sum()) < 1e-12

    def test_auto_mode_selection(self):
        c = circle(32)
        assert solve_tension(c, table1_force(c.grid)).mode == "mean_zero"
        e = ellipse(32, 1.5, 1 / 1.5)
        assert solve_tension(e, bending_force(e)).mode == "plain"

    def test_plain_on_circle_raises(self):
        c = circle(32)
        with pytest.raises(SingularOperator):
            solve_tension(c, table1_force(c.grid), "plain")

    def test_bad_arguments(self):
        c = circle(16)
        with pytest.raises(ValueError):
            solve_tension(c, np.zeros((16, 2)), "lsq")
        with pytest.raises(ValueError):
            solve_tension(c, np.zeros((8, 2)))

    def test_ellipse_bending_self_convergence(self):
        sols = []
        for n in (128, 256):
            e = ellipse(n, 1.5, 1 / 1.5)
            sol = solve_tension(e, bending_force(e), "plain")
            assert sol.residual_inext <= 1e-8
            sols.append(sol.sigma)
        change = np.abs(sols[1][::2] - sols[0]).max() / np.abs(sols[1]).max()
        assert change <= 1e-8

    def test_solve_apply_consistency(self, rng):
        c = fourier_curve(64, x_cos=[0, 1.2, 0.1], y_sin=[0, 1.0, 0, 0.1])
        F = rng.standard_normal((64, 2))
        sol = solve_tension(c, F)
        QF = apply_Q(c, F)
        assert np.abs(apply_L(c, sol.sigma) + QF).max() <= 1e-8 * np.abs(QF).max()

    def test_curvature_oracle(self):
        # F = d(kappa tau)/dtheta is balanced exactly by sigma = -kappa
        c = ellipse(64, 1.5, 1 / 1.5)
        F = fourier_derivative(c.curvature[:, None] * c.tangent)
        sol = solve_tension(c, F, "plain")
        assert np.abs(sol.sigma + c.curvature).max() < 1e-10
        assert np.abs(sol.interface_velocity).max() < 1e-10

    def test_ill_conditioned_warning(self):
        c = perturbed_circle(PerturbationSpec(0.5, (0.0, 0.5), (), 1e-3), 64)
        F = np.column_stack([np.sin(2 * c.theta), np.cos(c.theta)])
        with pytest.warns(IllConditioned):
            sol = solve_tension(c, F, "plain")
        assert sol.condition_estimate > 1e6

    def test_no_warning_far_from_circle(self):
        e = ellipse(32, 1.5, 1 / 1.5)
        with warnings.catch_warnings():
            warnings.simplefilter("error", IllConditioned)
            solve_tension(e, bending_force(e))

    def test_reparametrization_consistency(self):
        c = fourier_curve(128, x_cos=[0.0, 1.4, 0.1], y_sin=[0.0, 0.9, 0.0, 0.08])
        c_s, thetas = reparametrize_by_arclength(c)

        def force(cur):
            x, y = cur.position.T
            return ((x * x - y) * cur.speed)[:, None] * cur.normal

        s1 = solve_tension(c, force(c), "plain").sigma
        s2 = solve_tension(c_s, force(c_s), "plain").sigma
        assert np.abs(trig_interpolate(s1, thetas) - s2).max() <= 1e-6


class TestForceDensity:
    def test_decompose_circle(self):
        c = circle(32)
        Xc, dXc = frame(c.theta)
        f1, f2 = decompose_rhs(c, Xc)
        assert np.allclose(f1, 0, atol=1e-14) and np.allclose(f2, 1, atol=1e-14)
        f1, f2 = decompose_rhs(c, dXc)
        assert np.allclose(f1, 1, atol=1e-14) and np.allclose(f2, 0, atol=1e-14)

    def test_reconstruction(self, rng):
        c = ellipse(32, 1.4, 0.8)
        F = rng.standard_normal((32, 2))
        f1, f2 = decompose_rhs(c, F)
        assert np.abs(f1[:, None] * c.tangent + f2[:, None] * c.normal - F).max() < 1e-14

    def test_frame_coeffs_table1(self):
        grid = PeriodicGrid(32)
        F = ForceDensity.from_frame_coeffs(32, a=[4.0], b=[0.0, 1.0], c=[4.0, -1.0])
        assert np.allclose(F.values, table1_force(grid), atol=1e-13)
        assert np.asarray(F).shape == (32, 2)

    def test_validation_and_mean(self):
        with pytest.raises(ValueError):
            ForceDensity(np.zeros((4, 3)))
        th = PeriodicGrid(16).nodes
        assert ForceDensity(np.column_stack([np.cos(th), np.sin(th)])).is_mean_zero()
        assert not ForceDensity(np.ones((16, 2))).is_mean_zero()
        F = ForceDensity(np.ones((16, 2)))
        with pytest.raises(ValueError):
            F.values[0, 0] = 3.0
