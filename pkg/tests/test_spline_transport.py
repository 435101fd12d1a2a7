"""Periodic cubic-spline interpolation and backward semi-Lagrangian advection."""

import numpy as np
import pytest

import vpsim as vp

from helpers import oracle_cyclic_solve, oracle_spline_eval


class TestBuildSpline:
    def test_constant_data_gives_constant_spline(self):
        s = vp.build_spline(np.full(16, 3.25), h=0.5)
        np.testing.assert_allclose(s.omega, 3.25, atol=1e-14)
        assert abs(vp.eval_spline(s, 1.2345) - 3.25) < 1e-14

    def test_kronecker_delta_matches_dense_solve(self):
        data = np.zeros(12)
        data[3] = 1.0
        s = vp.build_spline(data, h=1.0)
        np.testing.assert_allclose(s.omega, oracle_cyclic_solve(data), atol=1e-12)

    def test_random_data_matches_dense_solve(self):
        rng = np.random.default_rng(8)
        data = rng.standard_normal(37)
        s = vp.build_spline(data, h=0.3)
        np.testing.assert_allclose(s.omega, oracle_cyclic_solve(data), atol=1e-12)

    def test_too_few_points_rejected(self):
        with pytest.raises(vp.ConfigurationError):
            vp.build_spline(np.ones(3), h=1.0)

    def test_interpolation_property(self):
        rng = np.random.default_rng(9)
        data = rng.standard_normal(20)
        s = vp.build_spline(data, h=0.25, x0=1.0)
        got = vp.eval_spline(s, 1.0 + 0.25 * np.arange(20))
        np.testing.assert_allclose(got, data, rtol=1e-12, atol=1e-12)

    def test_fourth_order_convergence_on_sine(self):
        errs = {}
        for n in (64, 128):
            length = 2 * np.pi
            h = length / n
            xg = h * np.arange(n)
            s = vp.build_spline(np.sin(xg), h=h)
            xq = np.linspace(0, length, 1000, endpoint=False) + 0.123 * h
            errs[n] = np.max(np.abs(vp.eval_spline(s, xq) - np.sin(xq)))
        # classical bound (5/384) h^4 max|u''''| and ~16x reduction per doubling
        assert errs[64] <= 1.1 * (5 / 384) * (2 * np.pi / 64) ** 4
        assert 13.0 <= errs[64] / errs[128] <= 19.0


class TestEvalSpline:
    def test_against_naive_kernel_sum(self):
        rng = np.random.default_rng(10)
        data = rng.standard_normal(12)
        s = vp.build_spline(data, h=1.0, x0=0.5)
        for x in (0.8, 5.77, 11.99, -3.3):
            naive = oracle_spline_eval(s.omega, s.h, s.x0, np.mod(x - s.x0, 12.0) + s.x0)
            assert abs(vp.eval_spline(s, x) - naive) < 1e-13

    def test_partition_of_unity_under_shift(self):
        rng = np.random.default_rng(11)
        data = rng.standard_normal(24)
        s = vp.build_spline(data, h=0.5)
        for shift in (0.1234, 0.77, 3.21):
            shifted_sum = np.sum(vp.eval_spline(s, 0.5 * np.arange(24) - shift))
            assert abs(shifted_sum - data.sum()) < 1e-12 * max(1.0, abs(data.sum()))


class TestAdvectRow:
    def test_zero_shift_identity(self):
        rng = np.random.default_rng(12)
        row = rng.standard_normal(32)
        np.testing.assert_allclose(vp.advect_row_spline(row, 0.0, 1.0), row,
                                   rtol=1e-13, atol=1e-13)

    def test_whole_spacing_shift_is_cyclic_permutation(self):
        rng = np.random.default_rng(13)
        row = rng.standard_normal(32)
        out = vp.advect_row_spline(row, 1.0, 1.0)
        np.testing.assert_allclose(out, np.roll(row, 1), rtol=1e-13, atol=1e-13)

    def test_fractional_shift_matches_naive_oracle(self):
        rng = np.random.default_rng(14)
        n, h = 24, 0.5
        xg = h * np.arange(n)
        row = np.sin(2 * np.pi * xg / (n * h)) + 0.3 * rng.standard_normal(n)
        delta = 0.3 * h
        out = vp.advect_row_spline(row, delta, h)
        s = vp.build_spline(row, h=h)
        oracle = np.array([oracle_spline_eval(s.omega, h, 0.0, np.mod(x - delta, n * h))
                           for x in xg])
        np.testing.assert_allclose(out, oracle, atol=1e-13)

    @pytest.mark.parametrize("delta", [0.077, -1.31, 7.754])
    def test_mass_conserved_any_shift(self, delta):
        rng = np.random.default_rng(15)
        row = rng.standard_normal(40)
        out = vp.advect_row_spline(row, delta, 0.25)
        assert abs(out.sum() - row.sum()) <= 1e-13 * max(1.0, abs(row.sum()))

    def test_grid_point_projection_identity(self):
        # re-interpolating a spline's own grid values returns them unchanged
        rng = np.random.default_rng(16)
        row = rng.standard_normal(20)
        s = vp.build_spline(row, h=1.0)
        again = vp.build_spline(vp.eval_spline(s, np.arange(20.0)), h=1.0)
        np.testing.assert_allclose(again.omega, s.omega, rtol=1e-12, atol=1e-12)


def _spline_grid(n=16):
    return vp.PhaseSpaceGrid.spline((0.0, 4 * np.pi), (-6.0, 6.0), n, n)


class TestAdvectField:
    def test_advect_x_rowwise_equivalence(self):
        g = _spline_grid(16)
        rng = np.random.default_rng(17)
        f = vp.DistributionField(g, g.layout, rng.standard_normal((16, 16)))
        out = vp.advect_x_spline(f, 0.2)
        for j in range(16):
            np.testing.assert_allclose(
                out.values[j], vp.advect_row_spline(f.values[j], 0.2 * g.v_dofs[j], g.h_x),
                atol=1e-13)

    def test_advect_v_zero_field_identity(self):
        g = _spline_grid(16)
        rng = np.random.default_rng(18)
        f = vp.DistributionField(g, g.layout, rng.standard_normal((16, 16)))
        out = vp.advect_v_spline(f, np.zeros(16), 0.3)
        np.testing.assert_allclose(out.values, f.values, rtol=1e-13, atol=1e-13)

    def test_mass_conserved(self):
        g = _spline_grid(32)
        rng = np.random.default_rng(19)
        f = vp.DistributionField(g, g.layout, rng.standard_normal((32, 32)) + 2.0)
        m0 = f.mass()
        out = vp.advect_v_spline(vp.advect_x_spline(f, 0.31), rng.uniform(-1, 1, 32), 0.31)
        assert abs(out.mass() - m0) <= 1e-13 * abs(m0)

    def test_moment_identities_any_order(self):
        # the grid moments of the shifted spline equal the exactly
        # translated moments (B-spline linear/quadratic reproduction),
        # independent of polynomial order; the zero padding must be wide
        # because the interpolation inverse has global support with tail
        # (2 - sqrt(3))^distance, ~1e-14 after 24 points
        rng = np.random.default_rng(20)
        g = vp.PhaseSpaceGrid.spline((0.0, 2.0), (-6.0, 6.0), 16, 64)
        values = rng.uniform(0.5, 1.5, (64, 16))
        values[:24, :] = 0.0
        values[-24:, :] = 0.0
        f = vp.DistributionField(g, g.layout, values)
        e_vals = rng.uniform(-1.0, 1.0, 16)
        tau = 0.3
        wv = g.v_weights
        mass = wv @ f.values
        cur = (wv * g.v_dofs) @ f.values
        kin = (wv * g.v_dofs ** 2) @ f.values
        d = tau * e_vals
        out = vp.advect_v_spline(f, e_vals, tau)
        cur_new = g.x_weights @ ((wv * g.v_dofs) @ out.values)
        kin_new = g.x_weights @ ((wv * g.v_dofs ** 2) @ out.values)
        np.testing.assert_allclose(cur_new, g.x_weights @ (cur + d * mass), rtol=1e-12)
        np.testing.assert_allclose(kin_new,
                                   g.x_weights @ (kin + 2 * d * cur + d ** 2 * mass),
                                   rtol=1e-12)

    def test_evaluate_reproduces_grid_values(self):
        g = _spline_grid(16)
        rng = np.random.default_rng(21)
        f = vp.DistributionField(g, g.layout, rng.standard_normal((16, 16)))
        from vpsim import spline
        vals = spline.evaluate(f, g.x_dofs, g.v_dofs)
        np.testing.assert_allclose(vals, f.values, rtol=1e-11, atol=1e-11)
