"""Invariant computation, error series, damping fits, recurrence formula."""

import numpy as np
import pytest

import vpsim as vp
from vpsim.diagnostics import InvariantRecord
from vpsim.fields import ElectricField1D

from helpers import dense_mass_2d


def _zero_field(n, dx):
    z = np.zeros(n)
    return ElectricField1D(values_equidistant=z, values_at_dof=z, dx=dx)


def test_zero_distribution_all_zero():
    g = vp.PhaseSpaceGrid.dg((0, 2), (-1, 1), 4, 4, 1, 1)
    f = vp.DistributionField(g, g.layout, np.zeros((8, 8)))
    rec = vp.invariants(f, _zero_field(8, g.dx_equidistant))
    for name in ("mass", "current", "kinetic", "electric", "total_energy",
                 "entropy", "l1", "l2", "min_value"):
        assert getattr(rec, name) == 0.0


def test_uniform_distribution_closed_forms():
    c = 0.37
    g = vp.PhaseSpaceGrid.dg((0, 3), (-2, 2), 6, 6, 2, 2)
    f = vp.DistributionField(g, g.layout, np.full((18, 18), c))
    rec = vp.invariants(f, _zero_field(18, g.dx_equidistant))
    area = 3.0 * 4.0
    assert abs(rec.mass - c * area) < 1e-12
    assert abs(rec.entropy - (-area * c * np.log(c))) < 1e-12
    assert abs(rec.l2 - c * np.sqrt(area)) < 1e-12
    assert abs(rec.l1 - c * area) < 1e-12
    assert abs(rec.current) < 1e-13
    # kinetic: c/2 * Lx * integral v^2 dv over [-2,2] = c/2 * 3 * 16/3
    assert abs(rec.kinetic - 0.5 * c * 3.0 * (16.0 / 3.0)) < 1e-12


def test_bump_on_tail_current_value():
    # analytic: Lx * 0.2 * 2.5 * integral of the unit-mass beam = pi/sqrt(2)
    cfg = vp.scenario("bump_on_tail")
    g = vp.PhaseSpaceGrid.dg((cfg.x_min, cfg.x_max), (cfg.v_min, cfg.v_max), 32, 32, 3, 3)
    f = vp.initial_condition(cfg, g)
    rec = vp.invariants(f, _zero_field(g.n_dof_x, g.dx_equidistant))
    analytic = 4 * np.pi * 0.2 * 2.5 / (2 * np.sqrt(2))
    assert abs(analytic - np.pi / np.sqrt(2))  < 1e-12
    # cross-check by a dense quadrature oracle on the initial condition
    oracle = dense_mass_2d(
        lambda x, v: v * (0.8 * np.exp(-0.5 * v ** 2)
                          + 0.2 * np.exp(-4 * (v - 2.5) ** 2) * (1 + 0.1 * np.cos(x)))
        / np.sqrt(2 * np.pi),
        (0, 4 * np.pi), (-6, 6))
    assert abs(rec.current - oracle) < 1e-8
    assert abs(rec.current - analytic) < 1e-6   # Gaussian tail truncation


def test_if_nonnegative_l1_equals_mass():
    g = vp.PhaseSpaceGrid.spline((0, 1), (-1, 1), 8, 8)
    rng = np.random.default_rng(0)
    f = vp.DistributionField(g, g.layout, rng.uniform(0.0, 1.0, (8, 8)))
    rec = vp.invariants(f, _zero_field(8, g.dx_equidistant))
    assert rec.min_value >= 0
    assert abs(rec.l1 - rec.mass) <= 1e-13 * rec.mass


def _mk_record(t, **kw):
    base = dict(t=t, mass=1.0, current=0.0, kinetic=1.0, electric=0.5,
                total_energy=1.5, entropy=2.0, l1=1.0, l2=1.0, min_value=0.0)
    base.update(kw)
    return InvariantRecord(**base)


class TestErrorSeries:
    def test_single_record_zero(self):
        err = vp.error_series([_mk_record(0.0)])
        for name in ("mass", "current", "total_energy", "entropy", "l1", "l2"):
            np.testing.assert_array_equal(err[name], [0.0])

    def test_constant_series_zero(self):
        err = vp.error_series([_mk_record(t) for t in (0.0, 1.0, 2.0)])
        for name in ("mass", "kinetic", "l2"):
            np.testing.assert_array_equal(err[name], [0.0, 0.0, 0.0])

    def test_synthetic_drift_hand_computed(self):
        recs = [_mk_record(0.0), _mk_record(1.0, mass=1.1, entropy=1.0),
                _mk_record(2.0, mass=0.8, entropy=4.0)]
        err = vp.error_series(recs)
        np.testing.assert_allclose(err["mass"], [0.0, 0.1 / 1.0, 0.2 / 1.0], atol=1e-15)
        np.testing.assert_allclose(err["entropy"], [0.0, 0.5, 1.0], atol=1e-15)

    def test_current_uses_absolute_error_when_starting_at_zero(self):
        recs = [_mk_record(0.0, current=0.0), _mk_record(1.0, current=3e-7)]
        err = vp.error_series(recs)
        np.testing.assert_allclose(err["current"], [0.0, 3e-7], atol=1e-20)

    def test_current_relative_when_nonzero(self):
        recs = [_mk_record(0.0, current=2.0), _mk_record(1.0, current=2.2)]
        err = vp.error_series(recs)
        np.testing.assert_allclose(err["current"], [0.0, 0.1], atol=1e-15)


class TestFitDampingRate:
    def test_exact_exponential(self):
        t = np.linspace(0, 10, 101)
        gamma = 0.3127
        rate = vp.fit_damping_rate(t, np.exp(-2 * gamma * t), (0.0, 10.0))
        assert abs(rate - gamma) < 1e-10

    def test_noisy_synthetic_within_noise_bound(self):
        rng = np.random.default_rng(1)
        t = np.linspace(0, 10, 401)
        gamma = 0.21
        noise = 1.0 + 0.02 * rng.standard_normal(t.size)
        rate = vp.fit_damping_rate(t, np.exp(-2 * gamma * t) * noise, (0.0, 10.0))
        assert abs(rate - gamma) < 0.01

    def test_oscillating_series_fits_envelope(self):
        t = np.linspace(0, 10, 501)
        gamma, omega = 0.153, 1.4156
        energy = np.exp(-2 * gamma * t) * (np.cos(omega * t) ** 2 + 1e-12)
        rate = vp.fit_damping_rate(t, energy, (0.5, 9.5))
        assert abs(rate - gamma) / gamma < 0.02

    def test_nonpositive_values_rejected(self):
        t = np.linspace(0, 1, 11)
        with pytest.raises(ValueError):
            vp.fit_damping_rate(t, np.linspace(1, -0.1, 11), (0.0, 1.0))

    def test_empty_window_rejected(self):
        t = np.linspace(0, 1, 11)
        with pytest.raises(ValueError):
            vp.fit_damping_rate(t, np.ones(11), (5.0, 6.0))


class TestRecurrenceTime:
    def test_formula_128_points(self):
        g = vp.PhaseSpaceGrid.spline((0, 4 * np.pi), (-6, 6), 128, 128)
        tr = vp.recurrence_time(g, 0.5)
        assert abs(tr - 2 * np.pi / (0.5 * (12.0 / 128.0))) < 1e-12
        assert abs(tr - 134.0413) < 1e-3

    def test_doubling_resolution_doubles_time(self):
        g1 = vp.PhaseSpaceGrid.spline((0, 4 * np.pi), (-6, 6), 64, 64)
        g2 = vp.PhaseSpaceGrid.spline((0, 4 * np.pi), (-6, 6), 64, 128)
        assert abs(vp.recurrence_time(g2, 0.5) / vp.recurrence_time(g1, 0.5) - 2) < 1e-12

    def test_dg_and_spline_equal_effective_spacing(self):
        gdg = vp.PhaseSpaceGrid.dg((0, 4 * np.pi), (-6, 6), 64, 64, 1, 1)
        gsp = vp.PhaseSpaceGrid.spline((0, 4 * np.pi), (-6, 6), 128, 128)
        assert abs(vp.recurrence_time(gdg, 0.5) - vp.recurrence_time(gsp, 0.5)) < 1e-12

    def test_nonpositive_wavenumber_rejected(self):
        g = vp.PhaseSpaceGrid.spline((0, 1), (-1, 1), 8, 8)
        with pytest.raises(ValueError):
            vp.recurrence_time(g, 0.0)


class TestPropertyCheckers:
    def test_positivity_l1_checker(self):
        good = [_mk_record(0.0), _mk_record(1.0, min_value=-1e-6, l1=1.001)]
        assert vp.positivity_l1_violations(good) == []
        bad = [_mk_record(1.0, min_value=-1e-6, l1=1.0)]
        assert len(vp.positivity_l1_violations(bad)) == 1
        # tiny round-off negatives are below the threshold
        ok = [_mk_record(1.0, min_value=-1e-15, l1=1.0)]
        assert vp.positivity_l1_violations(ok) == []

    def test_entropy_checker(self):
        recs = [_mk_record(0.0, entropy=2.0), _mk_record(1.0, entropy=2.1),
                _mk_record(2.0, entropy=2.0999)]
        viol = vp.entropy_violations(recs, slack=1e-10)
        assert len(viol) == 1 and viol[0][0] == 2.0
        assert vp.entropy_violations(recs, slack=1e-3) == []

    def test_l2_increase_counter(self):
        recs = [_mk_record(0.0, l2=1.0), _mk_record(1.0, l2=0.9),
                _mk_record(2.0, l2=0.95), _mk_record(3.0, l2=0.94)]
        assert vp.l2_increase_count(recs) == 1
