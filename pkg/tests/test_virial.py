"""Localized virial identities, decomposition, and exterior-mass control."""

import numpy as np
import pytest

from virial_nls.cutoffs import build_exterior_cutoff, build_pure_quadratic, build_virial_cutoff
from virial_nls.grid import Field, make_grid
from virial_nls.integrator import StepperConfig, evolve
from virial_nls.observables import EquationParams, variance, variance_rate, virial_q
from virial_nls.virial import (
    check_lemma25_bound,
    decompose,
    eval_I,
    eval_Idoubleprime,
    eval_Iprime,
    exterior_mass_budget,
    interpolation_exponent,
    min_c_tilde,
)
from virial_nls import families

from helpers import bump, random_smooth_field

SQRT_PI = float(np.sqrt(np.pi))


@pytest.fixture(scope="module")
def grid():
    return make_grid(1, 1024, 40.0)


@pytest.fixture(scope="module")
def quad(grid):
    return build_pure_quadratic(grid)


@pytest.fixture(scope="module")
def loc(grid):
    return build_virial_cutoff(5.0, grid)


class TestEvalI:
    def test_gaussian_second_moment(self, grid, quad):
        f = Field(np.exp(-grid.axis() ** 2 / 2).astype(complex), grid)
        assert abs(eval_I(f, quad) - SQRT_PI / 2) < 1e-12
        assert abs(eval_I(f, quad) - variance(f)) == 0.0

    def test_real_field_iprime_zero(self, grid, quad):
        rng = np.random.default_rng(2)
        f = random_smooth_field(grid, rng)
        real = Field(f.values.real.astype(complex), grid)
        assert abs(eval_Iprime(real, quad)) < 1e-13

    def test_disjoint_supports_zero(self, grid):
        ext = build_exterior_cutoff(10.0, grid)
        inner = bump(grid, amplitude=1.0, width=4.0)  # support r < 4 < R/2
        assert eval_I(inner, ext) == 0.0

    def test_iprime_matches_variance_rate(self, grid, quad):
        rng = np.random.default_rng(3)
        f = random_smooth_field(grid, rng, scale=1.3)
        assert abs(eval_Iprime(f, quad) - variance_rate(f)) < 1e-12 * (
            1 + abs(variance_rate(f)))


class TestIdoubleprime:
    def test_pure_quadratic_reduces_to_8q(self, grid, quad):
        rng = np.random.default_rng(5)
        params = EquationParams(1, 3)
        for _ in range(5):
            f = random_smooth_field(grid, rng, scale=float(rng.uniform(0.5, 2.0)))
            a = eval_Idoubleprime(f, quad, params)
            b = 8.0 * virial_q(f, params)
            assert abs(a - b) <= 1e-12 * max(abs(b), 1e-30)

    def test_zero_field(self, grid, quad):
        z = Field(np.zeros(grid.shape, dtype=complex), grid)
        assert eval_Idoubleprime(z, quad, EquationParams(1, 3)) == 0.0

    def test_supported_inside_cap_matches_8q(self, grid, loc):
        params = EquationParams(1, 3)
        # gaussian tail ~ 3e-9 at r = R: numerically supported inside the cap
        f = families.gaussian(grid, amplitude=1.5, width=0.8)
        a = eval_Idoubleprime(f, loc, params)
        b = 8.0 * virial_q(f, params)
        assert abs(a - b) <= 1e-10 * max(abs(b), 1e-30)


class TestDecomposition:
    def test_pure_quadratic_error_terms_vanish(self, grid, quad):
        rng = np.random.default_rng(7)
        params = EquationParams(1, 5)
        f = random_smooth_field(grid, rng)
        s = decompose(f, quad, params)
        assert s.R1 == 0.0 and s.R2 == 0.0 and s.R3 == 0.0

    def test_50_random_fields_identity_and_r1(self, grid, quad, loc):
        rng = np.random.default_rng(11)
        params = EquationParams(1, 3)
        for _ in range(50):
            f = random_smooth_field(grid, rng, scale=float(rng.uniform(0.3, 2.5)))
            for prof in (quad, loc):
                s = decompose(f, prof, params)
                assert abs(s.residual) <= 1e-10 * max(s.residual_scale, 1e-30)
                assert s.R1 <= 1e-12

    def test_2d_identity(self):
        g = make_grid(2, 128, 16.0)
        quad2 = build_pure_quadratic(g)
        loc2 = build_virial_cutoff(6.0, g)
        rng = np.random.default_rng(13)
        params = EquationParams(2, 3)
        for _ in range(10):
            f = random_smooth_field(g, rng)
            for prof in (quad2, loc2):
                s = decompose(f, prof, params)
                assert abs(s.residual) <= 1e-10 * max(s.residual_scale, 1e-30)
                assert s.R1 <= 1e-12

    def test_radial3d_identity(self):
        g = make_grid(3, 512, 30.0, "radial3d")
        params = EquationParams(3, 3)
        quad3 = build_pure_quadratic(g)
        loc3 = build_virial_cutoff(4.0, g)
        rng = np.random.default_rng(17)
        for _ in range(10):
            f = random_smooth_field(g, rng)
            for prof in (quad3, loc3):
                s = decompose(f, prof, params)
                assert abs(s.residual) <= 1e-10 * max(s.residual_scale, 1e-30)
                assert s.R1 <= 1e-12

    def test_error_terms_vanish_inside_cap(self, grid, loc):
        params = EquationParams(1, 3)
        f = families.gaussian(grid, amplitude=1.2, width=0.8)
        s = decompose(f, loc, params)
        scale = max(s.residual_scale, 1.0)
        assert abs(s.R1) < 1e-12 * scale
        assert abs(s.R2) < 1e-12 * scale
        assert abs(s.R3) < 1e-12 * scale

    def test_annulus_mass_r1_nonpositive(self, grid, loc):
        params = EquationParams(1, 3)
        f = bump(grid, amplitude=1.0, width=2.0, center=7.5)  # mass in R < r < 2R
        s = decompose(f, loc, params)
        assert s.R1 <= 0.0
        assert s.R1 < -1e-6  # genuinely active, not vacuous


class TestLemma25:
    def test_theta_example(self):
        assert abs(interpolation_exponent(EquationParams(1, 3), 6.0) - 0.25) < 1e-15

    def test_interior_support_equality(self, grid, loc):
        params = EquationParams(1, 3)
        f = families.gaussian(grid, amplitude=1.0, width=0.8)
        s = decompose(f, loc, params)
        chk = check_lemma25_bound(s, 0.0, params, q=6.0, c_tilde=0.0)
        assert chk.min_c_tilde == 0.0
        assert abs(chk.margin) <= 1e-10 * max(abs(s.Idoubleprime), 1.0)

    def test_min_constant_finite_on_trajectory(self, grid, loc):
        params = EquationParams(1, 3)
        rng = np.random.default_rng(19)
        samples, exts = [], []
        for _ in range(8):
            f = random_smooth_field(grid, rng, scale=1.5)
            samples.append(decompose(f, loc, params))
            from virial_nls.observables import exterior_mass
            exts.append(np.sqrt(exterior_mass(f, loc.radius)))
        c = min_c_tilde(samples, exts, params, q=6.0)
        assert np.isfinite(c) and c >= 0.0


class TestDynamicConsistency:
    """Finite differences of measured I(t) match eval_Iprime / eval_Idoubleprime
    at second order in dt."""

    def _series(self, dt, profile, params, grid):
        u0 = families.gaussian(grid, amplitude=1.0)
        cfg = StepperConfig(dt0=dt, c_cfl=1e3, dt_min=1e-12, snapshot_stride=1, t_end=0.24)
        probe = [lambda t, f, _p=profile, _q=params: {
            "I": eval_I(f, _p),
            "Ip": eval_Iprime(f, _p),
            "Ipp": eval_Idoubleprime(f, _p, _q),
        }]
        res = evolve(u0, params, cfg, probes=probe)
        t = np.array([r.t for r in res.records])
        I = np.array([r.extras["I"] for r in res.records])
        Ip = np.array([r.extras["Ip"] for r in res.records])
        Ipp = np.array([r.extras["Ipp"] for r in res.records])
        return t, I, Ip, Ipp

    def test_orders(self):
        grid = make_grid(1, 512, 20.0)
        params = EquationParams(1, 3)
        profile = build_virial_cutoff(5.0, grid)
        errs_i, errs_ip = [], []
        dts = (4e-3, 2e-3, 1e-3)
        for dt in dts:
            t, I, Ip, Ipp = self._series(dt, profile, params, grid)
            fd_ip = (I[2:] - I[:-2]) / (2 * dt)
            fd_ipp = (Ip[2:] - Ip[:-2]) / (2 * dt)
            errs_i.append(np.abs(fd_ip - Ip[1:-1]).max())
            errs_ip.append(np.abs(fd_ipp - Ipp[1:-1]).max())
        for errs in (errs_i, errs_ip):
            order = np.log2(errs[0] / errs[-1]) / 2.0
            assert 1.8 <= order <= 2.2, (errs, order)


class TestGlasseyExactness:
    def test_mass_critical_variance_parabola(self):
        # N=1, p=5: Q = E conserved, so V(t) = V0 + V'(0) t + 4 E t^2 exactly
        grid = make_grid(1, 1024, 12.0)
        params = EquationParams(1, 5)
        u0 = families.gaussian(grid, amplitude=1.1)
        quad = build_pure_quadratic(grid)
        v0 = eval_I(u0, quad)
        v1 = eval_Iprime(u0, quad)
        from virial_nls.observables import energy
        e0 = energy(u0, params)
        cfg = StepperConfig(dt0=2e-4, c_cfl=1e3, dt_min=1e-12, snapshot_stride=5, t_end=0.5)
        probe = [lambda t, f: {"V": eval_I(f, quad)}]
        res = evolve(u0, params, cfg, probes=probe)
        t = np.array([r.t for r in res.records])
        V = np.array([r.extras["V"] for r in res.records])
        parab = v0 + v1 * t + 4.0 * e0 * t**2
        assert np.abs(V - parab).max() <= 1e-6 * np.abs(parab).max()


class TestExteriorMassBudget:
    def test_compact_data_bound_holds(self):
        grid = make_grid(1, 2048, 40.0)
        params = EquationParams(1, 3)
        u0 = bump(grid, amplitude=2.0, width=2.0)
        R = 15.0
        from virial_nls.virial import ext_mass_column
        from virial_nls.observables import exterior_mass as ext_fn
        probe = [lambda t, f: {ext_mass_column(R): ext_fn(f, R)}]
        cfg = StepperConfig(dt0=5e-4, c_cfl=10.0, dt_min=1e-12, snapshot_stride=20, t_end=1.0)
        res = evolve(u0, params, cfg, probes=probe)
        budget, series = exterior_mass_budget(res.records, R, eta0=0.5, initial_field=u0)
        assert budget.t_budget > 0.0
        assert budget.alpha0 < 0.0 or budget.beta0 >= 0.0
        assert len(series) > 0
        for point in series:
            assert point.holds
        # compactly supported inside R/2: the initial exterior term vanishes
        assert series[0].bound == pytest.approx(0.0, abs=1e-30)

    def test_t0_reduces_to_set_inclusion(self):
        grid = make_grid(1, 1024, 40.0)
        u0 = families.gaussian(grid, amplitude=1.0, width=4.0)
        from virial_nls.observables import exterior_mass as ext_fn
        lhs = ext_fn(u0, 15.0)
        rhs = ext_fn(u0, 7.5)
        assert lhs <= rhs
