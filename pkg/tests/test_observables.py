"""Conserved quantities, norms, and the algebraic Q-E identity."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from virial_nls.grid import Field, make_grid
from virial_nls.observables import (
    EquationParams,
    MASS_CRITICAL,
    ENERGY_CRITICAL,
    ENERGY_SUPERCRITICAL,
    INTERCRITICAL,
    MASS_SUBCRITICAL,
    criticality,
    e_q_identity_residual,
    energy,
    exterior_mass,
    gradient_norm_sq,
    hs_seminorm,
    lq_norm,
    mass,
    momentum,
    variance,
    virial_q,
)

from helpers import random_smooth_field

SQRT_PI = float(np.sqrt(np.pi))


@pytest.fixture(scope="module")
def g1():
    return make_grid(1, 512, 20.0)


@pytest.fixture(scope="module")
def gauss(g1):
    return Field(np.exp(-g1.axis() ** 2 / 2).astype(complex), g1)


class TestGaussianReferenceValues:
    """Frozen analytic Gaussian integrals; quadrature is spectrally exact."""

    def test_mass(self, gauss):
        assert abs(mass(gauss) - SQRT_PI) < 1e-12

    def test_momentum_real_field(self, gauss):
        assert np.abs(momentum(gauss)).max() < 1e-12

    def test_energy_cubic(self, gauss):
        expected = SQRT_PI / 2 - np.sqrt(np.pi / 2) / 2  # 0.2595698567950...
        assert abs(energy(gauss, EquationParams(1, 3)) - expected) < 1e-12

    def test_virial_q_cubic(self, gauss):
        expected = SQRT_PI / 2 - np.sqrt(np.pi / 2) / 4  # 0.5728983911238...
        assert abs(virial_q(gauss, EquationParams(1, 3)) - expected) < 1e-12

    def test_l2_norm_squared(self, gauss):
        assert abs(lq_norm(gauss, 2) ** 2 - SQRT_PI) < 1e-12

    def test_variance(self, gauss):
        assert abs(variance(gauss) - SQRT_PI / 2) < 1e-12


class TestCriticality:
    def test_energy_critical_3d(self):
        p = criticality(3, 5)
        assert p.s_c == 1.0
        assert p.criticality_class == ENERGY_CRITICAL

    def test_mass_critical_1d(self):
        p = criticality(1, 5)
        assert p.s_c == 0.0
        assert p.criticality_class == MASS_CRITICAL

    def test_supercritical(self):
        p = criticality(3, 7)
        assert abs(p.s_c - 7.0 / 6.0) < 1e-15
        assert p.criticality_class == ENERGY_SUPERCRITICAL

    def test_subcritical_and_inter(self):
        assert criticality(1, 3).criticality_class == MASS_SUBCRITICAL
        assert criticality(3, 3).criticality_class == INTERCRITICAL

    @pytest.mark.parametrize("p", [2, 4, 6, 1])
    def test_rejects_bad_powers(self, p):
        with pytest.raises(ValueError):
            criticality(1, p)

    @given(N=st.integers(1, 4), p=st.sampled_from([3, 5, 7, 9]))
    @settings(max_examples=40, deadline=None)
    def test_sc_matches_class_boundaries(self, N, p):
        params = criticality(N, p)
        sc = N / 2 - 2 / (p - 1)
        assert abs(params.s_c - sc) < 1e-14
        if params.criticality_class == MASS_CRITICAL:
            assert p == 1 + 4 / N
        if params.criticality_class == ENERGY_CRITICAL:
            assert N >= 3 and p == 1 + 4 / (N - 2)


class TestQEIdentity:
    """Q = N(p-1)/4 E - (N(p-1)/4 - 1) |grad u|^2 holds to round-off."""

    def test_200_random_fields(self):
        rng = np.random.default_rng(11)
        grids = {1: make_grid(1, 256, 10.0), 2: make_grid(2, 64, 6.0)}
        count = 0
        while count < 200:
            for N in (1, 2):
                for p in (3, 5, 7):
                    f = random_smooth_field(grids[N], rng, scale=float(rng.uniform(0.3, 3.0)))
                    params = EquationParams(N, p)
                    res = e_q_identity_residual(f, params)
                    scale = abs(virial_q(f, params)) + abs(energy(f, params)) + gradient_norm_sq(f)
                    assert abs(res) <= 1e-12 * max(scale, 1e-30)
                    count += 1

    def test_quintic_1d_degenerates_to_energy(self):
        # N(p-1)/4 = 1: the identity collapses to Q = E
        g = make_grid(1, 256, 10.0)
        rng = np.random.default_rng(5)
        f = random_smooth_field(g, rng)
        params = EquationParams(1, 5)
        assert abs(virial_q(f, params) - energy(f, params)) < 1e-14 * (
            1 + abs(energy(f, params)))

    def test_zero_field(self, g1):
        z = Field(np.zeros(512, dtype=complex), g1)
        assert e_q_identity_residual(z, EquationParams(1, 3)) == 0.0


class TestNorms:
    def test_hs_zero_is_l2(self, gauss):
        assert abs(hs_seminorm(gauss, 0.0) - lq_norm(gauss, 2)) < 1e-12

    def test_linf(self, gauss):
        assert lq_norm(gauss, np.inf) == 1.0

    def test_hs_scaling_invariance_at_sc(self):
        # |u_lam|_{H^sc} = |u|_{H^sc} with u_lam = lam^{2/(p-1)} u(lam x),
        # realized on a lam-refined grid carrying identical samples
        for lam in (2.0, 4.0):
            for (N, p, n, L) in ((1, 5, 512, 16.0), (2, 3, 64, 8.0)):
                params = EquationParams(N, p)
                g = make_grid(N, n, L)
                g_fine = make_grid(N, n, L / lam)
                rng = np.random.default_rng(17)
                u = random_smooth_field(g, rng)
                u_scaled = Field(lam ** (2.0 / (p - 1)) * u.values, g_fine)
                a = hs_seminorm(u, params.s_c)
                b = hs_seminorm(u_scaled, params.s_c)
                assert abs(a - b) <= 1e-8 * max(a, 1e-30)

    def test_galilean_modulation_shifts_momentum(self):
        g = make_grid(1, 512, 20.0)
        rng = np.random.default_rng(23)
        u = random_smooth_field(g, rng, scale=1.2)
        xi = 2 * np.pi / g.half_width  # lattice wavenumber (mode 2)
        mod = Field(np.exp(1j * xi * g.axis()) * u.values, g)
        assert abs(mass(mod) - mass(u)) < 1e-13 * mass(u)
        assert abs(lq_norm(mod, 4) - lq_norm(u, 4)) < 1e-13
        p_shift = momentum(mod)[0] - momentum(u)[0]
        assert abs(p_shift - mass(u) * xi) < 1e-10

    def test_exterior_mass_set_inclusion(self, gauss):
        assert exterior_mass(gauss, 5.0) <= exterior_mass(gauss, 2.5)

    def test_radial_mass_jacobian(self):
        # int exp(-r^2) 4 pi r^2 dr over the ray = pi^(3/2)
        g = make_grid(3, 1024, 20.0, "radial3d")
        f = Field(np.exp(-g.axis() ** 2 / 2).astype(complex), g)
        assert abs(mass(f) - np.pi**1.5) < 1e-10

    def test_radial_hs1_matches_gradient(self):
        # agreement requires boundary-decaying data (the monitored class)
        g = make_grid(3, 1024, 20.0, "radial3d")
        rng = np.random.default_rng(31)
        f = random_smooth_field(g, rng)
        decayed = Field(f.values * np.exp(-((g.axis() / 8.0) ** 4)), g)
        a = hs_seminorm(decayed, 1.0) ** 2
        b = gradient_norm_sq(decayed)
        assert abs(a - b) <= 1e-8 * max(a, 1e-30)

    def test_rejects_nonfinite(self, g1):
        vals = np.zeros(512, dtype=complex)
        vals[3] = np.nan
        with pytest.raises(ValueError):
            mass(Field(vals, g1))
