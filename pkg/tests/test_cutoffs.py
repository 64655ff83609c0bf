"""Cutoff construction and constraint certification."""

import numpy as np
import pytest

from virial_nls.cutoffs import (
    CutoffProfile,
    EXTERIOR_MASS,
    PURE_QUADRATIC,
    PolyPiece,
    VIRIAL,
    build_exterior_cutoff,
    build_pure_quadratic,
    build_virial_cutoff,
    certify,
    export_profile_csv,
)
from virial_nls.errors import GridError
from virial_nls.grid import make_grid


@pytest.fixture(scope="module")
def grid():
    return make_grid(1, 1024, 40.0)


class TestExteriorCutoff:
    def test_boundary_values(self, grid):
        prof = build_exterior_cutoff(10.0, grid)
        assert prof.phi(np.array([5.0]))[0] == 0.0
        assert prof.phi(np.array([10.0]))[0] == 1.0
        # smoothstep symmetry: phi(3R/4) = 1/2
        assert abs(prof.phi(np.array([7.5]))[0] - 0.5) < 1e-14

    def test_slope_margin_exact(self, grid):
        # max phi' = 15/(4R), margin vs the 4/R bound is exactly 1/(4R)
        for R in (5.0, 10.0, 15.0):
            prof = build_exterior_cutoff(R, grid)
            check = prof.certification.check("dphi_le_4_over_R")
            assert abs(check.margin - 1.0 / (4.0 * R)) < 1e-13

    def test_range_certified(self, grid):
        prof = build_exterior_cutoff(8.0, grid)
        assert prof.certification.all_satisfied
        assert prof.certification.check("phi_nonneg").margin >= 0.0
        assert prof.certification.check("zero_on_inner_ball").worst == 0.0

    def test_rejects_small_radius(self, grid):
        with pytest.raises(GridError):
            build_exterior_cutoff(0.5, grid)  # below 10 dx

    def test_rejects_radius_beyond_box(self, grid):
        with pytest.raises(GridError):
            build_exterior_cutoff(25.0, grid)  # 2R > L


class TestVirialCutoff:
    def test_cap_and_constraints(self, grid):
        prof = build_virial_cutoff(5.0, grid)
        r = np.linspace(0.0, 5.0, 101)
        assert np.abs(prof.phi(r) - r**2).max() < 1e-12
        assert np.abs(prof.d2phi(r) - 2.0).max() == 0.0
        rep = prof.certification
        assert rep.all_satisfied
        assert rep.check("d2phi_le_2").margin == 0.0  # attained on the cap
        assert rep.check("d4phi_le_4_over_R_squared").margin > 0.0

    def test_widening_retries(self, grid):
        # the paper-style [R, 2R] transition cannot satisfy the fourth
        # derivative bound (barrier argument), so the ladder must widen
        prof = build_virial_cutoff(5.0, grid)
        assert prof.retries == 3
        assert prof.widen_factor == 5.0
        assert prof.outer_radius == 30.0

    def test_flat_tail(self, grid):
        prof = build_virial_cutoff(5.0, grid)
        r = np.array([prof.outer_radius, prof.outer_radius + 3.0, 100.0])
        tail = prof.phi(r)
        assert np.abs(np.diff(tail)).max() == 0.0
        assert np.abs(prof.dphi(r)).max() == 0.0
        assert tail[0] > 0.0

    def test_c4_continuity_at_breakpoints(self, grid):
        prof = build_virial_cutoff(6.0, grid)
        eps = 1e-9
        for r0 in (prof.radius, prof.outer_radius):
            for order in range(5):
                left = prof.evaluate(np.array([r0 - eps]), order)[0]
                right = prof.evaluate(np.array([r0 + eps]), order)[0]
                scale = max(1.0, abs(left))
                assert abs(left - right) < 1e-5 * scale, (r0, order)

    def test_scale_consistency(self, grid):
        # build(2R) at 2r == 4 build(R) at r, exact homogeneity
        small = build_virial_cutoff(5.0, grid)
        big = build_virial_cutoff(10.0, grid)
        r = np.linspace(0.0, 15.0, 301)
        assert np.abs(big.phi(2 * r) - 4.0 * small.phi(r)).max() < 1e-10 * 4 * 15**2

    def test_certified_for_acceptance_radii(self, grid):
        for R in (5.0, 10.0, 15.0):
            prof = build_virial_cutoff(R, grid)
            assert prof.certification.all_satisfied


class TestPureQuadratic:
    def test_margins(self, grid):
        prof = build_pure_quadratic(grid)
        rep = prof.certification
        assert rep.all_satisfied
        assert rep.check("d2phi_le_2").margin == 0.0
        assert rep.check("dphi_le_2r").margin == 0.0

    def test_weights_vanish(self, grid):
        prof = build_pure_quadratic(grid)
        r = grid.radius()
        w = prof.virial_weights(r, 1)
        for arr in (w.grad, w.aniso, w.potential, w.bilaplacian):
            assert np.abs(arr).max() == 0.0
        assert np.abs(w.lap_phi - 2.0).max() == 0.0


class TestCertifyDetector:
    def test_tampered_profile_reports_negative_margin(self, grid):
        # phi = 1.05 r^2 exceeds both phi'' <= 2 and phi <= r^2
        pieces = (PolyPiece(0.0, None, (0.0, 0.0, 1.05), "transition"),)
        bad = CutoffProfile(VIRIAL, 5.0, grid, pieces, outer_radius=np.inf)
        rep = certify(bad)
        assert not rep.all_satisfied
        assert rep.check("d2phi_le_2").margin < 0.0
        assert rep.check("phi_le_r_squared").margin < 0.0

    def test_reports_max_abs_d4(self, grid):
        prof = build_virial_cutoff(5.0, grid)
        # one-sided bound certified; the two-sided size reported separately
        # must sit at or below it for this construction
        assert 0.0 < prof.certification.max_abs_d4 <= 4.0 / 5.0**2


def test_export_csv(tmp_path, grid):
    prof = build_exterior_cutoff(5.0, grid)
    path = tmp_path / "profile.csv"
    export_profile_csv(prof, path)
    header = path.read_text().splitlines()[0]
    assert header == "r,phi,dphi,d2phi,d3phi,d4phi"
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    assert data.shape[1] == 6
    assert data[:, 1].min() >= 0.0 and data[:, 1].max() <= 1.0
