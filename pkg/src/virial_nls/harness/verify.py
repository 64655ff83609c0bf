"""Named verification suites behind the `verify` subcommand.

Each suite runs pinned desk-scale checks and reports a margin per check
(nonnegative = pass).  These are quick confidence runs; the exhaustive
acceptance suite lives in the test tree.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .. import criteria, cutoffs, families, virial
from ..grid import Field, make_grid
from ..groundstate import closed_form_1d, gn_constant, gn_inequality_deficit, pohozaev_residual, solve_ground_state
from ..integrator import StepperConfig, evolve, step
from ..observables import EquationParams, e_q_identity_residual, energy, mass

THREADS_ENV = "VIRIAL_NLS_THREADS"


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    margin: float
    passed: bool
    detail: str = ""


def _random_field(grid, rng, decay=2.0, scale=1.0) -> Field:
    """Smooth random field: spectrally decaying coefficients, fixed seed."""
    coeffs = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    coeffs *= np.exp(-decay * np.sqrt(grid.wavenumbers.k2))
    values = np.fft.ifftn(coeffs)
    values *= scale / max(np.abs(values).max(), 1e-300)
    return Field(values, grid)


def suite_conservation() -> list[CheckResult]:
    grid = make_grid(1, 512, 20.0)
    params = EquationParams(1, 3)
    u0 = families.soliton(grid)
    cfg = StepperConfig(dt0=1e-3, c_cfl=1e3, dt_min=1e-9, snapshot_stride=100, t_end=1.0)
    res = evolve(u0, params, cfg)
    m = np.array([r.mass for r in res.records])
    e = np.array([r.energy for r in res.records])
    m_drift = np.abs(m - m[0]).max() / m[0]
    e_drift = np.abs(e - e[0]).max() / abs(e[0])
    checks = [
        CheckResult("conservation", "mass_drift_below_1e-10", 1e-10 - m_drift,
                    m_drift <= 1e-10, f"drift {m_drift:.3e}"),
        CheckResult("conservation", "energy_drift_below_1e-8", 1e-8 - e_drift,
                    e_drift <= 1e-8, f"drift {e_drift:.3e}"),
    ]
    # plane-wave step exactness
    k1 = np.pi / grid.half_width * 4
    amp = 1.3
    pw = Field(amp * np.exp(1j * k1 * grid.axis()), grid)
    dt = 1e-2
    stepped = step(pw, dt, params)
    exact = amp * np.exp(1j * k1 * grid.axis()) * np.exp(1j * (amp**2 - k1**2) * dt)
    err = np.abs(stepped.values - exact).max()
    checks.append(CheckResult("conservation", "plane_wave_step_exact", 1e-12 - err,
                              err <= 1e-12, f"max err {err:.3e}"))
    return checks


def suite_virial() -> list[CheckResult]:
    rng = np.random.default_rng(2024)
    grid = make_grid(1, 1024, 40.0)
    params = EquationParams(1, 3)
    quad = cutoffs.build_pure_quadratic(grid)
    loc = cutoffs.build_virial_cutoff(5.0, grid)
    worst_res, worst_r1, worst_eq = 0.0, -np.inf, 0.0
    for _ in range(12):
        f = _random_field(grid, rng, scale=1.5)
        for prof in (quad, loc):
            s = virial.decompose(f, prof, params)
            worst_res = max(worst_res, abs(s.residual) / max(s.residual_scale, 1e-30))
            worst_r1 = max(worst_r1, s.R1)
        worst_eq = max(worst_eq, abs(e_q_identity_residual(f, params)))
    checks = [
        CheckResult("virial", "decomposition_residual_below_1e-10", 1e-10 - worst_res,
                    worst_res <= 1e-10, f"max rel residual {worst_res:.3e}"),
        CheckResult("virial", "R1_nonpositive", 1e-12 - worst_r1, worst_r1 <= 1e-12,
                    f"max R1 {worst_r1:.3e}"),
        CheckResult("virial", "energy_virial_identity", 1e-12 - worst_eq, worst_eq <= 1e-12,
                    f"max residual {worst_eq:.3e}"),
    ]
    # finite-difference variance curvature vs 8Q on a short smooth run
    g2 = make_grid(1, 512, 20.0)
    u0 = families.gaussian(g2, amplitude=1.0)
    dt = 1e-3
    cfg = StepperConfig(dt0=dt, c_cfl=1e3, dt_min=1e-9, snapshot_stride=1, t_end=0.2)
    quad2 = cutoffs.build_pure_quadratic(g2)
    probe = [lambda t, f: {"V": virial.eval_I(f, quad2)}]
    res = evolve(u0, params, cfg, probes=probe)
    V = np.array([r.extras["V"] for r in res.records])
    Q8 = np.array([8.0 * r.q_virial for r in res.records])
    vdd = (V[2:] - 2.0 * V[1:-1] + V[:-2]) / dt**2
    rel = np.abs(vdd - Q8[1:-1]) / np.abs(Q8[1:-1])
    checks.append(CheckResult("virial", "variance_curvature_matches_8Q", 1e-3 - rel.max(),
                              rel.max() <= 1e-3, f"max rel err {rel.max():.3e} at dt={dt}"))
    return checks


def suite_cutoffs() -> list[CheckResult]:
    grid = make_grid(1, 512, 40.0)
    checks = []
    for R in (5.0, 10.0, 15.0):
        ext = cutoffs.build_exterior_cutoff(R, grid)
        slope = ext.certification.check("dphi_le_4_over_R")
        expected = 1.0 / (4.0 * R)
        checks.append(CheckResult(
            "cutoffs", f"exterior_R{R:g}_slope_margin", 1e-12 - abs(slope.margin - expected),
            abs(slope.margin - expected) <= 1e-12,
            f"margin {slope.margin:.6g}, expected 1/(4R) = {expected:.6g}"))
        vir = cutoffs.build_virial_cutoff(R, grid)
        worst = min(c.margin for c in vir.certification.checks)
        checks.append(CheckResult(
            "cutoffs", f"virial_R{R:g}_all_constraints",
            worst + 1e-9 * max(1.0, R * R), vir.certification.all_satisfied,
            f"worst margin {worst:.3e}, transition width {vir.widen_factor:g} R, "
            f"retries {vir.retries}"))
    return checks


def suite_groundstate() -> list[CheckResult]:
    grid = make_grid(1, 512, 20.0)
    params = EquationParams(1, 3)
    prof = solve_ground_state(params, grid)
    err = np.abs(prof.values - closed_form_1d(params, grid.axis())).max()
    cgn = gn_constant(prof)
    poh = abs(pohozaev_residual(prof))
    rng = np.random.default_rng(7)
    worst_deficit = np.inf
    for _ in range(30):
        f = _random_field(grid, rng, scale=float(rng.uniform(0.2, 2.0)))
        worst_deficit = min(worst_deficit, gn_inequality_deficit(f, params, cgn))
    return [
        CheckResult("groundstate", "sech_profile_match", 1e-6 - err, err <= 1e-6,
                    f"max pointwise err {err:.3e}"),
        CheckResult("groundstate", "gn_constant_value", 1e-6 - abs(cgn - 3**-0.5),
                    abs(cgn - 3**-0.5) <= 1e-6, f"C = {cgn:.12f}"),
        CheckResult("groundstate", "stationarity", 1e-8 - poh, poh <= 1e-8,
                    f"relative virial functional {poh:.3e}"),
        CheckResult("groundstate", "gn_inequality_random_fields", worst_deficit,
                    worst_deficit >= 0.0, f"min deficit {worst_deficit:.3e}"),
    ]


def suite_criteria() -> list[CheckResult]:
    grid = make_grid(1, 512, 20.0)
    params = EquationParams(1, 3)
    u0 = families.modulated_gaussian(grid, amplitude=1.0, width=1.0, modes=(3,))
    spec = criteria.lattice_boost_spec(u0)
    rep = criteria.evaluate(u0, params)
    boosted = criteria.boost(u0, spec.xi)
    e_boost = energy(boosted, params)
    ident = abs(e_boost - rep.boosted_energy)
    m_err = abs(mass(boosted) - rep.mass)
    p5 = EquationParams(1, 5)
    g5 = make_grid(1, 1024, 10.0)
    u5 = families.gaussian(g5, amplitude=3.0)
    bound = criteria.glassey_bound(u5, p5)
    e5 = energy(u5, p5)
    return [
        CheckResult("criteria", "boost_energy_identity", 1e-10 - ident, ident <= 1e-10,
                    f"|E(boosted) - (E - P^2/M)| = {ident:.3e}"),
        CheckResult("criteria", "boost_preserves_mass", 1e-12 - m_err, m_err <= 1e-12,
                    f"err {m_err:.3e}"),
        CheckResult("criteria", "quintic_gaussian_negative_energy", -e5, e5 < 0.0,
                    f"E = {e5:.6g}"),
        CheckResult("criteria", "glassey_bound_finite", bound, 0.0 < bound < 1.0,
                    f"variance-root bound {bound:.6g}"),
    ]


SUITES = {
    "conservation": suite_conservation,
    "virial": suite_virial,
    "cutoffs": suite_cutoffs,
    "groundstate": suite_groundstate,
    "criteria": suite_criteria,
}


def run_suites(names, max_threads: int | None = None) -> list[CheckResult]:
    """Run the named suites; 'all' may run them concurrently, capped by the
    VIRIAL_NLS_THREADS environment variable."""
    if max_threads is None:
        max_threads = int(os.environ.get(THREADS_ENV, "1"))
    runners = [SUITES[n] for n in names]
    if max_threads > 1 and len(runners) > 1:
        with ThreadPoolExecutor(max_workers=max_threads) as pool:
            groups = list(pool.map(lambda fn: fn(), runners))
    else:
        groups = [fn() for fn in runners]
    return [check for group in groups for check in group]
