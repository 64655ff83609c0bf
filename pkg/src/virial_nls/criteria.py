"""Blow-up criteria on initial data, the Galilean reduction, and the
persistence monitors evaluated along trajectories.

Three criteria are evaluated:

* negative energy, E(u0) < 0;
* the boosted form E(u0) < |P(u0)|^2 / M(u0), reachable from the first by a
  Galilean change of frame with velocity -P/M;
* the intercritical dichotomy (0 < s_c < 1), requiring both
  M^(1-s_c) E^(s_c) below and ||u|| ||grad u|| (s_c-weighted) above the
  ground-state thresholds.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np

from . import cutoffs, virial
from .errors import BoostError, GridError
from .grid import RADIAL3D, Field, translate
from .observables import (
    EquationParams,
    energy,
    gradient_norm_sq,
    mass,
    momentum,
    virial_q,
)
from .groundstate import GroundStateProfile, thresholds


@dataclass(frozen=True)
class BoostSpec:
    """Lattice-rounded boost velocity and its rounding error vs -P/M."""

    xi: tuple[float, ...]
    rounding_error: float


@dataclass(frozen=True)
class Thm14Verdict:
    mass_energy_lhs: float
    mass_energy_rhs: float
    mass_gradient_lhs: float
    mass_gradient_rhs: float
    mass_energy_ok: bool
    mass_gradient_ok: bool
    verdict: bool
    note: str = ""


@dataclass(frozen=True)
class CriterionReport:
    mass: float
    momentum: tuple[float, ...]
    energy: float
    boosted_energy: float
    s_c: float
    negative_energy_verdict: bool        # E < 0
    boosted_verdict: bool                # E < |P|^2 / M
    dichotomy: Thm14Verdict | None
    beta0: float                         # Q(u0), the t = 0 ceiling of Q
    eps0: float                          # ||grad u0||
    delta0: float | None                 # -Q/||grad u||^2 when Q < 0

    def to_dict(self) -> dict:
        d = asdict(self)
        d["momentum"] = list(self.momentum)
        return d


def evaluate(field: Field, params: EquationParams,
             profile: GroundStateProfile | None = None,
             require_dichotomy: bool = False) -> CriterionReport:
    """Evaluate every criterion on initial data.

    The dichotomy verdict needs a ground-state profile and is only defined
    for intercritical exponents; without a profile it is left out unless
    ``require_dichotomy`` insists.  Nonpositive energy there is marked as
    vacuously covered by the negative-energy criterion (the fractional power
    E^(s_c) is not defined for E < 0).
    """
    M = mass(field)
    P = momentum(field)
    E = energy(field, params)
    G = gradient_norm_sq(field)
    Q = virial_q(field, params)
    psq_over_m = float(np.dot(P, P) / M) if M > 0 else 0.0
    boosted = E - psq_over_m
    sc = params.s_c

    dich = None
    if 0.0 < sc < 1.0 and (profile is not None or require_dichotomy):
        if profile is None:
            raise GridError("dichotomy verdict requested without a ground-state profile")
        thr_me, thr_mg = thresholds(profile)
        mg_lhs = float(np.sqrt(M) ** (1.0 - sc) * np.sqrt(G) ** sc)
        mg_ok = mg_lhs > thr_mg
        if E <= 0.0:
            dich = Thm14Verdict(
                mass_energy_lhs=float("nan"), mass_energy_rhs=thr_me,
                mass_gradient_lhs=mg_lhs, mass_gradient_rhs=thr_mg,
                mass_energy_ok=True, mass_gradient_ok=mg_ok,
                verdict=mg_ok,
                note="E(u0) <= 0: mass-energy condition vacuously satisfied "
                     "via the negative-energy criterion",
            )
        else:
            me_lhs = float(M ** (1.0 - sc) * E**sc)
            me_ok = me_lhs < thr_me
            dich = Thm14Verdict(
                mass_energy_lhs=me_lhs, mass_energy_rhs=thr_me,
                mass_gradient_lhs=mg_lhs, mass_gradient_rhs=thr_mg,
                mass_energy_ok=me_ok, mass_gradient_ok=mg_ok,
                verdict=me_ok and mg_ok,
            )

    return CriterionReport(
        mass=M,
        momentum=tuple(P),
        energy=E,
        boosted_energy=boosted,
        s_c=sc,
        negative_energy_verdict=E < 0.0,
        boosted_verdict=E < psq_over_m,
        dichotomy=dich,
        beta0=Q,
        eps0=float(np.sqrt(G)),
        delta0=float(-Q / G) if (Q < 0.0 and G > 0.0) else None,
    )


def _require_lattice(xi: np.ndarray, grid) -> None:
    unit = np.pi / grid.half_width
    ratio = xi / unit
    if np.any(np.abs(ratio - np.rint(ratio)) > 1e-9):
        raise BoostError(
            f"boost velocity {tuple(xi)} is not on the wavenumber lattice "
            f"(multiples of pi/L = {unit:.6g})"
        )


def boost(field: Field, xi, t: float = 0.0) -> Field:
    """Galilean image exp(i x.xi) exp(-i t |xi|^2) u(t, x - 2 xi t).

    xi must be a lattice wavenumber so the modulation stays periodic and the
    translation is an exact spectral phase; at t = 0 this is the plain
    modulation of the data.
    """
    g = field.grid
    if g.geometry == RADIAL3D:
        raise BoostError("boost is not defined for radially reduced fields")
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    if xi.shape != (g.dimension,):
        raise BoostError(f"boost velocity needs {g.dimension} components")
    _require_lattice(xi, g)
    u = field
    if t != 0.0:
        u = translate(u, 2.0 * t * xi)
    phase = sum(x * xi_i for x, xi_i in zip(g.coords(), xi))
    values = np.exp(1j * phase) * u.values
    if t != 0.0:
        values = values * np.exp(-1j * t * float(np.dot(xi, xi)))
    return Field(np.broadcast_to(values, g.shape).copy(), g)


def lattice_boost_spec(field: Field) -> BoostSpec:
    """Velocity -P/M rounded to the nearest lattice wavenumber."""
    g = field.grid
    exact = -momentum(field) / mass(field)
    unit = np.pi / g.half_width
    xi = unit * np.rint(exact / unit)
    return BoostSpec(xi=tuple(xi), rounding_error=float(np.linalg.norm(xi - exact)))


@dataclass(frozen=True)
class PersistenceReport:
    """Trajectory-wide verification of the dichotomy's dynamic consequences."""

    applicable: bool
    threshold_mg: float
    condition_held: bool        # ||u||^(1-sc) ||grad u||^sc stayed above threshold
    eps0_floor: float           # observed floor of ||grad u||
    q_negative: bool            # Q(u(t)) < 0 at every snapshot
    q_max: float
    delta0: float               # largest delta with Q <= -delta ||grad u||^2 throughout
    failed: bool
    note: str = ""

    def to_dict(self) -> dict:
        return asdict(self)


def monitor_persistence(records, profile: GroundStateProfile,
                        params: EquationParams) -> PersistenceReport:
    """Check the persistence inequalities at every snapshot of a run.

    Reports (i) the threshold inequality on ||u||^(1-s_c) ||grad u||^(s_c),
    (ii) the observed gradient floor, and (iii) the largest delta0 with
    Q(u(t)) <= -delta0 ||grad u(t)||^2.  Data starting exactly on the ground
    state (Q(u0) ~ 0) is flagged as a boundary case.
    """
    sc = params.s_c
    _, thr_mg = thresholds(profile)
    q0 = records[0].q_virial
    scale0 = records[0].grad_l2**2
    if scale0 > 0 and abs(q0) < 1e-8 * scale0:
        return PersistenceReport(
            applicable=False, threshold_mg=thr_mg, condition_held=False,
            eps0_floor=0.0, q_negative=False, q_max=q0, delta0=0.0, failed=False,
            note="Q(u0) = 0 within tolerance: standing-wave boundary case",
        )
    held = True
    eps_floor = np.inf
    q_max = -np.inf
    delta0 = np.inf
    for rec in records:
        lhs = np.sqrt(rec.mass) ** (1.0 - sc) * rec.grad_l2**sc
        if lhs <= thr_mg:
            held = False
        eps_floor = min(eps_floor, rec.grad_l2)
        q_max = max(q_max, rec.q_virial)
        if rec.grad_l2 > 0:
            delta0 = min(delta0, -rec.q_virial / rec.grad_l2**2)
    q_neg = q_max < 0.0
    delta0 = float(delta0) if np.isfinite(delta0) else 0.0
    failed = not (held and q_neg and delta0 > 0.0)
    return PersistenceReport(
        applicable=True, threshold_mg=float(thr_mg), condition_held=held,
        eps0_floor=float(eps_floor), q_negative=q_neg, q_max=float(q_max),
        delta0=delta0, failed=failed,
    )


def glassey_bound(field: Field, params: EquationParams) -> float:
    """Upper bound on the variance-vanishing time from negative energy.

    Solves V(0) + V'(0) t + 4 E t^2 = 0 and returns the smallest positive
    root.  Exact in the mass-critical case (where Q = E is conserved and
    V'' = 8E); an upper bound for p >= 1 + 4/N, where Q <= E along the flow.
    """
    E = energy(field, params)
    if E >= 0.0:
        raise ValueError(f"glassey_bound requires negative energy, got E = {E:g}")
    quad = cutoffs.build_pure_quadratic(field.grid)
    V0 = virial.eval_I(field, quad)
    V1 = virial.eval_Iprime(field, quad)
    a, b, c = 4.0 * E, V1, V0
    disc = b * b - 4.0 * a * c
    roots = [(-b + np.sqrt(disc)) / (2.0 * a), (-b - np.sqrt(disc)) / (2.0 * a)]
    positive = [t for t in roots if t > 0.0]
    return float(min(positive))
