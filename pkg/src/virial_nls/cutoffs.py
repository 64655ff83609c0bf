"""Radial weight families for localized virial estimates.

Two families are constructed, plus the unlocalized quadratic weight:

* ``exterior_mass`` -- a quintic smoothstep rising from 0 on [0, R/2] to 1 on
  [R, inf), used to track L^2 mass leaving the ball of radius R.  Its slope
  bound phi' <= 4/R holds with margin exactly 1/(4R).

* ``virial`` -- the localized variance weight: phi = r^2 on [0, R], a C^4
  polynomial transition on [R, R + W], and a constant tail beyond (phi' = 0),
  subject to the certified inequalities

      0 <= phi <= r^2,   phi' <= 2r,   phi'' <= 2,   phi'''' <= 4/R^2.

  A weight that returns to phi = 0 at 2R is impossible under phi'' <= 2:
  integrating the barrier phi'(r) >= -2(2R - r) backward from phi'(2R) = 0
  gives phi(2R) > phi(R) - R^2 = 0 strictly.  The construction therefore
  flattens to a positive constant instead, and widens the transition (up to
  3 retries) until the fourth-derivative bound certifies; the widening
  ladder below first succeeds at W = 5R.

* ``pure_quadratic`` -- phi = r^2 everywhere; every localization error term
  vanishes identically and I''(t) = 8 Q(u) exactly.

Profiles are stored as piecewise polynomials, so constraints are certified
from exact per-piece extrema (critical points of the derivative polynomial)
in addition to a 10x-finer audit mesh.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import CutoffConstraintError, GridError
from .grid import GridSpec

EXTERIOR_MASS = "exterior_mass"
VIRIAL = "virial"
PURE_QUADRATIC = "pure_quadratic"

#: transition-width factors W/R tried in order; each failed certification
#: widens the transition (initial attempt + up to 3 retries)
VIRIAL_WIDEN_LADDER = (1.0, 2.0, 3.0, 5.0)

_MARGIN_TOL = 1e-9  # float-noise allowance when deciding pass/fail


@dataclass(frozen=True)
class PolyPiece:
    """Polynomial segment of a radial profile.

    On a bounded piece the polynomial is in theta = (r - lo)/(hi - lo); on an
    unbounded piece (hi = None) it is in s = r - lo directly.  ``kind`` tags
    the exact algebraic role of the piece so that downstream weight arrays
    can take their r -> 0 limits without division noise.
    """

    lo: float
    hi: float | None
    coeffs: tuple[float, ...]
    kind: str  # zero | quadratic_cap | transition | constant | one

    @property
    def scale(self) -> float:
        return 1.0 if self.hi is None else self.hi - self.lo

    def local(self, r: np.ndarray) -> np.ndarray:
        return (np.asarray(r, dtype=float) - self.lo) / self.scale

    def deriv_coeffs(self, order: int) -> np.ndarray:
        c = npoly.polyder(np.asarray(self.coeffs, dtype=float), m=order) if order else np.asarray(self.coeffs, dtype=float)
        return c / self.scale**order

    def evaluate(self, r: np.ndarray, order: int = 0) -> np.ndarray:
        return npoly.polyval(self.local(r), self.deriv_coeffs(order))


def _poly_extrema(coeffs: np.ndarray, lo_t: float, hi_t: float) -> tuple[float, float, float, float]:
    """(min, argmin, max, argmax) of a polynomial over [lo_t, hi_t]."""
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=float), trim="b")
    if coeffs.size == 0:
        return 0.0, lo_t, 0.0, lo_t
    cand = [lo_t, hi_t]
    if coeffs.size > 2:
        roots = npoly.polyroots(npoly.polyder(coeffs))
        for z in roots:
            if abs(z.imag) < 1e-9 and lo_t - 1e-12 <= z.real <= hi_t + 1e-12:
                cand.append(float(np.clip(z.real, lo_t, hi_t)))
    vals = npoly.polyval(np.array(cand), coeffs)
    i_min, i_max = int(np.argmin(vals)), int(np.argmax(vals))
    return float(vals[i_min]), float(cand[i_min]), float(vals[i_max]), float(cand[i_max])


@dataclass(frozen=True)
class ConstraintCheck:
    """Worst-case margin of one certified inequality (margin >= 0 passes)."""

    name: str
    bound: float
    worst: float
    margin: float
    location: float

    @property
    def satisfied(self) -> bool:
        return self.margin >= -_MARGIN_TOL * max(1.0, abs(self.bound))


@dataclass(frozen=True)
class CertificationReport:
    checks: tuple[ConstraintCheck, ...]
    max_abs_d4: float  # informational: two-sided fourth-derivative size

    @property
    def all_satisfied(self) -> bool:
        return all(c.satisfied for c in self.checks)

    def check(self, name: str) -> ConstraintCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def first_violation(self) -> ConstraintCheck | None:
        for c in self.checks:
            if not c.satisfied:
                return c
        return None


@dataclass
class CutoffProfile:
    """Radial weight phi with exact piecewise-polynomial derivatives."""

    family: str
    radius: float
    grid: GridSpec
    pieces: tuple[PolyPiece, ...]
    outer_radius: float
    widen_factor: float = 0.0
    retries: int = 0
    certification: CertificationReport | None = None

    def _piece_masks(self, r: np.ndarray):
        r = np.asarray(r, dtype=float)
        masks = []
        for piece in self.pieces:
            if piece.hi is None:
                masks.append(r >= piece.lo)
            else:
                masks.append((r >= piece.lo) & (r < piece.hi))
        # fold any samples below the first breakpoint into the first piece
        masks[0] |= r < self.pieces[0].lo
        return masks

    def evaluate(self, r: np.ndarray, order: int = 0) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape)
        for piece, mask in zip(self.pieces, self._piece_masks(r)):
            if np.any(mask):
                out[mask] = piece.evaluate(r[mask], order)
        return out

    def phi(self, r):
        return self.evaluate(r, 0)

    def dphi(self, r):
        return self.evaluate(r, 1)

    def d2phi(self, r):
        return self.evaluate(r, 2)

    def d3phi(self, r):
        return self.evaluate(r, 3)

    def d4phi(self, r):
        return self.evaluate(r, 4)

    def dphi_over_r(self, r: np.ndarray) -> np.ndarray:
        """phi'(r)/r with its exact limit on the algebraically known pieces."""
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape)
        for piece, mask in zip(self.pieces, self._piece_masks(r)):
            if not np.any(mask):
                continue
            if piece.kind == "quadratic_cap":
                out[mask] = 2.0
            elif piece.kind in ("zero", "constant", "one"):
                out[mask] = 0.0
            else:
                out[mask] = piece.evaluate(r[mask], 1) / r[mask]
        return out

    def virial_weights(self, r: np.ndarray, dimension: int) -> "VirialWeights":
        """Localization-error weights; identically zero where phi == r^2."""
        r = np.asarray(r, dtype=float)
        N = dimension
        w_grad = np.zeros(r.shape)      # phi'/r - 2
        w_aniso = np.zeros(r.shape)     # phi''/r^2 - phi'/r^3
        w_pot = np.zeros(r.shape)       # phi'' + (N-1) phi'/r - 2N
        w_bilap = np.zeros(r.shape)     # Lap^2 phi
        lap_phi = np.zeros(r.shape)     # phi'' + (N-1) phi'/r
        for piece, mask in zip(self.pieces, self._piece_masks(r)):
            if not np.any(mask):
                continue
            if piece.kind == "quadratic_cap":
                w_pot[mask] = 0.0
                lap_phi[mask] = 2.0 * N
            elif piece.kind in ("zero", "constant", "one"):
                w_grad[mask] = -2.0
                w_pot[mask] = -2.0 * N
            else:
                rm = r[mask]
                d1 = piece.evaluate(rm, 1)
                d2 = piece.evaluate(rm, 2)
                d3 = piece.evaluate(rm, 3)
                d4 = piece.evaluate(rm, 4)
                w_grad[mask] = d1 / rm - 2.0
                aniso = d2 / rm**2 - d1 / rm**3
                w_aniso[mask] = aniso
                w_pot[mask] = d2 + (N - 1) * d1 / rm - 2.0 * N
                w_bilap[mask] = d4 + 2.0 * (N - 1) * d3 / rm + (N - 1) * (N - 3) * aniso
                lap_phi[mask] = d2 + (N - 1) * d1 / rm
        return VirialWeights(w_grad, w_aniso, w_pot, w_bilap, lap_phi)


@dataclass(frozen=True)
class VirialWeights:
    grad: np.ndarray
    aniso: np.ndarray
    potential: np.ndarray
    bilaplacian: np.ndarray
    lap_phi: np.ndarray


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def _check_radius(R: float, grid: GridSpec):
    if R < 10.0 * grid.dx:
        raise GridError(f"cutoff radius {R} must be at least 10 dx = {10 * grid.dx:.4g}")
    if 2.0 * R > grid.half_width:
        raise GridError(f"2R = {2 * R} does not fit inside the box of half-width {grid.half_width}")


def build_exterior_cutoff(R: float, grid: GridSpec) -> CutoffProfile:
    """Smoothstep exterior-mass cutoff: 0 on [0, R/2], 1 on [R, inf).

    phi(theta) = 6 theta^5 - 15 theta^4 + 10 theta^3 with
    theta = (r - R/2)/(R/2); the maximal slope 15/(4R) sits below the 4/R
    bound with margin 1/(4R).
    """
    R = float(R)
    _check_radius(R, grid)
    pieces = (
        PolyPiece(0.0, R / 2.0, (0.0,), "zero"),
        PolyPiece(R / 2.0, R, (0.0, 0.0, 0.0, 10.0, -15.0, 6.0), "transition"),
        PolyPiece(R, None, (1.0,), "one"),
    )
    profile = CutoffProfile(EXTERIOR_MASS, R, grid, pieces, outer_radius=R)
    report = certify(profile)
    profile.certification = report
    bad = report.first_violation()
    if bad is not None:
        raise CutoffConstraintError(bad.name, bad.margin, bad.location)
    return profile


def _hermite_transition_coeffs(tau: float) -> tuple[float, ...]:
    """Coefficients of f(theta) with phi'(R + W*theta) = 2R f(theta), W = tau R.

    f is the unique degree-7 polynomial matching phi' and its next three
    derivatives to the r^2 cap at theta = 0 and to the flat tail at theta = 1
    (f factors as (1-theta)^4 (positive cubic), so phi' >= 0 throughout).
    """
    a = -35.0 - 20.0 * tau
    b = 84.0 + 45.0 * tau
    c = -70.0 - 36.0 * tau
    d = 20.0 + 10.0 * tau
    return (1.0, tau, 0.0, 0.0, a, b, c, d)


def build_virial_cutoff(R: float, grid: GridSpec) -> CutoffProfile:
    """Localized variance weight: r^2 cap, C^4 transition, constant tail.

    Tries the widening ladder until certification passes; each retry widens
    the transition, which relaxes the fourth-derivative bound cubically while
    the profile's own fourth derivative shrinks only linearly.
    """
    R = float(R)
    _check_radius(R, grid)
    last_violation = None
    for attempt, tau in enumerate(VIRIAL_WIDEN_LADDER):
        W = tau * R
        f = np.asarray(_hermite_transition_coeffs(tau))
        F = npoly.polyint(f)  # antiderivative, F(0) = 0
        phi_trans = 2.0 * R * W * F
        phi_trans[0] = R * R
        tail_value = float(npoly.polyval(1.0, phi_trans))
        pieces = (
            PolyPiece(0.0, R, (0.0, 0.0, R * R), "quadratic_cap"),
            PolyPiece(R, R + W, tuple(phi_trans), "transition"),
            PolyPiece(R + W, None, (tail_value,), "constant"),
        )
        profile = CutoffProfile(
            VIRIAL, R, grid, pieces, outer_radius=R + W,
            widen_factor=tau, retries=attempt,
        )
        report = certify(profile)
        profile.certification = report
        if report.all_satisfied:
            return profile
        last_violation = report.first_violation()
    raise CutoffConstraintError(last_violation.name, last_violation.margin, last_violation.location)


def build_pure_quadratic(grid: GridSpec) -> CutoffProfile:
    """phi = r^2 everywhere; I''(t) reduces to 8 Q(u) with no error terms."""
    pieces = (PolyPiece(0.0, None, (0.0, 0.0, 1.0), "quadratic_cap"),)
    profile = CutoffProfile(PURE_QUADRATIC, 0.0, grid, pieces, outer_radius=np.inf)
    profile.certification = certify(profile)
    return profile


# ---------------------------------------------------------------------------
# certification
# ---------------------------------------------------------------------------

def _domain_cap(profile: CutoffProfile) -> float:
    g = profile.grid
    r_grid = g.half_width * np.sqrt(g.dimension) if g.geometry == "cartesian" else g.half_width
    if np.isfinite(profile.outer_radius):
        return max(profile.outer_radius * 1.25, r_grid)
    return r_grid


def _r_poly(piece: PolyPiece) -> np.ndarray:
    """r expressed in the piece's local variable."""
    return np.array([piece.lo, piece.scale])


def _piece_bounds_t(piece: PolyPiece, cap: float) -> tuple[float, float]:
    if piece.hi is None:
        return 0.0, max(cap - piece.lo, 0.0) / piece.scale
    return 0.0, 1.0


def _min_over_profile(profile: CutoffProfile, expr, cap: float) -> tuple[float, float]:
    """Minimum over [0, cap] of a per-piece polynomial expression.

    ``expr(piece)`` returns coefficients in the piece's local variable.
    """
    best, best_r = np.inf, 0.0
    for piece in profile.pieces:
        lo_t, hi_t = _piece_bounds_t(piece, cap)
        if hi_t <= lo_t and piece.hi is not None:
            continue
        coeffs = np.atleast_1d(np.asarray(expr(piece), dtype=float))
        mn, arg, _, _ = _poly_extrema(coeffs, lo_t, max(hi_t, lo_t))
        if mn < best:
            best, best_r = mn, piece.lo + arg * piece.scale
    return best, best_r


def _audit_mesh(profile: CutoffProfile, cap: float, factor: int = 10) -> np.ndarray:
    step = profile.grid.dx / factor
    return np.arange(0.0, cap + step, step)


def certify(profile: CutoffProfile, audit_factor: int = 10) -> CertificationReport:
    """Worst-case margins of every family constraint.

    Margins combine exact per-piece polynomial extrema with a sampled audit
    mesh ``audit_factor`` times finer than the grid; nonnegative margins are
    required for a valid profile.  Reporting only -- the builders raise.
    """
    cap = _domain_cap(profile)
    mesh = _audit_mesh(profile, cap, audit_factor)
    checks: list[ConstraintCheck] = []

    def add_min_expr(name: str, bound_label: float, expr_builder, mesh_values):
        worst, loc = _min_over_profile(profile, expr_builder, cap)
        i = int(np.argmin(mesh_values))
        if mesh_values[i] < worst:
            worst, loc = float(mesh_values[i]), float(mesh[i])
        checks.append(ConstraintCheck(name, bound_label, worst, worst, loc))

    R = profile.radius
    if profile.family == EXTERIOR_MASS:
        add_min_expr("phi_nonneg", 0.0,
                     lambda p: np.asarray(p.deriv_coeffs(0)),
                     profile.phi(mesh))
        add_min_expr("phi_le_one", 1.0,
                     lambda p: npoly.polysub([1.0], p.deriv_coeffs(0)),
                     1.0 - profile.phi(mesh))
        add_min_expr("dphi_le_4_over_R", 4.0 / R,
                     lambda p: npoly.polysub([4.0 / R], p.deriv_coeffs(1)),
                     4.0 / R - profile.dphi(mesh))
        inner = mesh[mesh <= R / 2.0]
        dev_in = float(np.abs(profile.phi(inner)).max()) if inner.size else 0.0
        checks.append(ConstraintCheck("zero_on_inner_ball", 0.0, dev_in, -dev_in, 0.0))
        outer = mesh[mesh >= R]
        dev_out = float(np.abs(profile.phi(outer) - 1.0).max()) if outer.size else 0.0
        checks.append(ConstraintCheck("one_on_exterior", 0.0, dev_out, -dev_out, R))
    else:
        def rsq_minus_phi(p: PolyPiece):
            rp = _r_poly(p)
            return npoly.polysub(npoly.polymul(rp, rp), p.deriv_coeffs(0))

        def two_r_minus_dphi(p: PolyPiece):
            return npoly.polysub(2.0 * _r_poly(p), p.deriv_coeffs(1))

        add_min_expr("phi_nonneg", 0.0,
                     lambda p: np.asarray(p.deriv_coeffs(0)),
                     profile.phi(mesh))
        add_min_expr("phi_le_r_squared", 0.0, rsq_minus_phi,
                     mesh**2 - profile.phi(mesh))
        add_min_expr("dphi_le_2r", 0.0, two_r_minus_dphi,
                     2.0 * mesh - profile.dphi(mesh))
        add_min_expr("d2phi_le_2", 2.0,
                     lambda p: npoly.polysub([2.0], p.deriv_coeffs(2)),
                     2.0 - profile.d2phi(mesh))
        if profile.family == VIRIAL:
            bound4 = 4.0 / R**2
            add_min_expr("d4phi_le_4_over_R_squared", bound4,
                         lambda p: npoly.polysub([bound4], p.deriv_coeffs(4)),
                         bound4 - profile.d4phi(mesh))
            cap_mesh = mesh[mesh <= R]
            dev_cap = float(np.abs(profile.phi(cap_mesh) - cap_mesh**2).max()) if cap_mesh.size else 0.0
            checks.append(ConstraintCheck("r_squared_on_cap", 0.0, dev_cap, -dev_cap, 0.0))
            tail = mesh[mesh >= profile.outer_radius]
            dev_tail = float(np.abs(profile.dphi(tail)).max()) if tail.size else 0.0
            checks.append(ConstraintCheck("flat_tail", 0.0, dev_tail, -dev_tail, profile.outer_radius))
        else:  # pure_quadratic: the fourth derivative vanishes identically
            checks.append(ConstraintCheck("d4phi_le_4_over_R_squared", np.inf, 0.0, np.inf, 0.0))

    max_abs_d4 = float(np.abs(profile.d4phi(mesh)).max())
    return CertificationReport(tuple(checks), max_abs_d4)


def export_profile_csv(profile: CutoffProfile, path, spacing: float | None = None) -> None:
    """Write (r, phi, phi', phi'', phi''', phi'''') as CSV for plotting."""
    cap = _domain_cap(profile)
    step = spacing if spacing is not None else profile.grid.dx
    rs = np.arange(0.0, cap + step, step)
    cols = [rs] + [profile.evaluate(rs, order) for order in range(5)]
    header = "r,phi,dphi,d2phi,d3phi,d4phi"
    lines = [header]
    for row in zip(*cols):
        lines.append(",".join(f"{v:.17g}" for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
