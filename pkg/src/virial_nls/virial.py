"""Localized virial quantities I, I', I'' and their error decomposition.

For a radial weight phi the quantities are

    I   = integral phi |u|^2
    I'  = 2 Im integral (phi'/r) (x . grad u) conj(u)
    I'' = 4 integral [ (phi'/r) |grad u|^2 + (phi''/r^2 - phi'/r^3) |x.grad u|^2 ]
          - 2 (p-1)/(p+1) integral Lap(phi) |u|^(p+1)
          - integral Lap^2(phi) |u|^2

and I'' decomposes as 8 Q(u) + R1 + R2 + R3, where the three error terms
carry weights supported outside the r^2 cap.  Because every term is computed
with the same quadrature, the decomposition is an algebraic identity of the
discrete sums; R1 <= 0 is likewise pointwise for certified weights, since
|x . grad u|^2 <= r^2 |grad u|^2 holds sample by sample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cutoffs import CutoffProfile, PURE_QUADRATIC, VIRIAL
from .errors import GridError
from .grid import RADIAL3D, Field, spectral_gradient
from .observables import (
    EquationParams,
    exterior_mass,
    gradient_norm_sq,
    lp_integral,
    virial_q,
)


@dataclass(frozen=True)
class VirialSample:
    """One time-stamped evaluation of the localized virial quantities."""

    t: float
    I: float
    Iprime: float
    Idoubleprime: float
    Q: float
    R1: float
    R2: float
    R3: float

    @property
    def residual(self) -> float:
        """I'' - (8Q + R1 + R2 + R3); round-off sized for matched quadrature."""
        return self.Idoubleprime - (8.0 * self.Q + self.R1 + self.R2 + self.R3)

    @property
    def residual_scale(self) -> float:
        return abs(self.Idoubleprime) + 8.0 * abs(self.Q) + abs(self.R1) + abs(self.R2) + abs(self.R3)


def _check_grids(field: Field, profile: CutoffProfile):
    if field.grid != profile.grid:
        raise GridError("field and cutoff profile live on different grids")


def _gradient_pieces(field: Field):
    """(|grad u|^2, x.grad u) sample arrays for either geometry."""
    g = field.grid
    grads = spectral_gradient(field)
    if g.geometry == RADIAL3D:
        grad_sq = np.abs(grads[0]) ** 2
        xdotgrad = g.axis() * grads[0]
    else:
        grad_sq = sum(np.abs(du) ** 2 for du in grads)
        xdotgrad = sum(c * du for c, du in zip(g.coords(), grads))
        xdotgrad = np.broadcast_to(xdotgrad, g.shape)
        grad_sq = np.broadcast_to(grad_sq, g.shape)
    return grad_sq, xdotgrad


def eval_I(field: Field, profile: CutoffProfile) -> float:
    """Weighted mass integral phi |u|^2."""
    _check_grids(field, profile)
    r = field.grid.radius()
    return float(field.grid.integrate(profile.phi(r) * np.abs(field.values) ** 2))


def eval_Iprime(field: Field, profile: CutoffProfile) -> float:
    """First time derivative of I along the flow (radial form)."""
    _check_grids(field, profile)
    g = field.grid
    r = g.radius()
    _, xdotgrad = _gradient_pieces(field)
    integrand = profile.dphi_over_r(r) * xdotgrad * np.conj(field.values)
    return float(2.0 * np.imag(g.integrate(integrand)))


def eval_Idoubleprime(field: Field, profile: CutoffProfile, params: EquationParams) -> float:
    """Second time derivative of I: Hessian, potential and bilaplacian terms."""
    _check_grids(field, profile)
    g = field.grid
    N, p = params.dimension, params.power
    r = g.radius()
    grad_sq, xdotgrad = _gradient_pieces(field)
    w = profile.virial_weights(r, N)
    hess = 4.0 * g.integrate(profile.dphi_over_r(r) * grad_sq) \
        + 4.0 * g.integrate(w.aniso * np.abs(xdotgrad) ** 2)
    pot = -2.0 * (p - 1) / (p + 1) * g.integrate(w.lap_phi * np.abs(field.values) ** (p + 1))
    bilap = -g.integrate(w.bilaplacian * np.abs(field.values) ** 2)
    return float(np.real(hess + pot + bilap))


def decompose(field: Field, profile: CutoffProfile, params: EquationParams,
              t: float = 0.0) -> VirialSample:
    """Full virial sample with the 8Q + R1 + R2 + R3 decomposition."""
    _check_grids(field, profile)
    if profile.family not in (VIRIAL, PURE_QUADRATIC):
        raise GridError(f"decomposition requires a virial-family profile, got '{profile.family}'")
    g = field.grid
    N, p = params.dimension, params.power
    r = g.radius()
    grad_sq, xdotgrad = _gradient_pieces(field)
    absxg_sq = np.abs(xdotgrad) ** 2
    dens = np.abs(field.values) ** 2
    pw = np.abs(field.values) ** (p + 1)
    w = profile.virial_weights(r, N)

    R1 = float(4.0 * g.integrate(w.grad * grad_sq) + 4.0 * g.integrate(w.aniso * absxg_sq))
    R2 = float(-2.0 * (p - 1) / (p + 1) * g.integrate(w.potential * pw))
    R3 = float(-g.integrate(w.bilaplacian * dens))
    return VirialSample(
        t=t,
        I=eval_I(field, profile),
        Iprime=eval_Iprime(field, profile),
        Idoubleprime=eval_Idoubleprime(field, profile, params),
        Q=virial_q(field, params),
        R1=R1,
        R2=R2,
        R3=R3,
    )


def interpolation_exponent(params: EquationParams, q: float) -> float:
    """theta with 1/(p+1) = (1-theta)/q + theta/2, interpolating L^(p+1)
    between L^q and L^2 on the exterior region; requires q > p + 1."""
    p = params.power
    if q <= p + 1:
        raise ValueError(f"q must exceed p + 1 = {p + 1}, got {q}")
    theta = (1.0 / (p + 1) - 1.0 / q) / (0.5 - 1.0 / q)
    return float(theta)


@dataclass(frozen=True)
class Lemma25Check:
    """Margin of I'' <= 8Q + C_tilde * ||u||_{L2(r>R)}^theta_q for one sample."""

    theta_q: float
    margin: float
    min_c_tilde: float


def check_lemma25_bound(sample: VirialSample, exterior_l2: float,
                        params: EquationParams, q: float,
                        c_tilde: float, c0: float | None = None) -> Lemma25Check:
    """Evaluate the exterior-interpolation bound on one virial sample.

    ``exterior_l2`` is the L^2 norm outside the profile radius; ``c0``, the
    running sup of the L^q norm, is accepted for the caller's bookkeeping
    (the bound's constant absorbs it).  A nonnegative margin means the bound
    holds with the supplied constant; ``min_c_tilde`` is the smallest
    constant that would close it for this sample.
    """
    theta = interpolation_exponent(params, q)
    excess = sample.Idoubleprime - 8.0 * sample.Q
    penalty = exterior_l2**theta
    margin = 8.0 * sample.Q + c_tilde * penalty - sample.Idoubleprime
    if excess <= 0.0:
        min_c = 0.0
    elif penalty == 0.0:
        min_c = np.inf
    else:
        min_c = excess / penalty
    return Lemma25Check(theta_q=theta, margin=float(margin), min_c_tilde=float(min_c))


def min_c_tilde(samples, exterior_l2s, params: EquationParams, q: float) -> float:
    """Smallest constant closing the bound across a trajectory."""
    worst = 0.0
    for s, ext in zip(samples, exterior_l2s):
        c = check_lemma25_bound(s, ext, params, q, c_tilde=0.0).min_c_tilde
        worst = max(worst, c)
    return worst


@dataclass(frozen=True)
class ExteriorMassBudget:
    """Time horizon and constants of the exterior-mass control.

    The budget T = eta0 R / (4 m0 C0bar) is how long the L^2 mass outside
    radius R provably stays below eta0 + o_R(1); alpha0 is the (negative)
    coefficient of the R^2 term in the resulting variance bound.
    """

    eta0: float
    m0: float
    c0_bar: float
    radius: float
    t_budget: float
    beta0: float
    alpha0: float
    theta_q: float | None = None
    c_tilde: float | None = None


@dataclass(frozen=True)
class ExteriorMassVerification:
    t: float
    exterior_mass: float
    bound: float

    @property
    def holds(self) -> bool:
        return self.exterior_mass <= self.bound


def exterior_mass_budget(records, R: float, eta0: float, initial_field: Field,
                         params: EquationParams | None = None,
                         q: float | None = None) -> tuple[ExteriorMassBudget, list[ExteriorMassVerification]]:
    """Verify the propagation bound on the exterior mass along a trajectory.

    For every record with t <= T_budget, checks

        integral_{|x| >= R} |u|^2  <=  integral_{|x| >= R/2} |u0|^2 + 4 m0 C0bar t / R

    using each record's measured exterior mass at radius R (probe column)
    and the running sup of the gradient norm for C0bar.
    """
    if eta0 <= 0:
        raise ValueError("eta0 must be positive")
    key = ext_mass_column(R)
    m0 = float(np.sqrt(records[0].mass))
    c0_bar = max(rec.grad_l2 for rec in records)
    half_mass = exterior_mass(initial_field, R / 2.0)
    t_budget = eta0 * R / (4.0 * m0 * c0_bar) if c0_bar > 0 else np.inf
    beta0 = max(rec.q_virial for rec in records)
    alpha0 = beta0 * eta0**2 / (4.0 * m0 * c0_bar) ** 2 if c0_bar > 0 else -np.inf
    theta = interpolation_exponent(params, q) if (params is not None and q is not None) else None
    budget = ExteriorMassBudget(
        eta0=eta0, m0=m0, c0_bar=c0_bar, radius=R, t_budget=float(t_budget),
        beta0=float(beta0), alpha0=float(alpha0), theta_q=theta,
    )
    series = []
    for rec in records:
        if rec.t > t_budget:
            break
        ext = rec.extras.get(key)
        if ext is None:
            raise KeyError(f"trajectory records carry no exterior-mass probe at R={R}")
        bound = half_mass + 4.0 * m0 * c0_bar * rec.t / R
        series.append(ExteriorMassVerification(t=rec.t, exterior_mass=float(ext), bound=float(bound)))
    return budget, series


def radius_label(value: float) -> str:
    """Column label for a probe radius: integral radii print bare."""
    if float(value).is_integer():
        return str(int(value))
    return repr(float(value))


def ext_mass_column(R: float) -> str:
    return f"ext_mass_{radius_label(R)}"
