"""Scalar functionals of the wave function: conserved quantities, norms,
and the virial functional.

All integrals share the grid's Riemann quadrature so that algebraic
identities between them hold to round-off, independent of resolution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import GridError
from .grid import RADIAL3D, Field, spectral_gradient, transform

MASS_SUBCRITICAL = "mass-subcritical"
MASS_CRITICAL = "mass-critical"
INTERCRITICAL = "intercritical"
ENERGY_CRITICAL = "energy-critical"
ENERGY_SUPERCRITICAL = "energy-supercritical"


@dataclass(frozen=True)
class EquationParams:
    """Dimension N and odd nonlinearity power p of i u_t + Lap u + |u|^(p-1) u = 0."""

    dimension: int
    power: int

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be >= 1, got {self.dimension}")
        if self.power < 3 or self.power % 2 == 0:
            raise ValueError(f"power must be an odd integer >= 3, got {self.power}")

    @property
    def s_c_exact(self) -> Fraction:
        return Fraction(self.dimension, 2) - Fraction(2, self.power - 1)

    @property
    def s_c(self) -> float:
        return float(self.s_c_exact)

    @property
    def criticality_class(self) -> str:
        sc = self.s_c_exact
        if sc < 0:
            return MASS_SUBCRITICAL
        if sc == 0:
            return MASS_CRITICAL
        if sc < 1:
            return INTERCRITICAL
        if sc == 1:
            return ENERGY_CRITICAL
        return ENERGY_SUPERCRITICAL


def criticality(dimension: int, power: int) -> EquationParams:
    """Classify (N, p); rejects even powers via EquationParams validation."""
    return EquationParams(dimension=int(dimension), power=int(power))


@dataclass(frozen=True)
class ConservedSet:
    """Mass, momentum and energy of a snapshot."""

    mass: float
    momentum: tuple[float, ...]
    energy: float

    def __post_init__(self):
        if self.mass < 0 or not np.isfinite(self.mass):
            raise ValueError(f"mass must be finite and nonnegative, got {self.mass}")
        if not np.isfinite(self.energy) or not all(np.isfinite(self.momentum)):
            raise ValueError("conserved quantities must be finite")


def _require_finite(field: Field):
    if not field.is_finite():
        raise ValueError("field contains non-finite samples")


def mass(field: Field) -> float:
    """M(u) = integral |u|^2."""
    _require_finite(field)
    return float(field.grid.integrate(np.abs(field.values) ** 2))


def momentum(field: Field) -> np.ndarray:
    """P(u) = Im integral conj(u) grad u; zero by symmetry for radial fields."""
    _require_finite(field)
    g = field.grid
    if g.geometry == RADIAL3D:
        return np.zeros(3)
    grads = spectral_gradient(field)
    return np.array(
        [float(np.imag(g.integrate(np.conj(field.values) * du))) for du in grads]
    )


def gradient_norm_sq(field: Field) -> float:
    """integral |grad u|^2 with the spectral gradient."""
    _require_finite(field)
    g = field.grid
    grads = spectral_gradient(field)
    dens = sum(np.abs(du) ** 2 for du in grads)
    return float(g.integrate(dens))


def lp_integral(field: Field, power: int) -> float:
    """integral |u|^power (the nonlinear potential term uses power = p + 1)."""
    return float(field.grid.integrate(np.abs(field.values) ** power))


def energy(field: Field, params: EquationParams) -> float:
    """E(u) = integral |grad u|^2 - (2/(p+1)) integral |u|^(p+1)."""
    p = params.power
    return gradient_norm_sq(field) - 2.0 / (p + 1) * lp_integral(field, p + 1)


def conserved_set(field: Field, params: EquationParams) -> ConservedSet:
    return ConservedSet(
        mass=mass(field),
        momentum=tuple(momentum(field)),
        energy=energy(field, params),
    )


def virial_q(field: Field, params: EquationParams) -> float:
    """Q(u) = integral |grad u|^2 - N(p-1)/(2(p+1)) integral |u|^(p+1).

    With the quadratic weight, the variance of |u|^2 satisfies V'' = 8 Q(u)
    along the flow; Q bounded above by a negative constant forces blow-up.
    """
    N, p = params.dimension, params.power
    return gradient_norm_sq(field) - N * (p - 1) / (2.0 * (p + 1)) * lp_integral(field, p + 1)


def e_q_identity_residual(field: Field, params: EquationParams) -> float:
    """Residual of the algebraic identity
    Q(u) = N(p-1)/4 * E(u) - (N(p-1)/4 - 1) * |grad u|^2,
    which must vanish to round-off for every field."""
    N, p = params.dimension, params.power
    c = N * (p - 1) / 4.0
    return virial_q(field, params) - (
        c * energy(field, params) - (c - 1.0) * gradient_norm_sq(field)
    )


def lq_norm(field: Field, q: float) -> float:
    """L^q norm by quadrature; q = inf is the max over samples."""
    _require_finite(field)
    if q == np.inf:
        return float(np.abs(field.values).max())
    q = float(q)
    if q < 1:
        raise ValueError(f"q must be >= 1 or inf, got {q}")
    return float(field.grid.integrate(np.abs(field.values) ** q) ** (1.0 / q))


def hs_seminorm(field: Field, s: float) -> float:
    """Homogeneous Sobolev seminorm |u|_{H^s} via the |k|^s multiplier."""
    _require_finite(field)
    if s < 0:
        raise ValueError(f"s must be >= 0, got {s}")
    g = field.grid
    coeffs = transform(field)
    mult = g.wavenumbers.hs_multiplier(s)
    if g.geometry == RADIAL3D:
        # Parseval: M = 4 pi (dx / (2 n)) sum |what|^2 over the odd extension
        weight = 4.0 * np.pi * g.dx / (2.0 * g.n)
    else:
        weight = (g.dx / g.n) ** g.dimension
    return float(np.sqrt(weight * np.sum(mult * np.abs(coeffs) ** 2)))


def variance(field: Field) -> float:
    """V(u) = integral |x|^2 |u|^2 (finite on the periodic box by construction)."""
    _require_finite(field)
    r = field.grid.radius()
    return float(field.grid.integrate(r**2 * np.abs(field.values) ** 2))


def variance_rate(field: Field) -> float:
    """dV/dt along the flow: 4 Im integral conj(u) (x . grad u)."""
    _require_finite(field)
    g = field.grid
    grads = spectral_gradient(field)
    if g.geometry == RADIAL3D:
        xg = g.axis() * grads[0]
    else:
        xg = sum(c * du for c, du in zip(g.coords(), grads))
    return float(4.0 * np.imag(g.integrate(np.conj(field.values) * xg)))


def exterior_mass(field: Field, radius: float) -> float:
    """L^2 mass outside the ball of the given radius (sharp indicator)."""
    _require_finite(field)
    g = field.grid
    dens = np.abs(field.values) ** 2
    mask = g.radius() >= radius
    if g.geometry == RADIAL3D:
        return float(np.sum((dens * g.quadrature_weights())[mask]))
    return float(np.sum(dens[mask]) * g.quadrature_weights())


def linf_norm(field: Field) -> float:
    return float(np.abs(field.values).max())


def check_same_grid(a: Field, b_grid) -> None:
    if a.grid != b_grid:
        raise GridError("field and profile grids do not match")
