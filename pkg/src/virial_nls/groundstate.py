"""Ground states of -Q + Lap Q + Q^p = 0 and the derived sharp constants.

The solver is a Petviashvili fixed-point iteration in spectral space,

    Q  <-  gamma^sigma (1 - Lap)^{-1} Q^p,
    gamma = <(1 - Lap) Q, Q> / <Q^p, Q>,   sigma = p/(p-1),

with positivity enforced by taking the modulus each sweep.  In one dimension
the result can be checked against the closed sech family; in higher
dimensions an independent shooting oracle (kept with the tests) generated
the frozen reference values.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import GroundStateError
from .grid import RADIAL3D, Field, GridSpec, laplacian, transform, inverse_transform
from .observables import (
    EquationParams,
    energy,
    gradient_norm_sq,
    lp_integral,
    mass,
    virial_q,
)


@dataclass
class GroundStateProfile:
    """Converged ground state with its norms and derived thresholds."""

    params: EquationParams
    grid: GridSpec
    values: np.ndarray  # real, nonnegative samples
    mass: float
    grad_norm_sq: float
    lp1: float          # integral Q^(p+1)
    energy: float
    iterations: int

    @property
    def field(self) -> Field:
        return Field(self.values.astype(np.complex128), self.grid)

    @property
    def peak(self) -> float:
        return float(self.values.max())

    def radial_samples(self) -> tuple[np.ndarray, np.ndarray]:
        """(r, Q(r)) along a ray from the origin, for export and plots."""
        g = self.grid
        if g.geometry == RADIAL3D:
            return g.axis(), self.values.copy()
        x = g.axis()
        half = slice(g.n // 2, None)
        if g.dimension == 1:
            return x[half], self.values[half]
        center = g.n // 2
        return x[half], self.values[center][half]


def _inverse_helmholtz(rhs: Field) -> Field:
    """(1 - Lap)^{-1} applied spectrally."""
    g = rhs.grid
    coeffs = transform(rhs) / (1.0 + g.wavenumbers.k2)
    return inverse_transform(coeffs, g)


def solve_ground_state(params: EquationParams, grid: GridSpec, *,
                       initial_amplitude: float | None = None,
                       initial_width: float = 1.0,
                       tol: float = 1e-12,
                       max_iterations: int = 10_000) -> GroundStateProfile:
    """Petviashvili iteration on the given grid.

    Accepts any energy-subcritical (N, p); for N >= 3 powers at or above
    1 + 4/(N - 2) are rejected since no decaying ground state exists there.
    Raises GroundStateError on non-convergence or collapse to zero.
    """
    N, p = params.dimension, params.power
    if N >= 3 and p >= 1 + 4 / (N - 2):
        raise GroundStateError(
            f"no H^1 ground state for p >= 1 + 4/(N-2) = {1 + 4 // (N - 2)} in "
            f"dimension {N}; need 3 <= p < {1 + 4 / (N - 2):g}"
        )
    if grid.dimension != N:
        raise GroundStateError(f"grid dimension {grid.dimension} != equation dimension {N}")

    amp = initial_amplitude if initial_amplitude is not None else 1.0 + 0.6 * N
    r = grid.radius()
    Q = amp * np.exp(-(r**2) / (2.0 * initial_width**2))
    sigma = p / (p - 1.0)
    initial_norm = np.sqrt(mass(Field(Q.astype(np.complex128), grid)))
    prev_residual = np.inf
    monotone_after_warmup = True

    for iteration in range(1, max_iterations + 1):
        fQ = Field(Q.astype(np.complex128), grid)
        m2 = mass(fQ)
        if np.sqrt(m2) < 1e-10 * initial_norm:
            raise GroundStateError("iteration collapsed to zero; initial guess too small")
        g2 = gradient_norm_sq(fQ)
        nonlin = np.abs(Q) ** (p - 1) * Q
        denom = float(grid.integrate(nonlin * Q))
        if denom <= 0:
            raise GroundStateError("degenerate normalization factor; initial guess too small")
        gamma = (m2 + g2) / denom
        Q_new = _inverse_helmholtz(Field(nonlin.astype(np.complex128), grid)).values
        Q_new = gamma**sigma * np.abs(Q_new)
        change = np.sqrt(mass(Field((Q_new - Q).astype(np.complex128), grid)) / m2)
        # convergence diagnostic: residual of the fixed point should shrink
        # monotonically once past the transient
        if iteration > 10 and change > prev_residual * (1.0 + 1e-9):
            monotone_after_warmup = False
        prev_residual = change
        Q = Q_new
        if change < tol:
            break
    else:
        raise GroundStateError(
            f"Petviashvili iteration did not reach {tol:g} in {max_iterations} sweeps"
        )

    if not monotone_after_warmup:
        warnings.warn("Petviashvili residual was not monotone after warm-up", RuntimeWarning)

    fQ = Field(Q.astype(np.complex128), grid)
    return GroundStateProfile(
        params=params,
        grid=grid,
        values=Q,
        mass=mass(fQ),
        grad_norm_sq=gradient_norm_sq(fQ),
        lp1=lp_integral(fQ, p + 1),
        energy=energy(fQ, params),
        iterations=iteration,
    )


def ode_residual(profile: GroundStateProfile) -> np.ndarray:
    """Pointwise residual of -Q + Lap Q + Q^p; spectral Laplacian."""
    fQ = profile.field
    lap = laplacian(fQ)
    p = profile.params.power
    return np.real(-fQ.values + lap + np.abs(fQ.values) ** (p - 1) * fQ.values)


def closed_form_1d(params: EquationParams, x: np.ndarray) -> np.ndarray:
    """The sech family in one dimension:
    Q(x) = ((p+1)/2)^(1/(p-1)) sech((p-1) x / 2)^(2/(p-1))."""
    if params.dimension != 1:
        raise GroundStateError("closed form available in dimension 1 only")
    p = params.power
    return ((p + 1) / 2.0) ** (1.0 / (p - 1)) / np.cosh((p - 1) * x / 2.0) ** (2.0 / (p - 1))


def gn_constant(profile: GroundStateProfile) -> float:
    """Sharp interpolation constant attained at the ground state:

        C = ||Q||_{p+1}^{p+1} / ( ||grad Q||^{N(p-1)/2} ||Q||^{2 - (N-2)(p-1)/2} ).

    The quotient is invariant under the amplitude/width rescaling of the
    equation, so it is grid-resolution-stable.
    """
    N, p = profile.params.dimension, profile.params.power
    grad_norm = np.sqrt(profile.grad_norm_sq)
    l2_norm = np.sqrt(profile.mass)
    return float(profile.lp1 / (grad_norm ** (N * (p - 1) / 2.0)
                                * l2_norm ** (2.0 - (N - 2) * (p - 1) / 2.0)))


def gn_inequality_deficit(field: Field, params: EquationParams, constant: float) -> float:
    """C ||grad u||^{N(p-1)/2} ||u||^{2-(N-2)(p-1)/2} - ||u||_{p+1}^{p+1};
    nonnegative when the inequality holds with the given constant."""
    N, p = params.dimension, params.power
    grad_norm = np.sqrt(gradient_norm_sq(field))
    l2_norm = np.sqrt(mass(field))
    rhs = constant * grad_norm ** (N * (p - 1) / 2.0) * l2_norm ** (2.0 - (N - 2) * (p - 1) / 2.0)
    return float(rhs - lp_integral(field, p + 1))


def thresholds(profile: GroundStateProfile) -> tuple[float, float]:
    """(mass-energy, mass-gradient) dichotomy thresholds:

        M(Q)^(1-s_c) E(Q)^(s_c)   and   ||Q||^(1-s_c) ||grad Q||^(s_c).

    Defined for intercritical exponents only (0 < s_c < 1); a nonpositive
    ground-state energy signals a solver failure in that range.
    """
    sc = profile.params.s_c
    if not (0.0 < sc < 1.0):
        raise GroundStateError(
            f"thresholds require 0 < s_c < 1 (intercritical); got s_c = {sc:g}"
        )
    if profile.energy <= 0.0:
        raise GroundStateError(
            f"ground-state energy must be positive in the intercritical range, got {profile.energy:g}"
        )
    mass_energy = profile.mass ** (1.0 - sc) * profile.energy**sc
    mass_gradient = np.sqrt(profile.mass) ** (1.0 - sc) * np.sqrt(profile.grad_norm_sq) ** sc
    return float(mass_energy), float(mass_gradient)


def pohozaev_residual(profile: GroundStateProfile) -> float:
    """virial functional at the ground state, relative to its term scale;
    vanishes for the exact standing wave."""
    q = virial_q(profile.field, profile.params)
    N, p = profile.params.dimension, profile.params.power
    scale = profile.grad_norm_sq + N * (p - 1) / (2.0 * (p + 1)) * profile.lp1
    return float(q / scale)


def export_profile_csv(profile: GroundStateProfile, path) -> None:
    r, q = profile.radial_samples()
    lines = ["r,Q"]
    for ri, qi in zip(r, q):
        lines.append(f"{ri:.17g},{qi:.17g}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
