"""virial_nls: spectral simulation and virial-identity diagnostics for the
focusing nonlinear Schrodinger equation i u_t + Lap u + |u|^(p-1) u = 0."""

from .grid import (
    CARTESIAN,
    RADIAL3D,
    Field,
    GridSpec,
    WavenumberSet,
    inverse_transform,
    laplacian,
    make_grid,
    radial_reduce_laplacian,
    spectral_gradient,
    transform,
)
from .observables import (
    ConservedSet,
    EquationParams,
    conserved_set,
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
    variance_rate,
    virial_q,
)
from .cutoffs import (
    CutoffProfile,
    build_exterior_cutoff,
    build_pure_quadratic,
    build_virial_cutoff,
    certify,
)
from .virial import (
    ExteriorMassBudget,
    VirialSample,
    check_lemma25_bound,
    decompose,
    eval_I,
    eval_Idoubleprime,
    eval_Iprime,
    exterior_mass_budget,
    interpolation_exponent,
)
from .integrator import (
    BLOWUP_DETECTED,
    COMPLETED,
    DOMAIN_ESCAPE,
    EvolveResult,
    StepperConfig,
    TrajectoryRecord,
    adapt_dt,
    evolve,
    step,
)
from .groundstate import (
    GroundStateProfile,
    closed_form_1d,
    gn_constant,
    gn_inequality_deficit,
    solve_ground_state,
    thresholds,
)
from .criteria import (
    BoostSpec,
    CriterionReport,
    PersistenceReport,
    boost,
    evaluate,
    glassey_bound,
    lattice_boost_spec,
    monitor_persistence,
)

__version__ = "0.1.0"
