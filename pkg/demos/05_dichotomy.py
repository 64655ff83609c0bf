"""The intercritical dichotomy in action (N = 3, p = 3, radial).

Data at 1.2 Q sits above the gradient threshold and below the mass-energy
threshold: the run focuses and trips the blow-up detector while the
persistence monitors (threshold inequality, gradient floor, Q(u) pinned
negative) hold at every snapshot.  Data at 0.5 Q sits below and disperses.
"""

import numpy as np

from virial_nls import EquationParams, StepperConfig, evolve, families, make_grid
from virial_nls.criteria import evaluate, monitor_persistence
from virial_nls.groundstate import solve_ground_state

grid = make_grid(3, 2048, 30.0, "radial3d")
params = EquationParams(3, 3)
profile = solve_ground_state(params, grid)
print(f"ground state: peak {profile.peak:.6f}, mass {profile.mass:.6f}")

for factor, t_end in ((1.2, 3.0), (0.5, 1.0)):
    u0 = families.scaled_ground_state(profile, factor)
    rep = evaluate(u0, params, profile=profile)
    d = rep.dichotomy
    print(f"\nu0 = {factor} Q:")
    print(f"  mass-energy side   : {d.mass_energy_lhs:.4f} vs threshold {d.mass_energy_rhs:.4f}"
          f"  ({'below' if d.mass_energy_ok else 'above'})")
    print(f"  mass-gradient side : {d.mass_gradient_lhs:.4f} vs threshold {d.mass_gradient_rhs:.4f}"
          f"  ({'above' if d.mass_gradient_ok else 'below'})")
    print(f"  dichotomy verdict  : {d.verdict}")
    cfg = StepperConfig(dt0=2e-4, c_cfl=0.1, dt_min=1e-6, snapshot_stride=20, t_end=t_end)
    res = evolve(u0, params, cfg)
    grads = np.array([r.grad_l2 for r in res.records])
    print(f"  run: {res.status} (t = {res.records[-1].t:.3f}), "
          f"gradient norm {grads[0]:.2f} -> {grads[-1]:.2f}")
    if res.status == "domain_escape":
        print("  (dispersed radiation reached the box edge; a larger box, as in"
              " the acceptance suite, carries this run to t = 5 with bounded norms)")
    if d.verdict:
        pers = monitor_persistence(res.records, profile, params)
        print(f"  persistence: held={pers.condition_held}, Q < 0 throughout={pers.q_negative}, "
              f"delta0={pers.delta0:.3f}, gradient floor {pers.eps0_floor:.2f}")
