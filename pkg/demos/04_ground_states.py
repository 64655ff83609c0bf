"""Ground states across the subcritical range: norms, sharp interpolation
constants, and the dichotomy thresholds they induce."""

from pathlib import Path

from virial_nls import EquationParams, make_grid
from virial_nls.groundstate import (
    export_profile_csv,
    gn_constant,
    pohozaev_residual,
    solve_ground_state,
    thresholds,
)

out = Path(__file__).parent / "out" / "ground_states"
out.mkdir(parents=True, exist_ok=True)

cases = [
    (1, 3, make_grid(1, 1024, 26.0)),
    (1, 5, make_grid(1, 1024, 26.0)),
    (2, 3, make_grid(2, 256, 24.0)),
    (3, 3, make_grid(3, 2048, 30.0, "radial3d")),
]

print(f"{'N,p':>5} {'class':>20} {'peak':>10} {'mass':>12} {'E(Q)':>12} "
      f"{'C_GN':>10} {'virial(Q)':>11}")
for N, p, grid in cases:
    params = EquationParams(N, p)
    prof = solve_ground_state(params, grid)
    print(f"{N},{p:>3} {params.criticality_class:>20} {prof.peak:10.6f} "
          f"{prof.mass:12.6f} {prof.energy:12.6f} {gn_constant(prof):10.6f} "
          f"{pohozaev_residual(prof):11.1e}")
    if 0.0 < params.s_c < 1.0:
        me, mg = thresholds(prof)
        print(f"      thresholds: M^(1-sc) E^sc = {me:.6f},  "
              f"||Q||^(1-sc) ||grad Q||^sc = {mg:.6f}")
    export_profile_csv(prof, out / f"Q_N{N}_p{p}.csv")

print(f"\nradial profiles written to {out}")
print("note: E(Q) = 0 at mass criticality, and E(Q) = M(Q) for (N, p) = (3, 3).")
