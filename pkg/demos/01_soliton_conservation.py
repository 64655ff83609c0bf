"""Soliton propagation: the splitting preserves mass to round-off and
energy to second order.

The cubic line soliton sqrt(2) sech(x) just rotates its phase, so any drift
in the conserved quantities is pure scheme error.
"""

import numpy as np

from virial_nls import EquationParams, StepperConfig, evolve, families, make_grid
from virial_nls.grid import Field

grid = make_grid(1, 512, 20.0)
params = EquationParams(1, 3)
u0 = families.soliton(grid)

print("cubic soliton on [-20, 20), n = 512, dt = 1e-3, t in [0, 1]")
cfg = StepperConfig(dt0=1e-3, c_cfl=1e6, dt_min=1e-12, snapshot_stride=100, t_end=1.0)
res = evolve(u0, params, cfg)

m = np.array([r.mass for r in res.records])
e = np.array([r.energy for r in res.records])
print(f"  status          : {res.status} after {res.steps} steps")
print(f"  mass drift      : {np.abs(m - m[0]).max() / m[0]:.3e}")
print(f"  energy drift    : {np.abs(e - e[0]).max() / abs(e[0]):.3e}")

exact = np.sqrt(2.0) / np.cosh(grid.axis()) * np.exp(1j)
err = np.sqrt(float(grid.integrate(np.abs(res.final.values - exact) ** 2)))
print(f"  L2 error vs sqrt(2) sech(x) e^(it) at t=1: {err:.3e}")

print("\nhalving dt shows the second-order energy error on a generic pulse:")
from virial_nls.observables import energy

pulse = families.gaussian(grid, amplitude=1.5)
e0 = energy(pulse, params)
for dt in (4e-3, 2e-3, 1e-3):
    out = evolve(pulse, params, StepperConfig(dt0=dt, c_cfl=1e6, dt_min=1e-12,
                                              snapshot_stride=10**6, t_end=0.4))
    print(f"  dt = {dt:.0e}: |E(T) - E(0)|/|E| = "
          f"{abs(out.records[-1].energy - e0) / abs(e0):.3e}")
