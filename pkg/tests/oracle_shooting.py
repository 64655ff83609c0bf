"""Independent shooting-method oracle for the radial ground state.

Integrates Q'' + (N-1) Q'/r - Q + Q^p = 0 outward with adaptive high-order
stepping and bisects the launch value Q(0): overshoot crosses zero,
undershoot turns back upward.  Used once per (N, p) to generate the frozen
reference values in test_groundstate.py / test_acceptance.py; run this file
directly to regenerate them.

This oracle is deliberately unrelated to the Petviashvili solver it checks:
different discretization (adaptive ODE vs spectral fixed point), different
domain (ray vs periodic grid), different failure modes.
"""

import numpy as np
from scipy.integrate import simpson, solve_ivp


def _rhs(r, y, N, p):
    q, dq = y
    return [dq, q - np.sign(q) * abs(q) ** p - (N - 1) * dq / r]


def _shoot(beta, N, p, rmax=40.0):
    r0 = 1e-8
    c2 = (beta - beta**p) / (2 * N)
    y0 = [beta + c2 * r0**2, 2 * c2 * r0]
    hit_zero = lambda r, y, N, p: y[0]
    hit_zero.terminal, hit_zero.direction = True, -1
    turn_up = lambda r, y, N, p: y[1]
    turn_up.terminal, turn_up.direction = True, 1
    sol = solve_ivp(_rhs, (r0, rmax), y0, args=(N, p), method="DOP853",
                    rtol=1e-13, atol=1e-16, events=(hit_zero, turn_up), dense_output=True)
    if sol.t_events[0].size:
        return 1, sol  # beta too large
    if sol.t_events[1].size:
        return -1, sol  # beta too small
    return 0, sol


def ground_state_oracle(N, p, lo=0.5, hi=6.0):
    """Returns (Q(0), M, ||grad Q||^2, int Q^(p+1), E)."""
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        s, _ = _shoot(mid, N, p)
        if s > 0:
            hi = mid
        elif s < 0:
            lo = mid
        else:
            break
        if hi - lo < 1e-15 * max(1.0, hi):
            break
    beta = 0.5 * (lo + hi)
    _, sol = _shoot(beta, N, p)
    r = np.linspace(1e-8, sol.t[-1], 400_001)
    q, dq = sol.sol(r)
    negative = np.where(q <= 0)[0]
    if negative.size:
        r, q, dq = r[: negative[0]], q[: negative[0]], dq[: negative[0]]
    area = {1: 2.0, 2: 2 * np.pi, 3: 4 * np.pi}[N]
    w = r ** (N - 1)
    M = area * simpson(q**2 * w, x=r)
    G = area * simpson(dq**2 * w, x=r)
    S = area * simpson(np.abs(q) ** (p + 1) * w, x=r)
    return beta, M, G, S, G - 2.0 / (p + 1) * S


if __name__ == "__main__":
    for (N, p) in [(1, 3), (1, 5), (1, 7), (2, 3), (2, 5), (3, 3)]:
        beta, M, G, S, E = ground_state_oracle(N, p)
        sc = N / 2 - 2 / (p - 1)
        print(f"({N},{p}): Q0={beta:.10f} M={M:.8f} G={G:.8f} S={S:.8f} E={E:.8f} s_c={sc}")
        if 0 < sc < 1:
            print(f"        thresholds: ME={M**(1-sc)*E**sc:.8f} MG={M**((1-sc)/2)*G**(sc/2):.8f}")
