"""Command-line front end.

Subcommands: simulate, ground-state, criteria, boost, verify.
Exit codes: 0 ok/completed, 1 usage or config error, 2 blow-up detected,
3 domain escape, 4 ground-state non-convergence, 5 failed verification.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .. import criteria, families
from ..errors import ConfigError, GroundStateError, VirialNlsError
from ..grid import make_grid
from ..groundstate import (
    export_profile_csv,
    gn_constant,
    solve_ground_state,
    thresholds,
)
from ..observables import EquationParams, energy, mass, momentum
from .config import load_config
from .runner import (
    EXIT_GROUNDSTATE,
    EXIT_OK,
    EXIT_USAGE,
    EXIT_VERIFY,
    atomic_write_text,
    build_problem,
    check_manifest,
    run_scenario,
)
from .verify import SUITES, run_suites


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="virial-nls",
        description="Spectral simulation and blow-up diagnostics for the focusing NLS",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a configured scenario")
    sim.add_argument("--config", required=True, help="path to a scenario JSON file")
    sim.add_argument("--check", action="store_true",
                     help="validate the output manifest checksums instead of running")

    gs = sub.add_parser("ground-state", help="solve the nonlinear ground state")
    gs.add_argument("--dim", type=int, required=True)
    gs.add_argument("--p", type=int, required=True)
    gs.add_argument("--points", type=int, default=None)
    gs.add_argument("--half-width", type=float, default=None)
    gs.add_argument("--radial", action="store_true",
                    help="radial 3-D geometry (implied for --dim 3)")
    gs.add_argument("--out", default=None, help="directory for profile CSV + thresholds JSON")

    cr = sub.add_parser("criteria", help="evaluate blow-up criteria on configured data")
    cr.add_argument("--config", required=True)
    cr.add_argument("--out", default=None, help="optional JSON output path")

    bo = sub.add_parser("boost", help="apply a Galilean boost to configured data")
    bo.add_argument("--config", required=True)
    bo.add_argument("--xi", default=None,
                    help="comma-separated boost velocity (default: -P/M rounded to the lattice)")
    bo.add_argument("--time", type=float, default=0.0)
    bo.add_argument("--out", default=None, help="optional CSV path for the boosted field")

    ve = sub.add_parser("verify", help="run named verification suites")
    ve.add_argument("suite", nargs="?", default="all",
                    choices=[*SUITES.keys(), "all"])
    ve.add_argument("--threads", type=int, default=None,
                    help="suite parallelism (default: VIRIAL_NLS_THREADS or 1)")
    return parser


def _cmd_simulate(args) -> int:
    config = load_config(args.config)
    if args.check:
        problems = check_manifest(config.resolve_output())
        if problems:
            for p in problems:
                print(f"manifest: {p}", file=sys.stderr)
            return EXIT_VERIFY
        print("manifest: all checksums match")
        return EXIT_OK
    out = run_scenario(config)
    print(f"status: {out.status}")
    print(f"output: {out.directory}")
    if out.detection_time is not None:
        print(f"detection_time: {out.detection_time:.9g}")
    return out.exit_code


def _default_grid(dim: int, radial: bool):
    if dim == 1:
        return 512, 20.0
    if dim == 2:
        return 128, 12.0
    return 2048, 30.0


def _cmd_ground_state(args) -> int:
    dim = args.dim
    radial = args.radial or dim == 3
    n, L = _default_grid(dim, radial)
    if args.points is not None:
        n = args.points
    if args.half_width is not None:
        L = args.half_width
    params = EquationParams(dim, args.p)
    grid = make_grid(dim, n, L, "radial3d" if radial and dim == 3 else "cartesian")
    profile = solve_ground_state(params, grid)
    doc = {
        "dimension": dim,
        "power": args.p,
        "s_c": params.s_c,
        "criticality": params.criticality_class,
        "peak": profile.peak,
        "mass": profile.mass,
        "grad_norm_sq": profile.grad_norm_sq,
        "lp1_integral": profile.lp1,
        "energy": profile.energy,
        "gn_constant": gn_constant(profile),
        "iterations": profile.iterations,
    }
    if 0.0 < params.s_c < 1.0:
        me, mg = thresholds(profile)
        doc["thresholds"] = {"mass_energy": me, "mass_gradient": mg}
    text = json.dumps(doc, indent=2, sort_keys=True)
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        export_profile_csv(profile, out / "ground_state.csv")
        atomic_write_text(out / "thresholds.json", text + "\n")
    return EXIT_OK


def _cmd_criteria(args) -> int:
    config = load_config(args.config)
    _, params, field, profile = build_problem(config)
    report = criteria.evaluate(field, params, profile=profile)
    doc = json.dumps(report.to_dict(), indent=2, sort_keys=True)
    print(doc)
    if args.out:
        atomic_write_text(Path(args.out), doc + "\n")
    return EXIT_OK


def _cmd_boost(args) -> int:
    config = load_config(args.config)
    _, params, field, _ = build_problem(config)
    if args.xi is not None:
        xi = tuple(float(v) for v in args.xi.split(","))
        spec = criteria.BoostSpec(xi=xi, rounding_error=0.0)
    else:
        spec = criteria.lattice_boost_spec(field)
    boosted = criteria.boost(field, spec.xi, t=args.time)
    before = {"M": mass(field), "P": list(momentum(field)), "E": energy(field, params)}
    after = {"M": mass(boosted), "P": list(momentum(boosted)), "E": energy(boosted, params)}
    psq_over_m = float(np.dot(before["P"], before["P"])) / before["M"]
    doc = {
        "xi": list(spec.xi),
        "rounding_error": spec.rounding_error,
        "time": args.time,
        "before": before,
        "after": after,
        "reduced_energy_identity_residual": after["E"] - (before["E"] - psq_over_m),
    }
    print(json.dumps(doc, indent=2, sort_keys=True))
    if args.out:
        families.write_field_csv(boosted, args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    names = list(SUITES.keys()) if args.suite == "all" else [args.suite]
    checks = run_suites(names, max_threads=args.threads)
    width = max(len(f"{c.suite}.{c.name}") for c in checks)
    ok = True
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        ok &= c.passed
        print(f"{status}  {c.suite + '.' + c.name:<{width}}  margin={c.margin:.3e}  {c.detail}")
    print(f"{'all checks passed' if ok else 'FAILURES present'}")
    return EXIT_OK if ok else EXIT_VERIFY


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors with code 2
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "simulate":
            return _cmd_simulate(args)
        if args.command == "ground-state":
            return _cmd_ground_state(args)
        if args.command == "criteria":
            return _cmd_criteria(args)
        if args.command == "boost":
            return _cmd_boost(args)
        if args.command == "verify":
            return _cmd_verify(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GroundStateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GROUNDSTATE
    except (VirialNlsError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
