"""Run orchestration: wire the integrator and probes, write CSV/JSON output
atomically, and record a checksum manifest."""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .. import criteria, cutoffs, families, virial
from ..errors import ConfigError
from ..grid import CARTESIAN, RADIAL3D, Field, make_grid
from ..groundstate import solve_ground_state
from ..integrator import BLOWUP_DETECTED, COMPLETED, DOMAIN_ESCAPE, StepperConfig, evolve
from ..observables import EquationParams, exterior_mass
from ..virial import radius_label
from .config import ScenarioConfig

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_BLOWUP = 2
EXIT_ESCAPE = 3
EXIT_GROUNDSTATE = 4
EXIT_VERIFY = 5

STATUS_EXIT_CODES = {COMPLETED: EXIT_OK, BLOWUP_DETECTED: EXIT_BLOWUP, DOMAIN_ESCAPE: EXIT_ESCAPE}


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def sha256_of(path: Path) -> str:
    h = hashlib.sha256()
    h.update(path.read_bytes())
    return h.hexdigest()


class VirialProbe:
    """Per-snapshot virial decomposition against one weight profile."""

    def __init__(self, profile, params: EquationParams, label: str):
        self.profile = profile
        self.params = params
        self.label = label
        self.samples: list[virial.VirialSample] = []

    @property
    def columns(self) -> list[str]:
        lab = self.label
        return [f"I_{lab}", f"Iprime_{lab}", f"Idoubleprime_{lab}",
                f"R1_{lab}", f"R2_{lab}", f"R3_{lab}"]

    def __call__(self, t: float, field: Field) -> dict[str, float]:
        s = virial.decompose(field, self.profile, self.params, t=t)
        self.samples.append(s)
        return {
            f"I_{self.label}": s.I,
            f"Iprime_{self.label}": s.Iprime,
            f"Idoubleprime_{self.label}": s.Idoubleprime,
            f"R1_{self.label}": s.R1,
            f"R2_{self.label}": s.R2,
            f"R3_{self.label}": s.R3,
        }


class ExteriorMassProbe:
    def __init__(self, radius: float):
        self.radius = radius
        self.column = virial.ext_mass_column(radius)

    def __call__(self, t: float, field: Field) -> dict[str, float]:
        return {self.column: exterior_mass(field, self.radius)}


@dataclass
class RunOutput:
    directory: Path
    status: str
    exit_code: int
    files: list[str]
    records: list
    detection_time: float | None


def build_problem(config: ScenarioConfig):
    """(grid, params, initial field, ground-state profile or None)."""
    eq = config.equation
    grid = make_grid(eq.dimension, config.grid.points, config.grid.half_width, eq.geometry)
    params = EquationParams(eq.dimension, eq.power)
    fam, kw = config.initial_data.family, dict(config.initial_data.parameters)
    profile = None
    if fam == "gaussian":
        field = families.gaussian(grid, **kw)
    elif fam == "modulated_gaussian":
        field = families.modulated_gaussian(grid, **kw)
    elif fam == "soliton":
        if eq.power != 3:
            raise ConfigError("initial_data.family", "soliton family requires p = 3")
        field = families.soliton(grid, **kw)
    elif fam == "scaled_ground_state":
        amp = kw.pop("initial_amplitude", None)
        profile = solve_ground_state(params, grid, initial_amplitude=amp)
        field = families.scaled_ground_state(profile, kw["factor"])
    elif fam == "from_file":
        path = Path(kw["path"])
        if not path.is_absolute():
            path = config.base_dir / path
        field = families.from_file(grid, path)
    else:  # config validation makes this unreachable
        raise ConfigError("initial_data.family", fam)
    return grid, params, field, profile


def monitored_hs(config: ScenarioConfig, params: EquationParams) -> tuple[float, ...]:
    if config.probes.hs != "auto":
        return tuple(config.probes.hs)
    # default monitors: just above the scaling-critical index, and H^1
    sc = params.s_c
    values = []
    if sc >= 0.0:
        values.append(round(sc + 0.1, 12))
    if not values or abs(values[0] - 1.0) > 1e-12:
        values.append(1.0)
    return tuple(values)


def monitored_lq(config: ScenarioConfig, params: EquationParams) -> tuple[float, ...]:
    if config.probes.lq:
        return tuple(config.probes.lq)
    p = params.power
    return (float(p + 1), float(p + 3))


def trajectory_header(config: ScenarioConfig, params: EquationParams,
                      lq, hs, virial_probes, ext_probes) -> list[str]:
    cols = ["t", "M"]
    cols += [f"P{i+1}" for i in range(3 if config.equation.geometry == RADIAL3D else params.dimension)]
    cols += ["E", "Q", "grad_l2", "linf"]
    cols += [f"lq_{q:g}" for q in lq]
    cols += [f"hs_{s:g}" for s in hs]
    for probe in virial_probes:
        cols += probe.columns
    for probe in ext_probes:
        cols.append(probe.column)
    cols.append("dt")
    return cols


def run_scenario(config: ScenarioConfig) -> RunOutput:
    """Execute one configured run and write its outputs.

    Files: trajectory.csv, one virial_<label>.csv per weight profile,
    criterion_report.json, persistence_report.json, run_stats.json, and a
    manifest.json with a SHA-256 checksum per file.
    """
    grid, params, field, gs_profile = build_problem(config)
    lq = monitored_lq(config, params)
    hs = monitored_hs(config, params)

    virial_probes = []
    if config.probes.include_pure_quadratic:
        virial_probes.append(VirialProbe(cutoffs.build_pure_quadratic(grid), params, "0"))
    for radius in config.probes.virial_radii:
        prof = cutoffs.build_virial_cutoff(radius, grid)
        virial_probes.append(VirialProbe(prof, params, radius_label(radius)))
    ext_probes = [ExteriorMassProbe(radius) for radius in config.probes.exterior_radii]

    stepper = StepperConfig(
        dt0=config.stepper.dt0, c_cfl=config.stepper.c_cfl, dt_min=config.stepper.dt_min,
        snapshot_stride=config.stepper.snapshot_stride, t_end=config.stepper.t_end,
        boundary_mass_threshold=config.stepper.boundary_mass_threshold,
    )
    result = evolve(field, params, stepper, probes=[*virial_probes, *ext_probes], lq=lq, hs=hs)

    out_dir = config.resolve_output()
    out_dir.mkdir(parents=True, exist_ok=True)
    files: list[str] = []

    header = trajectory_header(config, params, lq, hs, virial_probes, ext_probes)
    mom_count = 3 if config.equation.geometry == RADIAL3D else params.dimension
    lines = [",".join(header)]
    for rec in result.records:
        row = [rec.t, rec.mass, *rec.momentum[:mom_count], rec.energy, rec.q_virial,
               rec.grad_l2, rec.linf]
        row += [rec.lq[q] for q in lq]
        row += [rec.hs[s] for s in hs]
        for probe in virial_probes:
            row += [rec.extras[c] for c in probe.columns]
        for probe in ext_probes:
            row.append(rec.extras[probe.column])
        row.append(rec.dt)
        lines.append(",".join(_fmt(v) for v in row))
    atomic_write_text(out_dir / "trajectory.csv", "\n".join(lines) + "\n")
    files.append("trajectory.csv")

    for probe in virial_probes:
        vlines = ["t,I,Iprime,Idoubleprime,Q,R1,R2,R3,residual"]
        for s in probe.samples:
            vlines.append(",".join(_fmt(v) for v in
                                   (s.t, s.I, s.Iprime, s.Idoubleprime, s.Q, s.R1, s.R2, s.R3, s.residual)))
        name = f"virial_{probe.label}.csv"
        atomic_write_text(out_dir / name, "\n".join(vlines) + "\n")
        files.append(name)

    report = criteria.evaluate(field, params, profile=gs_profile)
    report_doc = {
        "equation": {"dimension": params.dimension, "power": params.power,
                     "geometry": config.equation.geometry},
        "criteria": report.to_dict(),
        "glassey": _glassey_section(field, params, report),
        "status": result.status,
        "detection_time": result.detection_time,
    }
    atomic_write_text(out_dir / "criterion_report.json", json.dumps(report_doc, indent=2, sort_keys=True) + "\n")
    files.append("criterion_report.json")

    if gs_profile is not None and 0.0 < params.s_c < 1.0:
        pers = criteria.monitor_persistence(result.records, gs_profile, params).to_dict()
    else:
        pers = {"applicable": False,
                "note": "persistence monitoring needs intercritical parameters and ground-state data"}
    atomic_write_text(out_dir / "persistence_report.json", json.dumps(pers, indent=2, sort_keys=True) + "\n")
    files.append("persistence_report.json")

    stats = {
        "status": result.status,
        "steps": result.steps,
        "wall_time_s": result.wall_time,
        "snapshots": len(result.records),
        "detection_time": result.detection_time,
        "seed": config.seed,
    }
    atomic_write_text(out_dir / "run_stats.json", json.dumps(stats, indent=2, sort_keys=True) + "\n")
    files.append("run_stats.json")

    manifest = {
        "schema_version": 1,
        "files": [
            {"name": name, "sha256": sha256_of(out_dir / name),
             "bytes": (out_dir / name).stat().st_size}
            for name in files
        ],
    }
    atomic_write_text(out_dir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    return RunOutput(
        directory=out_dir,
        status=result.status,
        exit_code=STATUS_EXIT_CODES[result.status],
        files=files + ["manifest.json"],
        records=result.records,
        detection_time=result.detection_time,
    )


def _glassey_section(field: Field, params: EquationParams, report) -> dict:
    quad = cutoffs.build_pure_quadratic(field.grid)
    v0 = virial.eval_I(field, quad)
    v1 = virial.eval_Iprime(field, quad)
    section = {"variance0": v0, "variance_rate0": v1, "energy": report.energy}
    section["bound_time"] = (criteria.glassey_bound(field, params)
                             if report.energy < 0.0 else None)
    return section


def check_manifest(directory) -> list[str]:
    """Re-validate the checksum manifest; returns a list of mismatches."""
    directory = Path(directory)
    manifest = json.loads((directory / "manifest.json").read_text())
    problems = []
    for entry in manifest["files"]:
        path = directory / entry["name"]
        if not path.exists():
            problems.append(f"{entry['name']}: missing")
        elif sha256_of(path) != entry["sha256"]:
            problems.append(f"{entry['name']}: checksum mismatch")
    return problems
