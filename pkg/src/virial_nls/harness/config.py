"""Scenario configuration: versioned JSON schema, strict validation."""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from ..errors import ConfigError

SCHEMA_VERSION = 1


def _take(d: dict, where: str, key: str, required: bool = True, default=None):
    if key not in d:
        if required:
            raise ConfigError(f"{where}.{key}", "missing required key")
        return default
    return d.pop(key)


def _no_leftovers(d: dict, where: str):
    if d:
        raise ConfigError(where, f"unknown keys: {sorted(d)}")


@dataclass(frozen=True)
class EquationConfig:
    dimension: int
    power: int
    geometry: str


@dataclass(frozen=True)
class GridConfig:
    points: int
    half_width: float


@dataclass(frozen=True)
class InitialDataConfig:
    family: str
    parameters: dict


@dataclass(frozen=True)
class StepperTimeConfig:
    dt0: float
    c_cfl: float
    dt_min: float
    snapshot_stride: int
    t_end: float
    boundary_mass_threshold: float = 1e-8


@dataclass(frozen=True)
class ProbeConfig:
    virial_radii: tuple[float, ...] = ()
    include_pure_quadratic: bool = False
    exterior_radii: tuple[float, ...] = ()
    lq: tuple[float, ...] = ()
    hs: tuple[float, ...] | str = "auto"


@dataclass(frozen=True)
class ScenarioConfig:
    equation: EquationConfig
    grid: GridConfig
    initial_data: InitialDataConfig
    stepper: StepperTimeConfig
    probes: ProbeConfig
    output_directory: str
    seed: int
    base_dir: Path = dc_field(default=Path("."), compare=False)

    def resolve_output(self) -> Path:
        out = Path(self.output_directory)
        return out if out.is_absolute() else self.base_dir / out


_FAMILY_PARAMS = {
    "gaussian": ({"amplitude"}, {"width", "center"}),
    "modulated_gaussian": ({"amplitude", "width", "modes"}, set()),
    "soliton": (set(), {"scale", "center"}),
    "scaled_ground_state": ({"factor"}, {"initial_amplitude"}),
    "from_file": ({"path"}, set()),
}


def parse_config(data: dict, base_dir: Path | str = ".") -> ScenarioConfig:
    """Validate a config dictionary; unknown keys are rejected at every level."""
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    data = dict(data)
    version = _take(data, "<root>", "schema_version")
    if version != SCHEMA_VERSION:
        raise ConfigError("schema_version", f"expected {SCHEMA_VERSION}, got {version!r}")

    eq_raw = dict(_take(data, "<root>", "equation"))
    eq = EquationConfig(
        dimension=int(_take(eq_raw, "equation", "dimension")),
        power=int(_take(eq_raw, "equation", "power")),
        geometry=str(_take(eq_raw, "equation", "geometry", required=False, default="cartesian")),
    )
    _no_leftovers(eq_raw, "equation")
    if eq.power % 2 == 0 or eq.power < 3:
        raise ConfigError("equation.power", f"must be an odd integer >= 3, got {eq.power}")

    grid_raw = dict(_take(data, "<root>", "grid"))
    grid = GridConfig(
        points=int(_take(grid_raw, "grid", "points")),
        half_width=float(_take(grid_raw, "grid", "half_width")),
    )
    _no_leftovers(grid_raw, "grid")

    init_raw = dict(_take(data, "<root>", "initial_data"))
    family = str(_take(init_raw, "initial_data", "family"))
    if family not in _FAMILY_PARAMS:
        raise ConfigError("initial_data.family",
                          f"unknown family '{family}'; choose from {sorted(_FAMILY_PARAMS)}")
    required, optional = _FAMILY_PARAMS[family]
    missing = required - set(init_raw)
    if missing:
        raise ConfigError("initial_data", f"family '{family}' needs keys {sorted(missing)}")
    extra = set(init_raw) - required - optional
    if extra:
        raise ConfigError("initial_data", f"unknown keys for family '{family}': {sorted(extra)}")
    init = InitialDataConfig(family=family, parameters=dict(init_raw))

    st_raw = dict(_take(data, "<root>", "stepper"))
    stepper = StepperTimeConfig(
        dt0=float(_take(st_raw, "stepper", "dt0")),
        c_cfl=float(_take(st_raw, "stepper", "c_cfl")),
        dt_min=float(_take(st_raw, "stepper", "dt_min")),
        snapshot_stride=int(_take(st_raw, "stepper", "snapshot_stride")),
        t_end=float(_take(st_raw, "stepper", "t_end")),
        boundary_mass_threshold=float(
            _take(st_raw, "stepper", "boundary_mass_threshold", required=False, default=1e-8)
        ),
    )
    _no_leftovers(st_raw, "stepper")
    if not (0 < stepper.dt_min < stepper.dt0):
        raise ConfigError("stepper", f"need 0 < dt_min < dt0, got {stepper.dt_min}, {stepper.dt0}")

    pr_raw = dict(_take(data, "<root>", "probes", required=False, default={}))
    hs_val = _take(pr_raw, "probes", "hs", required=False, default="auto")
    probes = ProbeConfig(
        virial_radii=tuple(float(r) for r in _take(pr_raw, "probes", "virial_radii", required=False, default=())),
        include_pure_quadratic=bool(_take(pr_raw, "probes", "include_pure_quadratic", required=False, default=False)),
        exterior_radii=tuple(float(r) for r in _take(pr_raw, "probes", "exterior_radii", required=False, default=())),
        lq=tuple(float(q) for q in _take(pr_raw, "probes", "lq", required=False, default=())),
        hs="auto" if hs_val == "auto" else tuple(float(s) for s in hs_val),
    )
    _no_leftovers(pr_raw, "probes")
    for radius in probes.virial_radii + probes.exterior_radii:
        if not 2.0 * radius < grid.half_width:
            raise ConfigError("probes", f"radius {radius} violates 2R < L = {grid.half_width}")

    out_raw = dict(_take(data, "<root>", "output"))
    out_dir = str(_take(out_raw, "output", "directory"))
    _no_leftovers(out_raw, "output")

    seed = int(_take(data, "<root>", "seed", required=False, default=0))
    _no_leftovers(data, "<root>")

    return ScenarioConfig(
        equation=eq, grid=grid, initial_data=init, stepper=stepper,
        probes=probes, output_directory=out_dir, seed=seed, base_dir=Path(base_dir),
    )


def load_config(path) -> ScenarioConfig:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError("<file>", f"{path}: invalid JSON ({exc})") from exc
    return parse_config(data, base_dir=path.parent)
