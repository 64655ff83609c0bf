"""Closed-form initial-data families generated directly on the grid."""

from __future__ import annotations

import numpy as np

from .errors import ConfigError
from .grid import CARTESIAN, RADIAL3D, Field, GridSpec
from .groundstate import GroundStateProfile
from .observables import EquationParams


def gaussian(grid: GridSpec, amplitude: float, width: float = 1.0,
             center=0.0) -> Field:
    """amplitude * exp(-|x - center|^2 / (2 width^2))."""
    if grid.geometry == RADIAL3D:
        if np.any(np.atleast_1d(center) != 0.0):
            raise ConfigError("initial_data.center", "radial grids support centered data only")
        r = grid.axis()
        vals = amplitude * np.exp(-(r**2) / (2.0 * width**2))
        return Field(vals.astype(np.complex128), grid)
    c = np.atleast_1d(np.asarray(center, dtype=float))
    if c.size == 1 and grid.dimension > 1:
        c = np.full(grid.dimension, c[0])
    sq = sum((x - ci) ** 2 for x, ci in zip(grid.coords(), c))
    vals = amplitude * np.exp(-sq / (2.0 * width**2))
    return Field(np.broadcast_to(vals, grid.shape).astype(np.complex128).copy(), grid)


def modulated_gaussian(grid: GridSpec, amplitude: float, width: float,
                       modes) -> Field:
    """Gaussian times exp(i xi.x) with lattice xi = modes * pi/L.

    Integer modes keep the modulation periodic, so the momentum is exactly
    M * xi up to spectral round-off and -P/M lands back on the lattice.
    """
    if grid.geometry != CARTESIAN:
        raise ConfigError("initial_data.family", "modulated_gaussian requires a cartesian grid")
    modes = np.atleast_1d(np.asarray(modes))
    if modes.size != grid.dimension:
        raise ConfigError("initial_data.modes", f"need {grid.dimension} integer modes")
    if np.any(modes != np.rint(modes)):
        raise ConfigError("initial_data.modes", "modes must be integers")
    base = gaussian(grid, amplitude, width)
    xi = np.pi / grid.half_width * modes.astype(float)
    phase = sum(x * xi_i for x, xi_i in zip(grid.coords(), xi))
    return Field(np.exp(1j * phase) * base.values, grid)


def soliton(grid: GridSpec, scale: float = 1.0, center: float = 0.0) -> Field:
    """1-D cubic soliton sqrt(2) c sech(c (x - x0)); evolves as exp(i c^2 t)."""
    if grid.geometry != CARTESIAN or grid.dimension != 1:
        raise ConfigError("initial_data.family", "soliton requires a 1-D cartesian grid")
    x = grid.axis()
    vals = np.sqrt(2.0) * scale / np.cosh(scale * (x - center))
    return Field(vals.astype(np.complex128), grid)


def scaled_ground_state(profile: GroundStateProfile, factor: float) -> Field:
    """a * Q on the profile's own grid."""
    return Field(factor * profile.values.astype(np.complex128), profile.grid)


def from_file(grid: GridSpec, path) -> Field:
    """Two-column CSV (re, im), one row per sample in grid order."""
    data = np.loadtxt(path, delimiter=",", dtype=float)
    if data.ndim != 2 or data.shape[1] != 2:
        raise ConfigError("initial_data.path", f"{path}: expected two columns (re, im)")
    if data.shape[0] != grid.num_samples:
        raise ConfigError(
            "initial_data.path",
            f"{path}: {data.shape[0]} rows, grid needs {grid.num_samples}",
        )
    vals = (data[:, 0] + 1j * data[:, 1]).reshape(grid.shape)
    return Field(vals, grid)


def write_field_csv(field: Field, path) -> None:
    """Inverse of :func:`from_file`."""
    flat = field.values.reshape(-1)
    lines = [f"{v.real:.17g},{v.imag:.17g}" for v in flat]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


FAMILIES = ("gaussian", "modulated_gaussian", "soliton", "scaled_ground_state", "from_file")
