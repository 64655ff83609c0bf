"""Shared test utilities: seeded smooth random fields and compact bumps."""

import numpy as np

from virial_nls.grid import Field, GridSpec, RADIAL3D


def random_smooth_field(grid: GridSpec, rng, scale: float = 1.0, decay: float = 2.0) -> Field:
    """Band-limited random field with spectrally decaying coefficients."""
    if grid.geometry == RADIAL3D:
        # synthesize from sine modes of v = r*u so the field is radially admissible
        m = grid.n // 2
        r = grid.axis()
        k = np.pi / grid.half_width * np.arange(1, m)
        amps = (rng.standard_normal(m - 1) + 1j * rng.standard_normal(m - 1)) * np.exp(-decay * k)
        v = (amps[None, :] * np.sin(np.outer(r, k))).sum(axis=1)
        u = np.empty(m, dtype=np.complex128)
        u[1:] = v[1:] / r[1:]
        u[0] = np.sum(amps * k)
        peak = np.abs(u).max()
        return Field(u * (scale / peak if peak > 0 else 1.0), grid)
    coeffs = rng.standard_normal(grid.shape) + 1j * rng.standard_normal(grid.shape)
    coeffs *= np.exp(-decay * np.sqrt(grid.wavenumbers.k2))
    values = np.fft.ifftn(coeffs)
    peak = np.abs(values).max()
    if peak > 0:
        values = values * (scale / peak)
    return Field(values, grid)


def bump(grid: GridSpec, amplitude: float, width: float, center: float = 0.0) -> Field:
    """Smooth compactly supported bump: amplitude at the center, zero for
    |x - center| >= width."""
    if grid.geometry == RADIAL3D:
        d = np.abs(grid.axis() - center)
    else:
        d = np.sqrt(sum((x - center) ** 2 for x in grid.coords()))
        d = np.broadcast_to(d, grid.shape)
    s2 = (d / width) ** 2
    vals = np.zeros(grid.shape)
    inside = s2 < 1.0
    vals[inside] = amplitude * np.exp(1.0 - 1.0 / (1.0 - s2[inside]))
    return Field(vals.astype(np.complex128), grid)


def relative_l2_error(a: Field, b_values: np.ndarray) -> float:
    num = np.sqrt(float(a.grid.integrate(np.abs(a.values - b_values) ** 2)))
    den = np.sqrt(float(a.grid.integrate(np.abs(b_values) ** 2)))
    return num / den
