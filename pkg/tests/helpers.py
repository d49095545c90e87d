"""Shared field builders for the test suite."""

import numpy as np

from riesz_modlab.grid import GridSpec, ScalarField, VectorField


def gaussian_field(grid: GridSpec, sigma: float, mass: float = 1.0,
                   center=None) -> ScalarField:
    """Isotropic Gaussian bump, normalized on the grid to the requested mass."""
    if center is None:
        center = (grid.L / 2,) * grid.d
    mesh = grid.meshgrid()
    r2 = sum((x - c) ** 2 for x, c in zip(mesh, center))
    vals = np.exp(-r2 / (2.0 * sigma**2))
    vals *= mass / (vals.sum() * grid.cell_volume)
    return ScalarField(grid, vals)


def band_limited(grid: GridSpec, rng, kmax: int = 3, amplitude: float = 1.0,
                 mean: float = 0.0) -> ScalarField:
    """Random real field with Fourier support in |m_a| <= kmax.

    Coefficients depend only on rng draws, not on n, so refining the grid
    evaluates the same continuum function.
    """
    mesh = grid.meshgrid()
    vals = np.zeros(grid.shape)
    modes = [m for m in np.ndindex(*(2 * kmax + 1,) * grid.d)]
    for m in modes:
        mm = tuple(mi - kmax for mi in m)
        if all(mi == 0 for mi in mm):
            continue
        amp = rng.normal() * amplitude / (1.0 + sum(mi**2 for mi in mm))
        phase = rng.uniform(0, 2 * np.pi)
        arg = sum(2 * np.pi * mi * x / grid.L for mi, x in zip(mm, mesh))
        vals += amp * np.cos(arg + phase)
    return ScalarField(grid, vals + mean)


def band_limited_velocity(grid: GridSpec, rng, kmax: int = 2,
                          amplitude: float = 1.0) -> VectorField:
    comps = [band_limited(grid, rng, kmax, amplitude).values for _ in range(grid.d)]
    return VectorField(grid, comps)


def positive_pair(grid: GridSpec, rng, kmax: int = 3, contrast: float = 0.3):
    """Two positive fields of equal mass built from band-limited perturbations."""
    base = 1.0
    rho = band_limited(grid, rng, kmax, contrast, mean=base)
    rhobar = band_limited(grid, rng, kmax, contrast, mean=base)
    lo = min(rho.values.min(), rhobar.values.min())
    if lo <= 0.05:
        shift = 0.05 - lo
        rho = ScalarField(grid, rho.values + shift)
        rhobar = ScalarField(grid, rhobar.values + shift)
    target = rho.mass
    rhobar = ScalarField(grid, rhobar.values * (target / rhobar.mass))
    return rho, rhobar
