"""Interaction and modulated interaction energy: oracles and invariants."""

import numpy as np
import pytest

from riesz_modlab.convolve import (
    MassMismatchWarning,
    direct_convolution_oracle,
    interaction_energy,
    modulated_interaction_energy,
)
from riesz_modlab.grid import GridSpec, ScalarField
from riesz_modlab.kernels import KernelParams, fourier_constant

from helpers import band_limited, gaussian_field


def test_interaction_energy_zero_field():
    grid = GridSpec(1, 64, 4.0)
    params = KernelParams(0.5, 1)
    assert interaction_energy(ScalarField(grid, np.zeros(grid.shape)), params) == 0.0


def test_interaction_energy_quadratic_scaling():
    grid = GridSpec(1, 128, 4.0)
    params = KernelParams(0.5, 1)
    rho = gaussian_field(grid, 0.12)
    e1 = interaction_energy(rho, params)
    e3 = interaction_energy(3.0 * rho, params)
    assert e3 == pytest.approx(9.0 * e1, rel=1e-12)


def test_interaction_energy_against_direct_sum():
    grid = GridSpec(1, 128, 4.0)
    params = KernelParams(0.5, 1)
    rho = gaussian_field(grid, 0.12)
    direct = direct_convolution_oracle(rho, params)
    oracle = 0.5 * float(np.sum(rho.values * direct.values)) * grid.h
    assert interaction_energy(rho, params) == pytest.approx(oracle, rel=1e-6)


def test_modulated_energy_identical_states():
    grid = GridSpec(1, 64, 4.0)
    params = KernelParams(0.5, 1)
    rho = gaussian_field(grid, 0.12)
    assert modulated_interaction_energy(rho, rho, params) == 0.0


def test_modulated_energy_single_mode_closed_form():
    # difference a*sin(2 pi x / L): energy (1/2) c (2 pi/L)^(alpha-1) a^2 L/2
    grid = GridSpec(1, 128, 4.0)
    a = 0.37
    for alpha in (0.3, 0.5, 0.8):
        params = KernelParams(alpha, 1)
        x = grid.axis_coords()
        base = gaussian_field(grid, 0.3, mass=2.0)
        pert = ScalarField(grid, base.values + a * np.sin(2 * np.pi * x / grid.L))
        expected = 0.5 * fourier_constant(1, alpha) \
            * (2 * np.pi / grid.L) ** (alpha - 1) * a**2 * grid.L / 2
        got = modulated_interaction_energy(pert, base, params)
        assert got == pytest.approx(expected, rel=1e-12)


def test_modulated_energy_single_mode_hurwitz_oracle():
    """O(N^2) double-sum oracle with the mean-free periodized kernel.

    The periodization of |z|^(-alpha) over the torus (zero mode removed) is
    L^(-alpha) [zeta_H(alpha, q) + zeta_H(alpha, 1-q)] up to an additive
    constant, by analytic continuation of the Hurwitz zeta.  This route never
    touches the gamma-function symbol constant, so it validates it.
    """
    mp = pytest.importorskip("mpmath")
    alpha = 0.5
    params = KernelParams(alpha, 1)
    a = 0.25

    def rel_error(n):
        grid = GridSpec(1, n, 4.0)
        x = grid.axis_coords()
        base = gaussian_field(grid, 0.3, mass=2.0)
        diff = a * np.sin(2 * np.pi * x / grid.L)
        pert = ScalarField(grid, base.values + diff)
        L, h = grid.L, grid.h

        def anti(q):
            # antiderivative of zeta(alpha, q) + zeta(alpha, 1 - q) in q
            return float((mp.zeta(alpha - 1, q) - mp.zeta(alpha - 1, 1 - q)) / (1 - alpha))

        kper = np.empty(n)
        kper[0] = (L ** (1 - alpha) / h) * 2 * anti(1.0 / (2 * n))
        for m in range(1, n):
            q = m / n
            kper[m] = (L ** (1 - alpha) / h) * (anti(q + 0.5 / n) - anti(q - 0.5 / n))
        idx = (np.arange(n)[:, None] - np.arange(n)[None, :]) % n
        oracle = 0.5 * h * h * float(diff @ kper[idx] @ diff)
        got = modulated_interaction_energy(pert, base, params)
        return abs(got - oracle) / oracle

    e64, e128 = rel_error(64), rel_error(128)
    assert e64 <= 2e-3
    assert e128 <= 0.5 * e64


def test_modulated_energy_positive_on_random_differences():
    rng = np.random.default_rng(11)
    grid = GridSpec(1, 64, 4.0)
    params = KernelParams(0.5, 1)
    base = gaussian_field(grid, 0.3, mass=2.0)
    for _ in range(200):
        diff = rng.normal(size=grid.shape)
        diff -= diff.mean()
        pert = ScalarField(grid, base.values + diff)
        e = modulated_interaction_energy(pert, base, params)
        assert e >= -1e-12 * max(np.abs(diff).max(), 1.0)


def test_modulated_energy_parallelogram():
    rng = np.random.default_rng(5)
    grid = GridSpec(1, 64, 4.0)
    params = KernelParams(0.5, 1)
    base = gaussian_field(grid, 0.3, mass=2.0)
    d1 = band_limited(grid, rng, kmax=5).values
    d2 = band_limited(grid, rng, kmax=5).values
    d1 -= d1.mean()
    d2 -= d2.mean()

    def energy(diff):
        return modulated_interaction_energy(
            ScalarField(grid, base.values + diff), base, params)

    lhs = energy(d1 + d2) + energy(d1 - d2)
    rhs = 2 * energy(d1) + 2 * energy(d2)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_modulated_energy_mass_mismatch_warns():
    grid = GridSpec(1, 64, 4.0)
    params = KernelParams(0.5, 1)
    rho = gaussian_field(grid, 0.3, mass=1.0)
    rhobar = gaussian_field(grid, 0.3, mass=1.5)
    with pytest.warns(MassMismatchWarning):
        modulated_interaction_energy(rho, rhobar, params)
