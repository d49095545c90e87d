"""Convolution path against the direct-sum oracle and continuum quadrature."""

import numpy as np
import pytest
from scipy import integrate

from riesz_modlab.convolve import (
    SupportViolationWarning,
    direct_convolution_oracle,
    riesz_convolve,
    riesz_gradient,
)
from riesz_modlab.grid import GridSpec, ScalarField
from riesz_modlab.kernels import KernelParams

from helpers import gaussian_field


def test_zero_field_maps_to_zero():
    grid = GridSpec(1, 64, 4.0)
    params = KernelParams(0.5, 1)
    rho = ScalarField(grid, np.zeros(grid.shape))
    assert np.all(riesz_convolve(rho, params).values == 0)
    assert np.all(direct_convolution_oracle(rho, params).values == 0)


def test_symmetric_input_gives_symmetric_output():
    grid = GridSpec(1, 128, 4.0)
    params = KernelParams(0.5, 1)
    rho = gaussian_field(grid, 0.12)
    conv = riesz_convolve(rho, params).values
    assert np.max(np.abs(conv - conv[::-1])) <= 1e-12 * np.max(np.abs(conv))


@pytest.mark.parametrize("alpha", [0.3, 0.5, 0.8])
def test_oracle_equivalence_1d(alpha):
    grid = GridSpec(1, 128, 4.0)
    params = KernelParams(alpha, 1)
    rho = gaussian_field(grid, 0.12)
    a = riesz_convolve(rho, params).values
    b = direct_convolution_oracle(rho, params).values
    assert np.max(np.abs(a - b)) / np.max(np.abs(a)) <= 1e-6


@pytest.mark.parametrize("alpha", [1.0, 2.5])
def test_oracle_equivalence_3d(alpha):
    grid = GridSpec(3, 16, 4.0)
    params = KernelParams(alpha, 3)
    rho = gaussian_field(grid, 0.3)
    a = riesz_convolve(rho, params).values
    b = direct_convolution_oracle(rho, params).values
    assert np.max(np.abs(a - b)) / np.max(np.abs(a)) <= 1e-3


def test_value_at_center_against_continuum():
    # independent quadrature of int |x0 - y|^(-alpha) rho(y) dy, plus
    # first-order shrink of the error under grid refinement
    L, sigma, alpha = 4.0, 0.1, 0.5
    params = KernelParams(alpha, 1)

    def gauss(x):
        return np.exp(-((x - L / 2) ** 2) / (2 * sigma**2)) / np.sqrt(2 * np.pi * sigma**2)

    def center_error(n):
        grid = GridSpec(1, n, L)
        x = grid.axis_coords()
        rho = ScalarField(grid, gauss(x))
        conv = riesz_convolve(rho, params)
        i0 = int(np.argmin(np.abs(x - L / 2)))
        xc = x[i0]
        v1, _ = integrate.quad(lambda y: abs(xc - y) ** (-alpha) * gauss(y),
                               0, xc, points=[xc], limit=200)
        v2, _ = integrate.quad(lambda y: abs(xc - y) ** (-alpha) * gauss(y),
                               xc, L, points=[xc], limit=200)
        return abs(conv.values[i0] - (v1 + v2)) / (v1 + v2)

    e128, e256 = center_error(128), center_error(256)
    assert e128 <= 2e-3
    assert e256 <= 0.6 * e128


def test_support_violation_warns():
    grid = GridSpec(1, 64, 2.0)
    params = KernelParams(0.5, 1)
    rho = gaussian_field(grid, 0.4)  # far too wide for the half box
    with pytest.warns(SupportViolationWarning):
        riesz_convolve(rho, params)


def test_constant_offset_does_not_warn():
    grid = GridSpec(1, 128, 8.0)
    params = KernelParams(0.5, 1)
    bump = gaussian_field(grid, 0.3)
    rho = ScalarField(grid, bump.values + 0.25)
    import warnings as _w
    with _w.catch_warnings():
        _w.simplefilter("error")
        riesz_convolve(rho, params)


def test_gradient_of_constant_vanishes():
    grid = GridSpec(1, 64, 2.0)
    params = KernelParams(0.5, 1)
    rho = ScalarField(grid, np.full(grid.shape, 0.7))
    grad = riesz_gradient(rho, params)
    assert np.max(np.abs(grad.components[0])) <= 1e-12


def test_gradient_antisymmetric_for_symmetric_input():
    grid = GridSpec(1, 128, 4.0)
    params = KernelParams(0.5, 1)
    rho = gaussian_field(grid, 0.12)
    g = riesz_gradient(rho, params).components[0]
    assert np.max(np.abs(g + g[::-1])) <= 1e-10 * np.max(np.abs(g))


def test_gradient_matches_finite_differences():
    params = KernelParams(0.5, 1)

    def fd_error(n):
        grid = GridSpec(1, n, 4.0)
        rho = gaussian_field(grid, 0.15)
        conv = riesz_convolve(rho, params).values
        fd = (np.roll(conv, -1) - np.roll(conv, 1)) / (2 * grid.h)
        g = riesz_gradient(rho, params).components[0]
        return np.max(np.abs(fd - g)) / np.max(np.abs(g))

    e256, e512 = fd_error(256), fd_error(512)
    assert e256 <= 5e-3
    assert e512 <= 0.3 * e256  # roughly O(h^2)


def test_direct_oracle_cost_guard():
    grid = GridSpec(3, 128, 4.0)
    params = KernelParams(1.0, 3)
    rho = gaussian_field(grid, 0.3)
    with pytest.raises(ValueError, match="direct oracle"):
        direct_convolution_oracle(rho, params)


def test_unit_cell_mass_returns_kernel_table():
    # convolution with a one-cell source reproduces the table itself
    grid = GridSpec(1, 64, 4.0)
    params = KernelParams(0.5, 1)
    vals = np.zeros(grid.shape)
    vals[32] = 1.0 / grid.h  # unit mass in one cell
    rho = ScalarField(grid, vals)
    conv = direct_convolution_oracle(rho, params).values
    from riesz_modlab.kernels import kernel_table
    table = kernel_table(params, grid, padded=False)
    expected = np.array([table[(i - 32) % 64] for i in range(64)])
    assert np.max(np.abs(conv - expected)) <= 1e-12 * np.max(np.abs(expected))
