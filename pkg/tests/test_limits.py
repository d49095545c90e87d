"""Aggregation and Euler reference solvers."""

import numpy as np
import pytest

from riesz_modlab.convolve import interaction_energy, riesz_convolve
from riesz_modlab.grid import GridSpec, ScalarField, VectorField
from riesz_modlab.kernels import KernelParams
from riesz_modlab.limits import (
    MacroState,
    aggregation_velocity,
    error_field_e,
    step_aggregation,
    step_euler_riesz,
)

from helpers import gaussian_field

KP = KernelParams(0.5, 1)


def test_aggregation_velocity_constant_density():
    grid = GridSpec(1, 64, 4.0)
    rho = ScalarField(grid, np.full(64, 0.3))
    u = aggregation_velocity(rho, KP)
    assert np.max(np.abs(u.components[0])) <= 1e-12


def test_aggregation_velocity_antisymmetric():
    grid = GridSpec(1, 128, 8.0)
    rho = gaussian_field(grid, 0.3, mass=0.1)
    u = aggregation_velocity(rho, KP).components[0]
    assert np.max(np.abs(u + u[::-1])) <= 1e-10 * np.max(np.abs(u))


def test_aggregation_velocity_fd_oracle():
    grid = GridSpec(1, 256, 8.0)
    rho = gaussian_field(grid, 0.3, mass=0.1)
    u = aggregation_velocity(rho, KP, gamma=2.0).components[0]
    conv = riesz_convolve(rho, KP).values
    fd = -(np.roll(conv, -1) - np.roll(conv, 1)) / (2 * grid.h) / 2.0
    assert np.max(np.abs(u - fd)) <= 1e-2 * np.max(np.abs(u))


def test_aggregation_constant_is_stationary():
    grid = GridSpec(1, 64, 4.0)
    rho = ScalarField(grid, np.full(64, 0.3))
    out = step_aggregation(rho, 1e-3, KP)
    assert out.values == pytest.approx(rho.values, rel=1e-13)


@pytest.mark.parametrize("muscl", [False, True])
def test_aggregation_mass_conservation(muscl):
    grid = GridSpec(1, 128, 8.0)
    rho = gaussian_field(grid, 0.3, mass=0.1)
    mass0 = rho.mass
    for _ in range(200):
        rho = step_aggregation(rho, 2e-3, KP, muscl=muscl)
    assert rho.mass == pytest.approx(mass0, rel=1e-12)
    assert np.min(rho.values) >= -1e-14


def test_aggregation_energy_decays():
    # repulsive gradient flow: interaction energy decreases along the flow
    def energies(n):
        grid = GridSpec(1, n, 8.0)
        rho = gaussian_field(grid, 0.3, mass=0.1)
        vals = [interaction_energy(rho, KP)]
        for _ in range(150):
            rho = step_aggregation(rho, 2e-3, KP, muscl=True)
            vals.append(interaction_energy(rho, KP))
        return np.array(vals)

    e = energies(128)
    assert np.all(np.diff(e) <= 1e-12)
    e2 = energies(256)
    drop1 = e[0] - e[-1]
    drop2 = e2[0] - e2[-1]
    assert drop2 == pytest.approx(drop1, rel=0.01)


def test_euler_uniform_damping_exact():
    grid = GridSpec(1, 64, 4.0)
    rho = ScalarField(grid, np.full(64, 0.5))
    u0 = 0.37
    state = MacroState(rho, VectorField(grid, [np.full(64, u0)]), 0.0, gamma=1.3)
    dt = 1e-2
    for k in range(50):
        state = step_euler_riesz(state, dt, KP)
    expected = u0 * np.exp(-1.3 * 50 * dt)
    assert state.u.components[0] == pytest.approx(
        np.full(64, expected), rel=1e-12)
    assert state.rho.values == pytest.approx(rho.values, rel=1e-12)


def test_euler_symmetry_preservation():
    grid = GridSpec(1, 128, 8.0)
    rho = gaussian_field(grid, 0.3, mass=0.1)
    state = MacroState(rho, VectorField(grid, [np.zeros(128)]), 1.0)
    for _ in range(40):
        state = step_euler_riesz(state, 2e-3, KP)
    r = state.rho.values
    u = state.u.components[0]
    assert np.max(np.abs(r - r[::-1])) <= 1e-11 * np.max(r)
    assert np.max(np.abs(u + u[::-1])) <= 1e-11 * max(np.max(np.abs(u)), 1e-30)


def test_euler_mass_conservation():
    grid = GridSpec(1, 128, 8.0)
    rho = gaussian_field(grid, 0.3, mass=0.1)
    rho = ScalarField(grid, rho.values + 1e-3 * np.max(rho.values))
    state = MacroState(rho, VectorField(grid, [np.zeros(128)]), 1.0)
    mass0 = state.rho.mass
    for _ in range(100):
        state = step_euler_riesz(state, 2e-3, KP)
    assert state.rho.mass == pytest.approx(mass0, rel=1e-12)


def test_euler_self_convergence_order():
    # fixed T, grids n, 2n, 4n: observed order of a first-order scheme
    T = 0.2

    def run(n):
        grid = GridSpec(1, n, 8.0)
        rho = gaussian_field(grid, 0.4, mass=0.1)
        rho = ScalarField(grid, rho.values + 1e-3 * np.max(rho.values))
        state = MacroState(rho, VectorField(grid, [np.zeros(n)]), 1.0)
        dt = T / (8 * n // 128)  # scales with the grid
        steps = int(round(T / dt))
        for _ in range(steps):
            state = step_euler_riesz(state, dt, KP)
        return state.rho.values

    def restrict(vals, factor):
        return vals.reshape(-1, factor).mean(axis=1)

    r1, r2, r4 = run(128), run(256), run(512)
    e12 = np.max(np.abs(r1 - restrict(r2, 2)))
    e24 = np.max(np.abs(restrict(r2, 2) - restrict(r4, 4)))
    order = np.log2(e12 / e24)
    assert order >= 0.8


def test_error_field_uniform_damping():
    grid = GridSpec(1, 64, 4.0)
    rho = ScalarField(grid, np.full(64, 0.5))
    u0 = 0.5
    gamma = 1.0
    dt = 1e-4
    s0 = MacroState(rho, VectorField(grid, [np.full(64, u0)]), 0.0, gamma)
    s1 = step_euler_riesz(s0, dt, KP)
    e = error_field_e(s0, s1, dt).components[0]
    # uniform state: e = du/dt = -gamma u (no convection term)
    expected = -gamma * u0
    assert e == pytest.approx(np.full(64, expected), rel=2e-4)


def test_error_field_stationary_zero():
    grid = GridSpec(1, 64, 4.0)
    rho = ScalarField(grid, np.full(64, 0.5))
    state = MacroState(rho, VectorField(grid, [np.zeros(64)]), 0.0)
    e = error_field_e(state, state, 1e-3).components[0]
    assert np.max(np.abs(e)) == 0.0
