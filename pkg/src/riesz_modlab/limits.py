"""Reference solvers for the limit systems: the aggregation equation and the
damped (isothermal or pressureless) Euler system with the nonlocal force.

Both are 1-d conservative finite-volume schemes: first-order upwind /
local Lax-Friedrichs fluxes by default, with a second-order MUSCL
(minmod-limited) reconstruction behind an optional flag.  Linear damping is
integrated exactly; the nonlocal force enters as a source evaluated
spectrally from the current density.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .convolve import filtered_riesz_force, riesz_gradient
from .grid import GridSpec, ScalarField, VectorField
from .kernels import KernelParams

VACUUM_FLOOR = 1e-12


def _force_gradient(rho: ScalarField, params: KernelParams,
                    force_filter: bool) -> np.ndarray:
    if force_filter:
        return filtered_riesz_force(rho, params)
    return riesz_gradient(rho, params).components[0]


@dataclass
class MacroState:
    """Density and velocity of a limit system, with pressure flag c_P."""

    rho: ScalarField
    u: VectorField
    c_p: float = 0.0
    gamma: float = 1.0

    def __post_init__(self):
        if self.rho.grid != self.u.grid:
            raise ValueError("density and velocity must share a grid")
        if self.c_p not in (0.0, 1.0):
            raise ValueError("pressure coefficient must be 0 or 1")
        if self.gamma <= 0:
            raise ValueError("damping must be positive")
        if np.min(self.rho.values) < -1e-14:
            raise ValueError("density must be nonnegative")

    @property
    def grid(self) -> GridSpec:
        return self.rho.grid

    def momentum(self) -> np.ndarray:
        return self.rho.values * self.u.components[0]


def aggregation_velocity(rho: ScalarField, params: KernelParams,
                         gamma: float = 1.0,
                         force_filter: bool = False) -> VectorField:
    """u = -(1/gamma) grad K * rho."""
    if force_filter:
        return VectorField(rho.grid,
                           [-_force_gradient(rho, params, True) / gamma])
    grad = riesz_gradient(rho, params)
    return VectorField(rho.grid, [-c / gamma for c in grad.components])


def _minmod(a, b):
    out = np.where((a > 0) & (b > 0), np.minimum(a, b), 0.0)
    return np.where((a < 0) & (b < 0), np.maximum(a, b), out)


def _upwind_flux(rho, u_face, muscl, h):
    """Donor-cell flux at interfaces i+1/2, optionally MUSCL-reconstructed."""
    if muscl:
        slope = _minmod(rho - np.roll(rho, 1), np.roll(rho, -1) - rho)
        left = rho + 0.5 * slope        # cell i state at face i+1/2
        right = np.roll(rho - 0.5 * slope, -1)
    else:
        left = rho
        right = np.roll(rho, -1)
    return np.where(u_face > 0, u_face * left, u_face * right)


def step_aggregation(rho: ScalarField, dt: float, params: KernelParams,
                     gamma: float = 1.0, muscl: bool = False,
                     force_filter: bool = False) -> ScalarField:
    """Conservative finite-volume update of d_t rho + d_x(rho u) = 0 with
    u = -(1/gamma) grad K * rho."""
    g = rho.grid
    if g.d != 1:
        raise ValueError("the aggregation stepper is 1-d")
    u = aggregation_velocity(rho, params, gamma, force_filter).components[0]
    cfl = np.max(np.abs(u)) * dt / g.h
    if cfl > 1.0:
        raise ValueError(f"CFL violation: |u| dt / h = {cfl:.3f} > 1")
    u_face = 0.5 * (u + np.roll(u, -1))
    flux = _upwind_flux(rho.values, u_face, muscl, g.h)
    new = rho.values - dt / g.h * (flux - np.roll(flux, 1))
    return ScalarField(g, new)


def euler_flux(rho, m, c_p):
    u = m / np.maximum(rho, VACUUM_FLOOR)
    return m, m * u + c_p * rho


def step_euler_riesz(state: MacroState, dt: float,
                     params: KernelParams, muscl: bool = False,
                     force_filter: bool = False) -> MacroState:
    """Local Lax-Friedrichs step for the damped Euler system with the
    nonlocal force; the linear damping factor is integrated exactly."""
    g = state.grid
    if g.d != 1:
        raise ValueError("the Euler stepper is 1-d")
    rho = state.rho.values
    m = state.momentum()
    u = m / np.maximum(rho, VACUUM_FLOOR)
    speed = np.abs(u) + np.sqrt(state.c_p)
    cfl = np.max(speed) * dt / g.h
    if cfl > 1.0:
        raise ValueError(f"CFL violation: (|u|+c) dt / h = {cfl:.3f} > 1")

    def reconstruct(q):
        if not muscl:
            return q, np.roll(q, -1)
        slope = _minmod(q - np.roll(q, 1), np.roll(q, -1) - q)
        return q + 0.5 * slope, np.roll(q - 0.5 * slope, -1)

    rho_l, rho_r = reconstruct(rho)
    m_l, m_r = reconstruct(m)
    a_face = np.maximum(speed, np.roll(speed, -1))
    f1_l, f2_l = euler_flux(rho_l, m_l, state.c_p)
    f1_r, f2_r = euler_flux(rho_r, m_r, state.c_p)
    flux1 = 0.5 * (f1_l + f1_r) - 0.5 * a_face * (rho_r - rho_l)
    flux2 = 0.5 * (f2_l + f2_r) - 0.5 * a_face * (m_r - m_l)

    rho_new = rho - dt / g.h * (flux1 - np.roll(flux1, 1))
    m_new = m - dt / g.h * (flux2 - np.roll(flux2, 1))

    # sources: exact damping, explicit nonlocal force (frozen over the step)
    rho_field = ScalarField(g, np.maximum(rho_new, 0.0))
    force = -rho_field.values * _force_gradient(rho_field, params, force_filter)
    decay = np.exp(-state.gamma * dt)
    m_new = m_new * decay + force * (1.0 - decay) / state.gamma

    u_new = m_new / np.maximum(rho_field.values, VACUUM_FLOOR)
    return MacroState(rho_field, VectorField(g, [u_new]), state.c_p, state.gamma)


def error_field_e(state_before: MacroState, state_after: MacroState,
                  dt: float) -> VectorField:
    """Discrete material derivative of the velocity between two frames:
    (u_after - u_before)/dt + u d_x u (spectral gradient, after-state)."""
    g = state_after.grid
    u0 = state_before.u.components[0]
    u1 = state_after.u.components[0]
    k = g.wavevectors()[0]
    du = np.fft.ifft(1j * k * np.fft.fft(u1)).real
    return VectorField(g, [(u1 - u0) / dt + u1 * du])
