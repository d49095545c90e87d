"""Deterministic 1-d phase-space solvers.

Two stiff kinetic models on f(x, v):

* small-inertia:   eps df/dt + eps v df/dx = d/dv((gamma v + F) f),
                   F = grad K * rho recomputed from the moments;
* nonlinear Fokker-Planck relaxation (hydro regimes): transport and the
  non-stiff drift d/dv((gamma v + F) f) plus (1/eps) relaxation toward the
  local equilibrium (mono-kinetic for sigma = 0, unit-variance Maxwellian
  for sigma = 1/eps).

Time stepping is Strang splitting.  Stiff pieces use exact substep maps
(damping / Ornstein-Uhlenbeck), realized as conservative moment-exact
remaps, so dt is independent of eps and the discrete velocity moments obey
the continuum contraction laws to rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import erf

from ..convolve import filtered_riesz_force, riesz_gradient
from ..grid import GridSpec, ScalarField
from ..kernels import KernelParams
from . import backends

SMALL_INERTIA = "small-inertia"
HYDRO_SIGMA0 = "hydro-sigma0"
HYDRO_SIGMA_EPS = "hydro-sigma-eps"
REGIMES = (SMALL_INERTIA, HYDRO_SIGMA0, HYDRO_SIGMA_EPS)

ENTROPY_FLOOR = 1e-300


class BoundaryLossError(RuntimeError):
    """Velocity-boundary mass loss exceeded the certified threshold."""


@dataclass
class PhaseField:
    """f(x, v) on a periodic x-grid times a symmetric velocity box."""

    x_grid: GridSpec
    v_max: float
    values: np.ndarray  # shape (n_x, n_v)
    boundary_loss: float = 0.0

    def __post_init__(self):
        if self.x_grid.d != 1:
            raise ValueError("kinetic runs are 1-d in space")
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim != 2 or self.values.shape[0] != self.x_grid.n:
            raise ValueError("values must have shape (n_x, n_v)")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("phase-space values must be finite")

    @property
    def n_v(self) -> int:
        return self.values.shape[1]

    @property
    def dv(self) -> float:
        return 2.0 * self.v_max / self.n_v

    def v_centers(self) -> np.ndarray:
        return -self.v_max + (np.arange(self.n_v) + 0.5) * self.dv

    @property
    def mass(self) -> float:
        return float(self.values.sum()) * self.x_grid.h * self.dv


@dataclass(frozen=True)
class KineticConfig:
    """Stiffness parameter, damping, kernel, regime and step control."""

    eps: float
    kernel: KernelParams
    regime: str
    dt: float
    t_end: float
    gamma: float = 1.0
    cfl: float = 0.5
    v_max: float = 4.0
    force_filter: bool = True  # anti-alias the self-consistent force

    def __post_init__(self):
        if self.eps <= 0:
            raise ValueError("eps must be positive")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}; expected one of {REGIMES}")
        if self.kernel.d != 1:
            raise ValueError("kinetic solver requires a 1-d kernel")

    def check_cfl(self, x_grid: GridSpec):
        limit = self.cfl * x_grid.h / self.v_max
        if self.dt > limit * (1 + 1e-12):
            raise ValueError(f"dt={self.dt} violates CFL limit {limit}")


def moments(f: PhaseField):
    """Velocity moments by midpoint quadrature: density, momentum, second moment."""
    dv = f.dv
    v = f.v_centers()
    rho = f.values.sum(axis=1) * dv
    mom = f.values @ v * dv
    second = f.values @ (v * v) * dv
    return rho, mom, second


def density_field(f: PhaseField) -> ScalarField:
    rho, _, _ = moments(f)
    return ScalarField(f.x_grid, rho)


def interaction_force(rho: ScalarField, params: KernelParams) -> np.ndarray:
    """F = (grad K * rho) on the x-grid."""
    return riesz_gradient(rho, params).components[0]


def exact_damped_velocity_update(v, F, gamma: float, eps: float, dt: float):
    """Exact solution of eps dv/dt = -(gamma v + F) over dt with frozen F."""
    decay = math.exp(-gamma * dt / eps)
    return np.asarray(v) * decay - (np.asarray(F) / gamma) * (1.0 - decay)


def gaussian_blur_weights(var: float, dv: float) -> np.ndarray:
    """Short kernel with exact mass 1, mean 0 and second moment var.

    Cell integrals of a centered Gaussian, then a multiplicative quadratic
    correction pinning the 0th and 2nd discrete moments.  For variances far
    below a cell the 3-point moment stencil is returned directly.
    """
    if var <= 0.0:
        return np.array([1.0])
    s = math.sqrt(var)
    if s < 0.7 * dv:
        w_side = var / (2.0 * dv * dv)
        return np.array([w_side, 1.0 - 2.0 * w_side, w_side])
    half = int(math.ceil(6.0 * s / dv)) + 2
    k = np.arange(-half, half + 1)
    edges_hi = (k * dv + 0.5 * dv) / (s * math.sqrt(2.0))
    edges_lo = (k * dv - 0.5 * dv) / (s * math.sqrt(2.0))
    g = 0.5 * (erf(edges_hi) - erf(edges_lo))
    x2 = (k * dv) ** 2
    m0, m2, m4 = g.sum(), (g * x2).sum(), (g * x2 * x2).sum()
    det = m0 * m4 - m2 * m2
    lam0 = (m4 * (1.0 - m0) - m2 * (var - m2)) / det
    lam2 = (m0 * (var - m2) - m2 * (1.0 - m0)) / det
    return g * (1.0 + lam0 + lam2 * x2)


def _transport_half(f: PhaseField, dt_half: float) -> PhaseField:
    shifts = f.v_centers() * dt_half / f.x_grid.h
    new = backends.advect_x(f.values, shifts)
    return replace(f, values=new)


def _force_from(f: PhaseField, config: "KineticConfig") -> np.ndarray:
    rho = density_field(f)
    if config.force_filter:
        return filtered_riesz_force(rho, config.kernel)
    return interaction_force(rho, config.kernel)


def step_small_inertia(f: PhaseField, config: KineticConfig) -> PhaseField:
    """One Strang step: half transport, exact stiff velocity map, half transport."""
    if config.regime != SMALL_INERTIA:
        raise ValueError("config regime is not small-inertia")
    config.check_cfl(f.x_grid)
    dt = config.dt
    f = _transport_half(f, 0.5 * dt)
    force = _force_from(f, config)
    a = math.exp(-config.gamma * dt / config.eps)
    b = -(force / config.gamma) * (1.0 - a)
    v0 = -f.v_max + 0.5 * f.dv
    new, loss = backends.deposit_affine(f.values, a, b, v0, f.dv)
    f = replace(f, values=new, boundary_loss=f.boundary_loss + abs(loss) * f.x_grid.h * f.dv)
    f = _transport_half(f, 0.5 * dt)
    return f


def _relax_sigma0(f: PhaseField, u: np.ndarray, dt: float, eps: float):
    a = math.exp(-dt / eps)
    b = (1.0 - a) * u
    v0 = -f.v_max + 0.5 * f.dv
    return backends.deposit_affine(f.values, a, b, v0, f.dv)


def _relax_sigma_eps(f: PhaseField, u: np.ndarray, dt: float, eps: float):
    a = math.exp(-dt / eps)
    b = (1.0 - a) * u
    v0 = -f.v_max + 0.5 * f.dv
    new, loss1 = backends.deposit_affine(f.values, a, b, v0, f.dv)
    weights = gaussian_blur_weights(1.0 - a * a, f.dv)
    new, loss2 = backends.blur_v(new, weights)
    return new, loss1 + loss2


def local_velocity(f: PhaseField, vacuum_rel: float = 1e-10) -> np.ndarray:
    """u = momentum / density, zeroed on vacuum columns and clamped to the box.

    Columns whose density is below vacuum_rel of the peak carry only remap
    noise; an unguarded quotient there produces runaway relaxation targets
    that throw that noise mass off the velocity grid.
    """
    rho, mom, _ = moments(f)
    u = np.zeros_like(rho)
    ok = rho > vacuum_rel * max(float(np.max(np.abs(rho))), 1e-300)
    u[ok] = mom[ok] / rho[ok]
    return np.clip(u, -f.v_max, f.v_max)


def step_hydro(f: PhaseField, config: KineticConfig) -> PhaseField:
    """One Strang step: transport and drift halves around the stiff relaxation."""
    if config.regime not in (HYDRO_SIGMA0, HYDRO_SIGMA_EPS):
        raise ValueError("config regime is not a hydro regime")
    config.check_cfl(f.x_grid)
    dt = config.dt
    v0 = -f.v_max + 0.5 * f.dv

    def drift_half(g: PhaseField) -> PhaseField:
        force = _force_from(g, config)
        a = math.exp(-config.gamma * 0.5 * dt)
        b = -(force / config.gamma) * (1.0 - a)
        new, loss = backends.deposit_affine(g.values, a, b, v0, g.dv)
        return replace(g, values=new,
                       boundary_loss=g.boundary_loss + abs(loss) * g.x_grid.h * g.dv)

    f = _transport_half(f, 0.5 * dt)
    f = drift_half(f)
    u = local_velocity(f)
    if config.regime == HYDRO_SIGMA0:
        new, loss = _relax_sigma0(f, u, dt, config.eps)
    else:
        new, loss = _relax_sigma_eps(f, u, dt, config.eps)
    f = replace(f, values=new, boundary_loss=f.boundary_loss + abs(loss) * f.x_grid.h * f.dv)
    f = drift_half(f)
    f = _transport_half(f, 0.5 * dt)
    return f


def step(f: PhaseField, config: KineticConfig) -> PhaseField:
    if config.regime == SMALL_INERTIA:
        return step_small_inertia(f, config)
    return step_hydro(f, config)


def check_boundary_loss(f: PhaseField, threshold: float = 1e-8):
    if f.boundary_loss > threshold * max(f.mass, 1e-300):
        raise BoundaryLossError(
            f"velocity-boundary loss {f.boundary_loss:.3e} exceeds "
            f"{threshold:.1e} of total mass {f.mass:.6e}")


def maxwellian_phase_field(x_grid: GridSpec, n_v: int, v_max: float,
                           rho: np.ndarray, u, var: float) -> PhaseField:
    """f = rho(x) * Gaussian(v; u(x), var), velocity cells averaged exactly."""
    dv = 2.0 * v_max / n_v
    edges = -v_max + dv * np.arange(n_v + 1)
    u = np.broadcast_to(np.asarray(u, dtype=float), (x_grid.n,))
    s = math.sqrt(var)
    z = (edges[None, :] - u[:, None]) / (s * math.sqrt(2.0))
    cdf = 0.5 * (1.0 + erf(z))
    cell = (cdf[:, 1:] - cdf[:, :-1]) / dv
    return PhaseField(x_grid, v_max, np.asarray(rho, dtype=float)[:, None] * cell)


def small_inertia_energy(f: PhaseField, config: KineticConfig,
                         interaction: float) -> float:
    """(1/2) iint |v|^2 f + (1/(2 eps)) integral rho K * rho.

    ``interaction`` is the raw interaction energy (1/2) integral rho (K*rho).
    """
    _, _, second = moments(f)
    kinetic = 0.5 * float(second.sum()) * f.x_grid.h
    return kinetic + interaction / config.eps


def kinetic_entropy(f: PhaseField) -> float:
    """iint f log f with the positivity floor."""
    vals = np.maximum(f.values, ENTROPY_FLOOR)
    return float(np.sum(vals * np.log(vals))) * f.x_grid.h * f.dv


def free_energy_kinetic(f: PhaseField, config: KineticConfig,
                        interaction: float) -> float:
    """c_P iint f log f + (1/2) iint |v|^2 f + interaction energy."""
    c_p = 1.0 if config.regime == HYDRO_SIGMA_EPS else 0.0
    _, _, second = moments(f)
    kinetic = 0.5 * float(second.sum()) * f.x_grid.h
    value = kinetic + interaction
    if c_p:
        value += kinetic_entropy(f)
    if not np.isfinite(value):
        raise FloatingPointError("free energy is not finite")
    return value


def dissipation(f: PhaseField, config: KineticConfig) -> float:
    """iint (1/f) |c_P d_v f - f (u - v)|^2 with u the local velocity."""
    c_p = 1.0 if config.regime == HYDRO_SIGMA_EPS else 0.0
    u = local_velocity(f)
    v = f.v_centers()
    rel = v[None, :] - u[:, None]
    if c_p == 0.0:
        value = float(np.sum(f.values * rel * rel)) * f.x_grid.h * f.dv
    else:
        # the integrand is f |c_P d_v log f + (v-u)|^2: it vanishes with f,
        # so cells carrying no mass are excluded rather than floored
        dfdv = np.gradient(f.values, f.dv, axis=1)
        mask = f.values > 1e-14 * np.max(f.values)
        flux = c_p * dfdv + f.values * rel
        contrib = np.zeros_like(f.values)
        contrib[mask] = flux[mask] ** 2 / f.values[mask]
        value = float(np.sum(contrib)) * f.x_grid.h * f.dv
    if not np.isfinite(value):
        raise FloatingPointError("dissipation is not finite")
    return value
