"""Experiment orchestration: well-prepared presets, reference trajectories,
and the two quantified limits as measurable eps-sweeps."""

from __future__ import annotations

import hashlib
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .convolve import interaction_energy, modulated_interaction_energy
from .diagnostics import (
    ConvFrame,
    EnergyReport,
    bl_upper_bound,
    conv_lemma_suite,
    fit_rate,
    modulated_kinetic_energy,
    relative_entropy_density,
    relative_entropy_macro,
    suite_holds,
    wasserstein1_1d,
)
from .grid import GridSpec, ScalarField, VectorField
from .kernels import KernelParams
from .kinetic import (
    HYDRO_SIGMA0,
    HYDRO_SIGMA_EPS,
    SMALL_INERTIA,
    KineticConfig,
    PhaseField,
    check_boundary_loss,
    density_field,
    dissipation,
    free_energy_kinetic,
    local_velocity,
    maxwellian_phase_field,
    moments,
    small_inertia_energy,
    step,
)
from .limits import MacroState, aggregation_velocity, step_aggregation, step_euler_riesz

PRESETS = ("inertia-wellprepared", "hydro-maxwellian")


def bump_density(grid: GridSpec, sigma: float = 0.35, mass: float = 0.12,
                 background: float = 0.0) -> ScalarField:
    """Centered Gaussian bump, grid-normalized, plus an optional uniform floor."""
    x = grid.axis_coords()
    vals = np.exp(-((x - grid.L / 2) ** 2) / (2 * sigma**2))
    vals *= mass / (vals.sum() * grid.h)
    if background:
        vals = vals + background * vals.max()
    return ScalarField(grid, vals)


@dataclass
class SweepSettings:
    """Grid, stepping and preset parameters shared by the sweep runners."""

    kernel: KernelParams
    n_x: int = 256
    n_v: int = 256
    L: float = 6.0
    v_max: float = 4.0
    eps_list: tuple = (0.1, 0.05, 0.025, 0.0125)
    cfl: float = 0.4
    t_end: float = 0.4
    gamma: float = 1.0
    refine: int = 4
    frame_every: int = 5
    muscl: bool = True
    seed: int = 1234
    preset: str = "inertia-wellprepared"

    def dt(self) -> float:
        return self.cfl * (self.L / self.n_x) / self.v_max

    def kinetic_grid(self) -> GridSpec:
        return GridSpec(1, self.n_x, self.L)

    def fine_grid(self) -> GridSpec:
        return GridSpec(1, self.n_x * self.refine, self.L)

    def content_key(self, extra: str = "") -> str:
        payload = json.dumps({
            "alpha": self.kernel.alpha, "mode": self.kernel.mode,
            "n_x": self.n_x, "n_v": self.n_v, "L": self.L,
            "v_max": self.v_max, "cfl": self.cfl, "t_end": self.t_end,
            "gamma": self.gamma, "refine": self.refine,
            "frame_every": self.frame_every, "muscl": self.muscl,
            "preset": self.preset, "extra": extra,
        }, sort_keys=True)
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


def _restrict(values: np.ndarray, factor: int) -> np.ndarray:
    return values.reshape(-1, factor).mean(axis=1)


def _frame_times(settings: SweepSettings):
    dt = settings.dt()
    n_steps = int(round(settings.t_end / dt))
    frames = list(range(0, n_steps + 1, settings.frame_every))
    if frames[-1] != n_steps:
        frames.append(n_steps)
    return dt, n_steps, frames


# ---------------------------------------------------------------------------
# reference trajectories on the fine grid


def aggregation_trajectory(settings: SweepSettings, cache_dir: str | None = None):
    """Limit states of the overdamped system at the frame times.

    Returns (times, rho list (fine), u list (fine)); cached by content hash.
    """
    key = settings.content_key("aggregation")
    if cache_dir:
        path = os.path.join(cache_dir, f"agg-{key}.npz")
        if os.path.exists(path):
            data = np.load(path)
            return data["times"], data["rho"], data["u"]
    dt, n_steps, _ = _frame_times(settings)
    grid = settings.fine_grid()
    rho = bump_density(grid)
    params = settings.kernel
    # the reference stepper subdivides each kinetic step
    sub = 2 * settings.refine
    dt_f = dt / sub
    times, rhos, us = [], [], []
    for k in range(n_steps + 1):
        times.append(k * dt)
        rhos.append(rho.values.copy())
        us.append(aggregation_velocity(rho, params, settings.gamma,
                                       force_filter=True).components[0])
        if k < n_steps:
            for _ in range(sub):
                rho = step_aggregation(rho, dt_f, params, settings.gamma,
                                       muscl=settings.muscl, force_filter=True)
    out = np.array(times), np.array(rhos), np.array(us)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        np.savez(path, times=out[0], rho=out[1], u=out[2])
    return out


def euler_trajectory(settings: SweepSettings, c_p: float,
                     cache_dir: str | None = None):
    """Damped Euler limit states at the frame times (fine grid)."""
    key = settings.content_key(f"euler-cp{c_p}")
    if cache_dir:
        path = os.path.join(cache_dir, f"euler-{key}.npz")
        if os.path.exists(path):
            data = np.load(path)
            return data["times"], data["rho"], data["u"]
    dt, n_steps, _ = _frame_times(settings)
    grid = settings.fine_grid()
    background = 1e-3 if c_p else 0.0
    rho = bump_density(grid, background=background)
    state = MacroState(rho, VectorField(grid, [np.zeros(grid.n)]), c_p,
                       settings.gamma)
    sub = 2 * settings.refine
    dt_f = dt / sub
    times, rhos, us = [], [], []
    for k in range(n_steps + 1):
        times.append(k * dt)
        rhos.append(state.rho.values.copy())
        us.append(state.u.components[0].copy())
        if k < n_steps:
            for _ in range(sub):
                state = step_euler_riesz(state, dt_f, settings.kernel,
                                         muscl=settings.muscl, force_filter=True)
    out = np.array(times), np.array(rhos), np.array(us)
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        np.savez(path, times=out[0], rho=out[1], u=out[2])
    return out


# ---------------------------------------------------------------------------
# per-eps kinetic runs


@dataclass
class EpsRunResult:
    eps: float
    reports: list
    combined_final: float
    time_integrated_mke: float
    bound_constant: float
    transport_constant: float
    suite_violations: list
    boundary_loss: float


@dataclass
class SweepResult:
    kind: str
    settings: SweepSettings
    runs: list
    fits: dict
    verdicts: dict

    def passed(self) -> bool:
        return all(self.verdicts.values())


def _grad_sup(u_fine: np.ndarray, grid: GridSpec) -> float:
    k = 2 * np.pi * np.fft.fftfreq(len(u_fine), d=grid.L / len(u_fine))
    du = np.fft.ifft(1j * k * np.fft.fft(u_fine)).real
    return float(np.max(np.abs(du)))


def run_inertia_eps(eps: float, settings: SweepSettings, reference) -> EpsRunResult:
    """One small-inertia run against the aggregation reference."""
    times, rho_ref, u_ref = reference
    grid = settings.kinetic_grid()
    fine = settings.fine_grid()
    params = settings.kernel
    dt, n_steps, frames = _frame_times(settings)
    config = KineticConfig(eps=eps, kernel=params, regime=SMALL_INERTIA,
                           dt=dt, t_end=settings.t_end, gamma=settings.gamma,
                           cfl=settings.cfl + 1e-9, v_max=settings.v_max)
    rho0 = bump_density(grid)
    u0 = aggregation_velocity(rho0, params, settings.gamma,
                              force_filter=True).components[0]
    f = maxwellian_phase_field(grid, settings.n_v, settings.v_max,
                               rho0.values, u0, var=eps)

    mie0 = 0.0  # densities coincide at t = 0 by construction
    ike0 = modulated_kinetic_energy(f, u0)
    reports = []
    suite_violations = []
    mke_integral = 0.0
    bound_c = 0.0
    transport_c = 0.0
    bl0 = 0.0
    frame_set = set(frames)
    for k in range(n_steps + 1):
        if k in frame_set:
            rho_l = ScalarField(grid, _restrict(rho_ref[k], settings.refine))
            u_l = _restrict(u_ref[k], settings.refine)
            rho_eps = density_field(f)
            u_eps = local_velocity(f)
            mke = modulated_kinetic_energy(f, u_l)
            mie = modulated_interaction_energy(rho_eps, rho_l, params)
            w1 = wasserstein1_1d(rho_eps, rho_l)
            bl = bl_upper_bound(rho_eps, rho_l)
            rel_e = 0.5 * float(np.sum(rho_eps.values * (u_eps - u_l) ** 2)) * grid.h
            inter = interaction_energy(rho_eps, params)
            free_e = small_inertia_energy(f, config, inter)
            diss = dissipation(f, config)
            reports.append(EnergyReport(k * dt, eps, mke, mie, 0.0, rel_e,
                                        w1, bl, free_e, diss))
            frame = ConvFrame(f, rho_eps, u_eps, rho_l, u_l,
                              grad_u_sup=_grad_sup(u_ref[k], fine),
                              u_sup=float(np.max(np.abs(u_ref[k]))), c_p=0.0)
            res = conv_lemma_suite(frame, "inertia")
            if not suite_holds(res):
                suite_violations.append((k * dt, res))
            denom = eps * ike0 + mie0 + eps**2
            bound_c = max(bound_c, (mie + mke_integral) / denom)
            # transported-density growth against the accumulated kinetic defect
            denom_t = bl0**2 + mke_integral + 1e-300
            transport_c = max(transport_c, bl**2 / denom_t if k else 0.0)
        if k < n_steps:
            u_now = _restrict(u_ref[k], settings.refine)
            mke_integral += dt * modulated_kinetic_energy(f, u_now)
            f = step(f, config)
    check_boundary_loss(f)
    final = reports[-1]
    combined = final.modulated_interaction + mke_integral + final.w1
    return EpsRunResult(eps, reports, combined, mke_integral, bound_c,
                        transport_c, suite_violations, f.boundary_loss)


def run_hydro_eps(eps: float, settings: SweepSettings, c_p: float,
                  reference) -> EpsRunResult:
    """One relaxation run against the damped Euler reference."""
    times, rho_ref, u_ref = reference
    grid = settings.kinetic_grid()
    fine = settings.fine_grid()
    params = settings.kernel
    dt, n_steps, frames = _frame_times(settings)
    regime = HYDRO_SIGMA_EPS if c_p else HYDRO_SIGMA0
    config = KineticConfig(eps=eps, kernel=params, regime=regime,
                           dt=dt, t_end=settings.t_end, gamma=settings.gamma,
                           cfl=settings.cfl + 1e-9, v_max=settings.v_max)
    background = 1e-3 if c_p else 0.0
    rho0 = bump_density(grid, background=background)
    var = 1.0 if c_p else eps
    f = maxwellian_phase_field(grid, settings.n_v, settings.v_max,
                               rho0.values, 0.0, var=var)

    reports = []
    suite_violations = []
    vel_l2_integral = 0.0
    free0 = None
    excess = -np.inf
    budget = 0.0
    frame_set = set(frames)
    combined = 0.0
    for k in range(n_steps + 1):
        if k in frame_set:
            rho_l = ScalarField(grid, _restrict(rho_ref[k], settings.refine))
            u_l = _restrict(u_ref[k], settings.refine)
            rho_eps = density_field(f)
            u_eps = local_velocity(f)
            mke = modulated_kinetic_energy(f, u_l)
            mie = modulated_interaction_energy(rho_eps, rho_l, params)
            w1 = wasserstein1_1d(rho_eps, rho_l)
            bl = bl_upper_bound(rho_eps, rho_l)
            vel_l2 = float(np.sum(rho_eps.values * (u_eps - u_l) ** 2)) * grid.h
            rel_h = relative_entropy_density(rho_eps, rho_l) if c_p else 0.0
            rel_e = relative_entropy_macro(rho_eps, u_eps, rho_l, u_l, c_p) \
                if c_p else 0.5 * vel_l2
            inter = interaction_energy(rho_eps, params)
            free_e = free_energy_kinetic(f, config, inter)
            diss = dissipation(f, config)
            reports.append(EnergyReport(k * dt, eps, mke, mie, rel_h, rel_e,
                                        w1, bl, free_e, diss))
            if free0 is None:
                free0 = free_e
            excess = max(excess, free_e + budget - free0)
            frame = ConvFrame(f, rho_eps, u_eps, rho_l, u_l,
                              grad_u_sup=_grad_sup(u_ref[k], fine),
                              u_sup=float(np.max(np.abs(u_ref[k]))), c_p=c_p)
            res = conv_lemma_suite(frame, "hydro")
            if not suite_holds(res):
                suite_violations.append((k * dt, res))
            combined = 0.5 * vel_l2 + (c_p * rel_h) + 0.5 * mie
        if k < n_steps:
            rho_eps = density_field(f)
            u_eps = local_velocity(f)
            u_now = _restrict(u_ref[k], settings.refine)
            vel_l2_integral += dt * float(
                np.sum(rho_eps.values * (u_eps - u_now) ** 2)) * grid.h
            mom_l2 = float(np.sum(rho_eps.values * u_eps**2)) * grid.h
            budget += dt * (0.5 / eps * dissipation(f, config)
                            + settings.gamma * mom_l2)
            f = step(f, config)
    check_boundary_loss(f)
    return EpsRunResult(eps, reports, combined, vel_l2_integral,
                        excess, 0.0, suite_violations, f.boundary_loss)


def _max_workers() -> int:
    raw = os.environ.get("RIESZ_MODLAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_many(fn, eps_list):
    workers = _max_workers()
    if workers == 1:
        return [fn(eps) for eps in eps_list]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, eps_list))


def run_sweep_inertia(settings: SweepSettings, cache_dir: str | None = None) -> SweepResult:
    reference = aggregation_trajectory(settings, cache_dir)
    runs = _run_many(lambda eps: run_inertia_eps(eps, settings, reference),
                     settings.eps_list)
    eps = np.array([r.eps for r in runs])
    combined = np.array([r.combined_final for r in runs])
    fits = {"combined": fit_rate(eps, combined)}
    constants = np.array([r.bound_constant for r in runs])
    # systematic growth of the fitted constant under refinement would mean
    # the claimed order is wrong; mild drift from discretization is allowed
    const_trend = fit_rate(eps, constants)
    fits["bound-constant"] = const_trend
    verdicts = {
        "slope >= 0.9": fits["combined"].slope >= 0.9,
        "r2 >= 0.9": fits["combined"].r_squared >= 0.9,
        "bound constant non-growing": const_trend.slope >= -0.3,
        "inequality suite holds": all(not r.suite_violations for r in runs),
    }
    return SweepResult("sweep-inertia", settings, runs, fits, verdicts)


def run_sweep_hydro(settings: SweepSettings, cache_dir: str | None = None) -> SweepResult:
    runs = []
    fits = {}
    verdicts = {}
    for c_p in (0.0, 1.0):
        reference = euler_trajectory(settings, c_p, cache_dir)
        tag = f"cp{int(c_p)}"
        sub = _run_many(lambda eps: run_hydro_eps(eps, settings, c_p, reference),
                        settings.eps_list)
        runs.extend(sub)
        eps = np.array([r.eps for r in sub])
        combined = np.array([r.combined_final for r in sub])
        fits[f"combined-{tag}"] = fit_rate(eps, combined)
        verdicts[f"{tag}: slope >= 0.45"] = fits[f"combined-{tag}"].slope >= 0.45
        verdicts[f"{tag}: r2 >= 0.9"] = fits[f"combined-{tag}"].r_squared >= 0.9
        verdicts[f"{tag}: inequality suite holds"] = \
            all(not r.suite_violations for r in sub)
        # free-energy inequality excess, recorded per eps in bound_constant
        excesses = [r.bound_constant for r in sub]
        scale = max(abs(sub[0].reports[0].free_energy), 1.0)
        verdicts[f"{tag}: free-energy inequality"] = \
            max(excesses) <= 0.02 * scale
    return SweepResult("sweep-hydro", settings, runs, fits, verdicts)
