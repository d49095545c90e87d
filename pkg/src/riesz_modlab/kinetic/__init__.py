from .backends import BACKEND
from .solver import (
    HYDRO_SIGMA0,
    HYDRO_SIGMA_EPS,
    SMALL_INERTIA,
    BoundaryLossError,
    KineticConfig,
    PhaseField,
    check_boundary_loss,
    density_field,
    dissipation,
    exact_damped_velocity_update,
    free_energy_kinetic,
    gaussian_blur_weights,
    interaction_force,
    local_velocity,
    maxwellian_phase_field,
    moments,
    small_inertia_energy,
    step,
    step_hydro,
    step_small_inertia,
)

__all__ = [
    "BACKEND", "BoundaryLossError", "KineticConfig", "PhaseField",
    "SMALL_INERTIA", "HYDRO_SIGMA0", "HYDRO_SIGMA_EPS",
    "check_boundary_loss", "density_field", "dissipation",
    "exact_damped_velocity_update", "free_energy_kinetic",
    "gaussian_blur_weights", "interaction_force", "local_velocity",
    "maxwellian_phase_field", "moments", "small_inertia_energy",
    "step", "step_hydro", "step_small_inertia",
]
