from .halfspace import (
    HalfSpaceField,
    PairQuadratureSpec,
    delta_gamma_fd,
    extension_constant,
    grid_delta_gamma,
    half_space_constant,
    pair_quadrature,
)
from .identities import (
    CSV_HEADER,
    GaussianBump,
    IdentityReport,
    delta_gamma_apply,
    energy_pairing_residual,
    energy_rewrite_residual,
    hessian_split_residual,
    identity_residual,
    iterated_recursion_residual,
    leibniz_residual,
    polyharmonic_constant,
    polyharmonic_residual,
    recursion_residual,
    top_level_harmonic_residual,
    weighted_ibp_residual,
    xi_derivative_residual,
    xi_half_relation_residual,
)
from .moser import moser_ratio
from .params import (
    ExtensionParams,
    PointSourceKernel,
    PolyharmonicCaseError,
    gamma_exponent,
)
from .radial import HalfSpaceExpr, Monomial, RadialPoly, Wave

__all__ = [
    "CSV_HEADER", "ExtensionParams", "GaussianBump", "HalfSpaceExpr",
    "HalfSpaceField", "IdentityReport", "Monomial", "PairQuadratureSpec",
    "PointSourceKernel", "PolyharmonicCaseError", "RadialPoly", "Wave",
    "delta_gamma_apply", "delta_gamma_fd", "energy_pairing_residual",
    "energy_rewrite_residual", "extension_constant", "gamma_exponent",
    "grid_delta_gamma", "half_space_constant", "hessian_split_residual",
    "identity_residual", "iterated_recursion_residual", "leibniz_residual",
    "moser_ratio", "pair_quadrature", "polyharmonic_constant",
    "polyharmonic_residual", "recursion_residual",
    "top_level_harmonic_residual", "weighted_ibp_residual",
    "xi_derivative_residual", "xi_half_relation_residual",
]
