"""Numerical laboratory for singular Riesz interaction kernels:
convolution and modulated-energy machinery, half-space extension identities,
1-d phase-space solvers, and quantified small-inertia / hydrodynamic limits.
"""

from .grid import GridSpec, ScalarField, VectorField
from .kernels import KernelParams, fourier_constant, riesz_symbol

__version__ = "0.1.0"

__all__ = [
    "GridSpec",
    "ScalarField",
    "VectorField",
    "KernelParams",
    "fourier_constant",
    "riesz_symbol",
    "__version__",
]
