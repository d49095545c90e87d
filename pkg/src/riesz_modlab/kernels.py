"""Riesz kernel |x|^(-alpha): parameters, Fourier symbol, singular-cell handling.

Two normalization modes exist:

* ``raw``      -- K(x) = |x|^(-alpha) literally.
* ``coulomb``  -- only for alpha = d-2 (d >= 3): K rescaled so that
                  -Laplace(K) = delta_0, i.e. the symbol is 1/|k|^2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.special import gamma

from .grid import GridSpec

RAW = "raw"
COULOMB = "coulomb-normalized"


def fourier_constant(d: int, alpha: float) -> float:
    """c such that the continuous Fourier transform of |x|^(-alpha) is c |k|^(alpha-d).

    Convention: F[K](k) = integral K(x) exp(-i k.x) dx.
    """
    if not 0 < alpha < d:
        raise ValueError(f"alpha must lie in (0, d), got alpha={alpha}, d={d}")
    return np.pi ** (d / 2) * 2.0 ** (d - alpha) * gamma((d - alpha) / 2) / gamma(alpha / 2)


@dataclass(frozen=True)
class KernelParams:
    """Exponent alpha in (0, d), dimension d, and normalization mode."""

    alpha: float
    d: int
    mode: str = RAW

    def __post_init__(self):
        if self.d < 1:
            raise ValueError(f"dimension must be >= 1, got {self.d}")
        if not 0 < self.alpha < self.d:
            raise ValueError(f"alpha must lie in (0, d), got {self.alpha} for d={self.d}")
        if self.mode not in (RAW, COULOMB):
            raise ValueError(f"unknown normalization mode {self.mode!r}")
        if self.mode == COULOMB:
            if self.d < 3 or abs(self.alpha - (self.d - 2)) > 1e-14:
                raise ValueError("coulomb normalization requires d >= 3 and alpha = d - 2")

    @property
    def scale(self) -> float:
        """Multiplier applied to the raw kernel (1 except in coulomb mode)."""
        if self.mode == COULOMB:
            return 1.0 / fourier_constant(self.d, self.alpha)
        return 1.0

    def kernel_value(self, r):
        """Pointwise K(r) for r > 0."""
        return self.scale * np.asarray(r, dtype=float) ** (-self.alpha)


def riesz_symbol(params: KernelParams, k) -> float:
    """Fourier multiplier of K at wavevector k; zero at k = 0 (mean-zero convention)."""
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if k.shape != (params.d,):
        raise ValueError(f"wavevector must have {params.d} components, got shape {k.shape}")
    kn = float(np.sqrt(np.dot(k, k)))
    if kn == 0.0:
        return 0.0
    return params.scale * fourier_constant(params.d, params.alpha) * kn ** (params.alpha - params.d)


def symbol_on_grid(params: KernelParams, grid: GridSpec,
                   n: int | None = None, length: float | None = None) -> np.ndarray:
    """Symbol sampled at the grid's discrete wavevectors, zero mode set to 0."""
    if grid.d != params.d:
        raise ValueError("grid dimension does not match kernel dimension")
    kn = grid.k_norm(n, length)
    out = np.zeros_like(kn)
    nz = kn > 0
    out[nz] = params.scale * fourier_constant(params.d, params.alpha) * kn[nz] ** (params.alpha - params.d)
    return out


def singular_cell_average(params: KernelParams, h: float) -> float:
    """Analytic mean of K over the cell [-h/2, h/2]^d containing the singularity.

    Closed form in 1-d; for d = 2, 3 the cell is reduced to the region where
    x_1 is the largest coordinate (radial part integrates exactly) and the
    remaining smooth integral over [0,1]^(d-1) is done by Gauss-Legendre.
    """
    d, alpha = params.d, params.alpha
    H = 0.5 * h
    if d == 1:
        j = 1.0
    else:
        nodes, weights = leggauss(48)
        t = 0.5 * (nodes + 1.0)  # map to [0, 1]
        w = 0.5 * weights
        if d == 2:
            j = float(np.sum(w * (1.0 + t**2) ** (-alpha / 2)))
        else:
            t1, t2 = np.meshgrid(t, t, indexing="ij")
            w2 = np.outer(w, w)
            j = float(np.sum(w2 * (1.0 + t1**2 + t2**2) ** (-alpha / 2)))
    return params.scale * d / (d - alpha) * H ** (-alpha) * j


def kernel_table(params: KernelParams, grid: GridSpec, padded: bool = True) -> np.ndarray:
    """Sampled kernel over signed cell offsets, truncated at radius L/2.

    Layout is FFT-circular: index m encodes the signed offset m (m < size/2)
    or m - size (m >= size/2).  The cell at zero offset holds the analytic
    singular-cell average.  Entries beyond radius L/2 are zero, which gives
    free-space semantics for sources supported in a half-box.
    """
    size = 2 * grid.n if padded else grid.n
    h = grid.h
    offs = np.fft.fftfreq(size, d=1.0 / size)  # signed integer offsets
    z = offs * h
    if grid.d == 1:
        # closed-form cell averages everywhere: much smaller midpoint error
        # from the cells adjacent to the singularity
        alpha = params.alpha
        lo = np.maximum(np.abs(z) - h / 2, 0.0)
        hi = np.abs(z) + h / 2
        table = (hi ** (1 - alpha) - lo ** (1 - alpha)) / ((1 - alpha) * h)
        table *= params.scale
        table[np.abs(z) > grid.L / 2 + 1e-12 * grid.L] = 0.0
        table[z == 0] = singular_cell_average(params, h)
        return table
    mesh = np.meshgrid(*([z] * grid.d), indexing="ij")
    r = np.sqrt(sum(c**2 for c in mesh))
    table = np.zeros_like(r)
    inside = (r > 0) & (r <= grid.L / 2 + 1e-12 * grid.L)
    table[inside] = params.scale * r[inside] ** (-params.alpha)
    table[r == 0] = singular_cell_average(params, h)
    return table
