"""Level and weight exponent for the dimension-extension representation.

For 0 < alpha < d with (d - alpha)/2 not an integer there is a unique level
j >= 0 with d - 2j - 2 < alpha < d - 2j; the weight exponent is
gamma = alpha - d + 2j + 1 in (-1, 1).  Integer (d - alpha)/2 is the
polyharmonic branch and is rejected here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .radial import RadialPoly


class PolyharmonicCaseError(ValueError):
    """alpha = d mod 2: handled by the polyharmonic identities instead."""


def gamma_exponent(alpha: float, d: int):
    """Return (j, gamma) with d-2j-2 < alpha < d-2j and gamma in (-1, 1)."""
    if not 0 < alpha < d:
        raise ValueError(f"alpha must lie in (0, d), got {alpha} for d={d}")
    half_gap = (d - alpha) / 2
    j = math.floor(half_gap)
    if abs(half_gap - round(half_gap)) < 1e-12 and round(half_gap) >= 1:
        raise PolyharmonicCaseError(
            f"alpha={alpha}, d={d} has integer (d-alpha)/2; "
            "use the polyharmonic identities")
    gamma = alpha - d + 2 * j + 1
    return j, gamma


@dataclass(frozen=True)
class ExtensionParams:
    """alpha, d, derived level j and weight exponent gamma."""

    alpha: float
    d: int

    def __post_init__(self):
        gamma_exponent(self.alpha, self.d)  # validates

    @property
    def j(self) -> int:
        return gamma_exponent(self.alpha, self.d)[0]

    @property
    def gamma(self) -> float:
        return gamma_exponent(self.alpha, self.d)[1]

    def level_exponent(self, level: int) -> float:
        """Kernel exponent alpha + 2*level of the level-th extended kernel."""
        return self.alpha + 2 * level

    def recursion_coefficient(self, level: int) -> float:
        """Coefficient in  Delta_gamma^level applied to the base kernel
        = coefficient * (level-th kernel):  (-1)^l prod (alpha+2q)(2j-2q)."""
        if not 0 <= level <= self.j:
            raise ValueError(f"level must lie in [0, {self.j}], got {level}")
        out = 1.0
        for q in range(level):
            out *= -(self.alpha + 2 * q) * (2 * self.j - 2 * q)
        return out


@dataclass
class PointSourceKernel:
    """Signed point sources on the boundary: sum_i w_i |(x - x_i, xi)|^(-(alpha+2l))."""

    sources: np.ndarray  # (m, d)
    weights: np.ndarray  # (m,)
    alpha: float
    level: int = 0

    def __post_init__(self):
        self.sources = np.atleast_2d(np.asarray(self.sources, dtype=float))
        self.weights = np.atleast_1d(np.asarray(self.weights, dtype=float))
        if self.sources.shape[0] != self.weights.shape[0]:
            raise ValueError("one weight per source required")
        if self.level < 0:
            raise ValueError("level must be nonnegative")

    @property
    def d(self) -> int:
        return self.sources.shape[1]

    @property
    def exponent(self) -> float:
        return self.alpha + 2 * self.level

    def poly(self) -> RadialPoly:
        """The shared radial profile r^-(alpha + 2 level) in d+1 coordinates."""
        return RadialPoly.power(self.d + 1, self.exponent)

    def eval(self, x, xi) -> np.ndarray:
        from .radial import eval_point_sources
        return eval_point_sources(self.poly(), self.sources, self.weights,
                                  np.atleast_2d(x), np.atleast_1d(xi))

    def shifted_level(self, level: int) -> "PointSourceKernel":
        return PointSourceKernel(self.sources, self.weights, self.alpha, level)
