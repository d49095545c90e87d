"""Exact derivative algebra for half-space point-source kernels.

A kernel centered at a boundary source (x_s, 0) is a sum of terms

    c * y^sigma * r^(-e),   y = (x - x_s, xi),   r = |y|,

closed under partial derivatives, division by xi, and the weighted operator
Delta_gamma = Laplace_(x,xi) + (gamma/xi) d_xi.  Velocity factors u(x) are
carried separately as monomial/wave atoms with exact derivatives, so products
u(x) * kernel admit exact Delta_gamma applications via the product rule.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class RadialPoly:
    """Sum of terms c * y^sigma * r^(-e) in D = d+1 coordinates."""

    __slots__ = ("D", "terms")

    def __init__(self, D: int, terms: dict | None = None):
        self.D = D
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if c != 0.0:
                    self.terms[key] = self.terms.get(key, 0.0) + c

    @classmethod
    def power(cls, D: int, exponent: float) -> "RadialPoly":
        """r^(-exponent)."""
        return cls(D, {((0,) * D, float(exponent)): 1.0})

    def _add_term(self, powers, e, c):
        if c == 0.0:
            return
        key = (powers, e)
        new = self.terms.get(key, 0.0) + c
        if new == 0.0:
            self.terms.pop(key, None)
        else:
            self.terms[key] = new

    def deriv(self, axis: int) -> "RadialPoly":
        out = RadialPoly(self.D)
        for (powers, e), c in self.terms.items():
            p = powers[axis]
            if p != 0:
                lowered = list(powers)
                lowered[axis] -= 1
                out._add_term(tuple(lowered), e, c * p)
            if e != 0.0:
                raised = list(powers)
                raised[axis] += 1
                out._add_term(tuple(raised), e + 2.0, -c * e)
        return out

    def times_inv_xi(self) -> "RadialPoly":
        out = RadialPoly(self.D)
        xi_axis = self.D - 1
        for (powers, e), c in self.terms.items():
            lowered = list(powers)
            lowered[xi_axis] -= 1
            out._add_term(tuple(lowered), e, c)
        return out

    def delta_gamma(self, gamma: float) -> "RadialPoly":
        out = RadialPoly(self.D)
        for axis in range(self.D):
            second = self.deriv(axis).deriv(axis)
            for key, c in second.terms.items():
                out._add_term(key[0], key[1], c)
        aniso = self.deriv(self.D - 1).times_inv_xi()
        for key, c in aniso.terms.items():
            out._add_term(key[0], key[1], gamma * c)
        return out

    def scaled(self, factor: float) -> "RadialPoly":
        return RadialPoly(self.D, {k: c * factor for k, c in self.terms.items()})

    def __add__(self, other: "RadialPoly") -> "RadialPoly":
        out = RadialPoly(self.D, dict(self.terms))
        for key, c in other.terms.items():
            out._add_term(key[0], key[1], c)
        return out

    def eval(self, y: np.ndarray) -> np.ndarray:
        """Evaluate at points y of shape (..., D) with y[..., -1] > 0."""
        y = np.asarray(y, dtype=float)
        r = np.sqrt(np.sum(y * y, axis=-1))
        out = np.zeros(y.shape[:-1])
        for (powers, e), c in self.terms.items():
            term = np.full(y.shape[:-1], c)
            for axis, p in enumerate(powers):
                if p:
                    term = term * y[..., axis] ** p
            if e:
                term = term * r ** (-e)
            out += term
        return out


def eval_point_sources(poly: RadialPoly, sources: np.ndarray, weights: np.ndarray,
                       x: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Sum the (shared) radial poly over sources with signed weights."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    xi = np.asarray(xi, dtype=float)
    out = np.zeros(x.shape[0])
    for src, w in zip(np.atleast_2d(sources), weights):
        y = np.concatenate([x - src[None, :], xi[:, None]], axis=1)
        out += w * poly.eval(y)
    return out


@dataclass(frozen=True)
class Monomial:
    """c * prod_a x_a^p_a."""

    coef: float
    powers: tuple

    def deriv(self, axis: int):
        p = self.powers[axis]
        if p == 0 or self.coef == 0.0:
            return []
        lowered = list(self.powers)
        lowered[axis] -= 1
        return [Monomial(self.coef * p, tuple(lowered))]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        out = np.full(x.shape[0], self.coef)
        for axis, p in enumerate(self.powers):
            if p:
                out = out * x[:, axis] ** p
        return out


@dataclass(frozen=True)
class Wave:
    """c * cos(k.x + phase)."""

    coef: float
    k: tuple
    phase: float

    def deriv(self, axis: int):
        ka = self.k[axis]
        if ka == 0.0 or self.coef == 0.0:
            return []
        return [Wave(-self.coef * ka, self.k, self.phase - math.pi / 2)]

    def __call__(self, x: np.ndarray) -> np.ndarray:
        arg = x @ np.asarray(self.k) + self.phase
        return self.coef * np.cos(arg)


def atoms_deriv(atoms: list, axis: int) -> list:
    out = []
    for a in atoms:
        out.extend(a.deriv(axis))
    return out


def atoms_laplacian(atoms: list, d: int) -> list:
    out = []
    for axis in range(d):
        out.extend(atoms_deriv(atoms_deriv(atoms, axis), axis))
    return out


def atoms_eval(atoms: list, x: np.ndarray) -> np.ndarray:
    out = np.zeros(x.shape[0])
    for a in atoms:
        out += a(x)
    return out


class HalfSpaceExpr:
    """Sum of products P(x) * T(y): velocity atoms times radial kernel polys."""

    def __init__(self, d: int, pairs: list):
        self.d = d
        self.pairs = [(atom, poly) for atom, poly in pairs if poly.terms]

    def delta_gamma(self, gamma: float) -> "HalfSpaceExpr":
        new_pairs = []
        for atom, poly in self.pairs:
            for lap_atom in atoms_laplacian([atom], self.d):
                new_pairs.append((lap_atom, poly))
            for axis in range(self.d):
                for datom in atoms_deriv([atom], axis):
                    new_pairs.append((datom, poly.deriv(axis).scaled(2.0)))
            new_pairs.append((atom, poly.delta_gamma(gamma)))
        return HalfSpaceExpr(self.d, new_pairs)

    def eval(self, sources, weights, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        out = np.zeros(x.shape[0])
        for atom, poly in self.pairs:
            out += atom(x) * eval_point_sources(poly, sources, weights, x, xi)
        return out
