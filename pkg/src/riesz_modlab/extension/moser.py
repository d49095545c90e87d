"""Measured ratio for the commutator-type product inequality
||grad^k(fg) - f grad^k g||_2 against its Sobolev-product bracket.

Works on plain periodic arrays (any dimension, e.g. d = 4 for k = 2), since
the sampled-field containers stop at d = 3.
"""

from __future__ import annotations

from itertools import product

import numpy as np


def _wavevectors(shape, L: float):
    axes = [2 * np.pi * np.fft.fftfreq(n, d=L / n) for n in shape]
    return np.meshgrid(*axes, indexing="ij")


def _derivative_tensor(values: np.ndarray, L: float, k: int):
    """All order-k mixed spectral derivatives, shape (d,)*k + values.shape."""
    d = values.ndim
    ks = _wavevectors(values.shape, L)
    fhat = np.fft.fftn(values)
    out = np.empty((d,) * k + values.shape)
    for idx in product(range(d), repeat=k):
        mult = np.ones(values.shape, dtype=complex)
        for axis in idx:
            mult = mult * (1j * ks[axis])
        out[idx] = np.fft.ifftn(mult * fhat).real
    return out


def _lp_norm(values: np.ndarray, cell: float, p: float) -> float:
    if np.isinf(p):
        return float(np.max(np.abs(values)))
    return float((np.sum(np.abs(values) ** p) * cell) ** (1.0 / p))


def moser_ratio(f: np.ndarray, g: np.ndarray, k: int, L: float = 1.0) -> float:
    """||grad^k(fg) - f grad^k g||_2 over
    ||grad^(k-1) f||_2 (||grad g||_inf + ||grad^k g||_(d/(k-1))).

    f, g are samples on the periodic box [0, L)^d; requires d >= 2k.  Ratios
    over a random family probe the inequality's constant; no universal
    constant is certified.
    """
    f = np.asarray(f, dtype=float)
    g = np.asarray(g, dtype=float)
    if f.shape != g.shape:
        raise ValueError("fields must share a shape")
    d = f.ndim
    if d < 2 * k:
        raise ValueError(f"need d >= 2k, got d={d}, k={k}")
    cell = (L / f.shape[0]) ** d
    dk_prod = _derivative_tensor(f * g, L, k)
    dk_g = _derivative_tensor(g, L, k)
    diff = dk_prod - f[(None,) * k] * dk_g
    lhs = _lp_norm(np.sqrt(np.sum(diff**2, axis=tuple(range(k)))), cell, 2.0)

    dkm1_f = _derivative_tensor(f, L, k - 1)
    f_term = _lp_norm(np.sqrt(np.sum(dkm1_f**2, axis=tuple(range(k - 1)))), cell, 2.0)
    grad_g = _derivative_tensor(g, L, 1)
    sup_grad_g = _lp_norm(np.sqrt(np.sum(grad_g**2, axis=0)), cell, np.inf)
    dk_g_norm = _lp_norm(np.sqrt(np.sum(dk_g**2, axis=tuple(range(k)))),
                         cell, d / (k - 1))
    bracket = f_term * (sup_grad_g + dk_g_norm)
    scale = _lp_norm(np.sqrt(np.sum(dk_prod**2, axis=tuple(range(k)))), cell, 2.0)
    if bracket <= 1e-14 * max(scale, 1.0):
        return 0.0 if lhs <= 1e-12 * max(scale, 1.0) else np.inf
    return lhs / bracket
