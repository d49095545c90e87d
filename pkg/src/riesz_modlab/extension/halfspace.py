"""Half-space quadrature and finite-difference tools.

The weighted integrals over R^d x (0, inf) fall in two families:

* gridded fields on a periodic x-box times midpoint-offset xi cells
  (synthetic smooth test functions; the xi^gamma weight is never evaluated
  at xi = 0);
* two-point-source integrals, reduced to 3 coordinates (u along the source
  axis, transverse radius w, height xi) with exponentially graded meshes
  that cluster at the integrable singularities and stretch to a large
  truncation radius with a reported tail estimate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gamma as gamma_fn

from ..grid import GridSpec


def sphere_area(m: int) -> float:
    """Surface area of the unit m-sphere S^m in R^(m+1)."""
    return 2.0 * np.pi ** ((m + 1) / 2) / gamma_fn((m + 1) / 2)


def half_space_constant(beta: float, d: int) -> float:
    """Boundary-flux constant c with -div(xi^g grad |(x,xi)|^(-beta)) = c delta
    on the half space, g = beta + 1 - d in (-1, 1).

    Assembled from the xi -> 0 limit of -xi^g d_xi of the kernel:
    c = beta pi^(d/2) Gamma((beta+2-d)/2) / Gamma((beta+2)/2).
    """
    if not d - 2 < beta < d:
        raise ValueError(f"beta={beta} outside the admissible band (d-2, d) for d={d}")
    return beta * np.pi ** (d / 2) * gamma_fn((beta + 2 - d) / 2) / gamma_fn((beta + 2) / 2)


def extension_constant(alpha: float, d: int) -> float:
    """c with  xi^gamma (-Delta_gamma)^(j+1) K = c * (boundary delta) for the
    level-j extension of |x|^(-alpha): the recursion product times the
    boundary-flux constant of the top-level kernel."""
    from .params import gamma_exponent
    j, _ = gamma_exponent(alpha, d)
    prod = 1.0
    for q in range(j):
        prod *= (alpha + 2 * q) * (2 * j - 2 * q)
    return prod * half_space_constant(alpha + 2 * j, d)


def graded_nodes(length: float, n: int, stretch: float):
    """Midpoint nodes on (0, length], clustered at 0, with quadrature weights."""
    t = (np.arange(n) + 0.5) / n
    denom = np.expm1(stretch)
    nodes = length * np.expm1(stretch * t) / denom
    weights = length * stretch * np.exp(stretch * t) / denom / n
    return nodes, weights


@dataclass(frozen=True)
class PairQuadratureSpec:
    """Resolution knobs for the two-source half-space integrals."""

    n_u: int = 96
    n_w: int = 96
    n_xi: int = 96
    radius: float = 1e8
    stretch: float = 26.0

    def refined(self, factor: int = 2) -> "PairQuadratureSpec":
        return PairQuadratureSpec(self.n_u * factor, self.n_w * factor,
                                  self.n_xi * factor, self.radius * 10,
                                  self.stretch + np.log(10))


def pair_quadrature(f, d: int, gamma: float, half_sep: float,
                    spec: PairQuadratureSpec = PairQuadratureSpec()) -> float:
    """integral over R^d x R_+ of xi^gamma f(r1, r2, dot, xi).

    Sources sit at u = -half_sep and u = +half_sep on the axis; r1, r2 are
    the (d+1)-distances to them and dot = (y-y1).(y-y2).  f must broadcast.
    """
    if d < 2:
        raise ValueError("pair quadrature needs d >= 2 (transverse direction)")
    a = half_sep
    U = spec.radius
    segs = []
    for (p, q, cluster_at_p) in [(-U, -a, False), (-a, 0.0, True),
                                 (0.0, a, False), (a, U, True)]:
        nodes, wts = graded_nodes(q - p, spec.n_u, spec.stretch)
        if cluster_at_p:
            segs.append((p + nodes, wts))
        else:
            segs.append((q - nodes, wts))
    u = np.concatenate([s[0] for s in segs])
    ju = np.concatenate([s[1] for s in segs])
    w, jw = graded_nodes(spec.radius, spec.n_w, spec.stretch)
    xi, jxi = graded_nodes(spec.radius, spec.n_xi, spec.stretch)

    uu = u[:, None, None]
    ww = w[None, :, None]
    xx = xi[None, None, :]
    r1 = np.sqrt((uu + a) ** 2 + ww**2 + xx**2)
    r2 = np.sqrt((uu - a) ** 2 + ww**2 + xx**2)
    dot = (uu + a) * (uu - a) + ww**2 + xx**2
    vals = f(r1, r2, dot, xx)
    measure = (ju[:, None, None] * (jw * w ** (d - 2))[None, :, None]
               * (jxi * xi**gamma)[None, None, :])
    return float(sphere_area(d - 2) * np.sum(vals * measure))


def pair_tail_exponent(d: int, gamma: float, decay: float) -> float:
    """Power p in tail(R) ~ R^p for an integrand decaying like r^(-decay)."""
    return d + 1 + gamma - decay


@dataclass
class HalfSpaceField:
    """Values on x-grid times midpoint-offset xi cells, with weight exponent."""

    x_grid: GridSpec
    n_xi: int
    xi_max: float
    gamma: float
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        expected = self.x_grid.shape + (self.n_xi,)
        if self.values.shape != expected:
            raise ValueError(f"values shape {self.values.shape} != {expected}")

    @property
    def dxi(self) -> float:
        return self.xi_max / self.n_xi

    def xi_centers(self) -> np.ndarray:
        return (np.arange(self.n_xi) + 0.5) * self.dxi

    def weighted_integral(self, integrand: np.ndarray | None = None) -> float:
        vals = self.values if integrand is None else integrand
        weight = self.xi_centers() ** self.gamma
        return float(np.sum(vals * weight) * self.x_grid.cell_volume * self.dxi)


def sample_on_half_grid(func, field_template: HalfSpaceField) -> np.ndarray:
    """Evaluate func(x (N,d), xi (N,)) on the template's nodes."""
    g = field_template.x_grid
    mesh = g.meshgrid()
    xi = field_template.xi_centers()
    pts_x = np.stack([m.ravel() for m in mesh], axis=1)
    nx = pts_x.shape[0]
    x_rep = np.repeat(pts_x, field_template.n_xi, axis=0)
    xi_rep = np.tile(xi, nx)
    vals = func(x_rep, xi_rep)
    return vals.reshape(g.shape + (field_template.n_xi,))


def grid_delta_gamma(field: HalfSpaceField) -> HalfSpaceField:
    """Second-order central stencil for Delta_gamma on the grid.

    x-directions wrap periodically; the two xi boundary layers are zeroed
    (callers keep test functions supported in the interior).
    """
    v = field.values
    h = field.x_grid.h
    dxi = field.dxi
    out = np.zeros_like(v)
    for axis in range(field.x_grid.d):
        out += (np.roll(v, -1, axis=axis) - 2 * v + np.roll(v, 1, axis=axis)) / h**2
    lap_xi = np.zeros_like(v)
    lap_xi[..., 1:-1] = (v[..., 2:] - 2 * v[..., 1:-1] + v[..., :-2]) / dxi**2
    d_xi = np.zeros_like(v)
    d_xi[..., 1:-1] = (v[..., 2:] - v[..., :-2]) / (2 * dxi)
    xi = field.xi_centers()
    out += lap_xi + field.gamma * d_xi / xi
    out[..., :1] = 0.0
    out[..., -1:] = 0.0
    return HalfSpaceField(field.x_grid, field.n_xi, field.xi_max, field.gamma, out)


def delta_gamma_fd(func, order: int, x: np.ndarray, xi: np.ndarray,
                   gamma: float, step: float, dtype=np.float64) -> np.ndarray:
    """order-fold Delta_gamma by composed second-order central differences.

    The composite functional  (point evaluation) o (stencil operator)^order
    is expanded symbolically into sparse node coefficients (the plus-shaped
    stencil only reaches the L1 ball of radius ``order``), so func -- which
    takes (x (N, d), xi (N,)) and must be vectorized -- is evaluated at a few
    hundred nodes per point instead of a dense tensor grid.  The (gamma/xi)
    coefficient is frozen at the node each application acts on, matching the
    nested grid sweep exactly.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    npts, d = x.shape
    D = d + 1
    out = np.empty(npts, dtype=dtype)
    inv_step2 = dtype(1.0) / dtype(step) ** 2
    for p in range(npts):
        coeffs = {(0,) * D: dtype(1.0)}
        for _ in range(order):
            new: dict = {}

            def add(key, val):
                new[key] = new.get(key, dtype(0.0)) + val

            for off, c in coeffs.items():
                xi_node = xi[p] + off[D - 1] * step
                if xi_node - order * step <= 0:
                    raise ValueError("stencil reaches xi <= 0; shrink the step")
                for axis in range(D):
                    up = off[:axis] + (off[axis] + 1,) + off[axis + 1:]
                    dn = off[:axis] + (off[axis] - 1,) + off[axis + 1:]
                    add(up, c * inv_step2)
                    add(dn, c * inv_step2)
                add(off, -2 * D * c * inv_step2)
                fac = dtype(gamma) / dtype(xi_node) / (2 * dtype(step))
                up = off[:D - 1] + (off[D - 1] + 1,)
                dn = off[:D - 1] + (off[D - 1] - 1,)
                add(up, c * fac)
                add(dn, -c * fac)
            coeffs = new
        keys = list(coeffs)
        offs = np.array(keys, dtype=float)
        cvec = np.array([coeffs[k] for k in keys], dtype=dtype)
        pts_x = x[p][None, :] + offs[:, :d] * step
        pts_xi = xi[p] + offs[:, d] * step
        vals = np.asarray(func(pts_x, pts_xi), dtype=dtype)
        out[p] = np.sum(cvec * vals)
    return out
