"""Closed-form radial algebra and the weighted operator."""

import numpy as np
import pytest

from riesz_modlab.extension import (
    ExtensionParams,
    PointSourceKernel,
    PolyharmonicCaseError,
    RadialPoly,
    delta_gamma_apply,
    delta_gamma_fd,
    gamma_exponent,
    grid_delta_gamma,
    xi_half_relation_residual,
)
from riesz_modlab.extension.identities import GaussianBump, _half_grid, sample_on_half_grid


def test_gamma_exponent_examples():
    assert gamma_exponent(0.5, 5) == (2, pytest.approx(0.5))
    assert gamma_exponent(2.5, 3) == (0, pytest.approx(0.5))
    j, g = gamma_exponent(2.0, 3)  # alpha > d-2 stays at level 0
    assert j == 0 and g == pytest.approx(0.0)


def test_gamma_exponent_polyharmonic_rejected():
    with pytest.raises(PolyharmonicCaseError):
        gamma_exponent(1.0, 3)
    with pytest.raises(PolyharmonicCaseError):
        gamma_exponent(1.0, 5)


def test_gamma_exponent_band():
    for d in (3, 5, 7):
        for alpha in np.linspace(0.05, d - 0.05, 23):
            try:
                j, g = gamma_exponent(float(alpha), d)
            except PolyharmonicCaseError:
                continue
            assert d - 2 * j - 2 < alpha < d - 2 * j
            assert -1 < g < 1


def test_delta_gamma_closed_form_value():
    # kernel at (e1, 1) in d=5 with alpha=1/2: the operator returns
    # -alpha * 2j * |(x, xi)|^(-alpha-2) = -2^(-1/4)
    j, gamma = gamma_exponent(0.5, 5)
    poly = delta_gamma_apply(RadialPoly.power(6, 0.5), gamma)
    y = np.array([[1.0, 0, 0, 0, 0, 1.0]])
    assert poly.eval(y)[0] == pytest.approx(-(2.0 ** -0.25), rel=1e-13)


def test_delta_gamma_fd_cross_check():
    j, gamma = gamma_exponent(0.5, 5)
    src = PointSourceKernel(np.zeros((1, 5)), [1.0], 0.5)
    x = np.array([[1.0, 0, 0, 0, 0]])
    xi = np.array([1.0])
    exact = -(2.0 ** -0.25)
    fd = delta_gamma_fd(lambda px, pxi: src.eval(px, pxi), 1, x, xi, gamma, 1e-3)
    assert fd[0] == pytest.approx(exact, rel=1e-5)


def test_delta_gamma_annihilates_harmonic_xi_free():
    # f = x_1 (harmonic in x, xi-independent)
    poly = RadialPoly(4, {((1, 0, 0, 0), 0.0): 1.0})
    out = poly.delta_gamma(0.5)
    pts = np.random.default_rng(0).normal(size=(5, 4))
    pts[:, -1] = np.abs(pts[:, -1]) + 0.1
    assert np.max(np.abs(out.eval(pts))) == 0.0


def test_divergence_form_consistency_on_grid():
    # xi^g * (grid operator) against the flux-form stencil, to stencil order
    gamma = 0.4
    bump = GaussianBump([4.0, 4.0], 0.5)

    def err(n):
        tpl = _half_grid(1, n, 8.0, n, 8.0, gamma)
        vals = sample_on_half_grid(lambda x, xi: bump.value(x, xi), tpl)
        field = type(tpl)(tpl.x_grid, tpl.n_xi, tpl.xi_max, gamma, vals)
        lhs = field.xi_centers() ** gamma * grid_delta_gamma(field).values
        h, dxi = tpl.x_grid.h, tpl.dxi
        xi = tpl.xi_centers()
        flux = np.zeros_like(vals)
        flux += (np.roll(vals, -1, 0) - 2 * vals + np.roll(vals, 1, 0)) / h**2 \
            * xi[None, :] ** gamma
        xi_up = (xi[:-1] + xi[1:]) / 2
        d_up = np.zeros_like(vals)
        d_up[:, :-1] = (vals[:, 1:] - vals[:, :-1]) / dxi * xi_up[None, :] ** gamma
        div_xi = np.zeros_like(vals)
        div_xi[:, 1:-1] = (d_up[:, 1:-1] - d_up[:, :-2]) / dxi
        flux += div_xi
        core = (slice(2, -2), slice(2, -2))
        scale = np.max(np.abs(lhs[core]))
        return np.max(np.abs((lhs - flux)[core])) / scale

    e64, e128 = err(64), err(128)
    assert e64 <= 5e-2
    assert e128 <= 0.35 * e64  # second-order stencils


def test_xi_half_relation():
    rng = np.random.default_rng(2)
    for d, alpha in [(3, 0.5), (5, 1.8)]:
        params = ExtensionParams(alpha, d)
        assert params.j == 1
        src = PointSourceKernel(rng.normal(size=(3, d)), rng.normal(size=3), alpha)
        rep = xi_half_relation_residual(src, params)
        assert rep.residual <= 1e-10


def test_xi_half_relation_scaling():
    # both sides scale like lambda^(-alpha-2) under (x, xi) -> lambda (x, xi)
    d, alpha = 3, 0.5
    params = ExtensionParams(alpha, d)
    base = RadialPoly.power(d + 1, alpha)
    lhs = base.deriv(d).times_inv_xi()
    y = np.array([[0.7, -0.2, 0.4, 0.9]])
    lam = 1.7
    v1 = lhs.eval(y)[0]
    v2 = lhs.eval(lam * y)[0]
    assert v2 == pytest.approx(lam ** (-alpha - 2) * v1, rel=1e-12)


def test_delta_gamma_apply_grid_mismatch():
    tpl = _half_grid(1, 16, 8.0, 16, 4.0, 0.3)
    with pytest.raises(ValueError):
        delta_gamma_apply(tpl, 0.7)
    with pytest.raises(TypeError):
        delta_gamma_apply("not a field", 0.3)
