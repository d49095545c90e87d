"""Parity between the compiled kernels and the numpy fallback."""

import numpy as np
import pytest

from riesz_modlab.kinetic import backends


def _impls():
    table = backends.get_backends()
    if "compiled" not in table:
        pytest.skip("compiled extension not built")
    return table["python"], table["compiled"]


def test_advect_parity_and_conservation():
    py, cy = _impls()
    rng = np.random.default_rng(0)
    f = rng.random((64, 48))
    shifts = rng.uniform(-7.3, 7.3, size=48)
    a = py.advect_x(f, shifts)
    b = cy.advect_x(np.ascontiguousarray(f), shifts)
    assert np.max(np.abs(a - b)) <= 1e-13 * np.max(np.abs(f))
    assert a.sum(axis=0) == pytest.approx(f.sum(axis=0), rel=1e-13)


def test_advect_exact_on_linear_profile():
    py, _ = _impls()
    n = 32
    x = np.arange(n, dtype=float)
    f = np.tile(x[:, None], (1, 3))
    out = py.advect_x(f, np.array([2.0, 0.0, 5.25]))
    # interior cells of a periodic ramp shift exactly (wrap cells differ)
    assert out[10, 0] == pytest.approx(x[8], abs=1e-12)
    assert out[10, 1] == pytest.approx(x[10], abs=1e-12)


def test_deposit_parity_moments():
    py, cy = _impls()
    rng = np.random.default_rng(1)
    nx, nv = 16, 64
    f = rng.random((nx, nv))
    a = 0.37
    b = rng.uniform(-0.5, 0.5, size=nx)
    v0, dv = -4.0 + 0.0625, 0.125
    out_py, loss_py = py.deposit_affine(f, a, b, v0, dv)
    out_cy, loss_cy = cy.deposit_affine(np.ascontiguousarray(f), a, b, v0, dv)
    assert np.max(np.abs(out_py - out_cy)) <= 1e-13 * np.max(np.abs(f))
    assert loss_py == pytest.approx(loss_cy, abs=1e-13)
    v = v0 + dv * np.arange(nv)
    # moment exactness (no boundary loss for this contraction)
    assert loss_py == pytest.approx(0.0, abs=1e-14)
    for row in range(nx):
        m0, m1, m2 = f[row].sum(), f[row] @ v, f[row] @ v**2
        y_mom = a * m1 + b[row] * m0
        y_sec = a * a * m2 + 2 * a * b[row] * m1 + b[row] ** 2 * m0
        assert out_py[row].sum() == pytest.approx(m0, rel=1e-14)
        assert out_py[row] @ v == pytest.approx(y_mom, rel=1e-13, abs=1e-13)
        assert out_py[row] @ v**2 == pytest.approx(y_sec, rel=1e-12, abs=1e-12)


def test_deposit_boundary_loss_accounted():
    py, cy = _impls()
    f = np.zeros((1, 8))
    f[0, 7] = 2.0
    # shift everything far beyond the right boundary
    out, loss = py.deposit_affine(f, 1.0, np.array([100.0]), -1.0, 0.25)
    assert out.sum() == pytest.approx(0.0, abs=1e-14)
    assert loss == pytest.approx(2.0, rel=1e-14)
    out_c, loss_c = cy.deposit_affine(np.ascontiguousarray(f), 1.0,
                                      np.array([100.0]), -1.0, 0.25)
    assert loss_c == pytest.approx(loss, abs=1e-14)


def test_blur_parity_and_moments():
    py, cy = _impls()
    rng = np.random.default_rng(2)
    f = rng.random((8, 64))
    w = np.array([0.1, 0.2, 0.4, 0.2, 0.1])
    a, la = py.blur_v(f, w)
    b, lb = cy.blur_v(np.ascontiguousarray(f), w)
    assert np.max(np.abs(a - b)) <= 1e-13
    assert la == pytest.approx(lb, abs=1e-13)
    assert a.sum() + la == pytest.approx(f.sum(), rel=1e-13)
