"""Pure-numpy phase-space kernels (fallback for the compiled extension).

Semantics shared with the Cython twin:

* ``advect_x`` -- conservative semi-Lagrangian remap along axis 0 (periodic),
  piecewise-linear reconstruction with central slopes, per-column real shift.
* ``deposit_affine`` -- remap along axis 1 under v -> a*v + b[i], depositing
  each cell onto 3 neighbours with weights that preserve the 0th, 1st and 2nd
  velocity moments exactly.  Values leaving the grid are returned as loss.
* ``blur_v`` -- correlation along axis 1 with a short non-negative-sum kernel;
  values pushed off the grid are returned as loss.
"""

import numpy as np


def advect_x(f, shifts):
    """Shift column j of f by shifts[j] cells along (periodic) axis 0."""
    f = np.asarray(f, dtype=float)
    n = f.shape[0]
    s = np.asarray(shifts, dtype=float)
    q = np.floor(s).astype(np.int64)
    theta = s - q
    slope = 0.5 * (np.roll(f, -1, axis=0) - np.roll(f, 1, axis=0))
    rows = np.arange(n)[:, None]
    left = (rows - q[None, :] - 1) % n
    right = (rows - q[None, :]) % n
    f_l = np.take_along_axis(f, left, axis=0)
    f_r = np.take_along_axis(f, right, axis=0)
    s_l = np.take_along_axis(slope, left, axis=0)
    s_r = np.take_along_axis(slope, right, axis=0)
    th = theta[None, :]
    return th * (f_l + s_l * (1.0 - th) / 2.0) + (1.0 - th) * (f_r - s_r * th / 2.0)


def deposit_affine(f, a, b, v0, dv):
    """Conservative moment-exact remap of axis 1 under v -> a*v + b[row]."""
    f = np.asarray(f, dtype=float)
    nx, nv = f.shape
    v = v0 + dv * np.arange(nv)
    y = a * v[None, :] + np.asarray(b, dtype=float)[:, None]
    p = (y - v0) / dv
    c = np.floor(p + 0.5).astype(np.int64)  # half-up, matching the C twin
    d = p - c
    w = np.empty((3, nx, nv))
    w[0] = 0.5 * (d * d - d)
    w[1] = 1.0 - d * d
    w[2] = 0.5 * (d * d + d)
    out = np.zeros_like(f)
    loss = 0.0
    rows = np.broadcast_to(np.arange(nx)[:, None], (nx, nv))
    for k in range(3):
        cols = c + (k - 1)
        ok = (cols >= 0) & (cols < nv)
        vals = w[k] * f
        np.add.at(out, (rows[ok], cols[ok]), vals[ok])
        loss += float(vals[~ok].sum())
    return out, loss


def blur_v(f, weights):
    """Correlate axis 1 with a centered kernel of odd length."""
    f = np.asarray(f, dtype=float)
    w = np.asarray(weights, dtype=float)
    half = (len(w) - 1) // 2
    nv = f.shape[1]
    out = np.zeros_like(f)
    loss = 0.0
    for k in range(-half, half + 1):
        wk = w[k + half]
        if wk == 0.0:
            continue
        if k >= 0:
            out[:, k:] += wk * f[:, : nv - k] if k else wk * f
            if k:
                loss += wk * float(f[:, nv - k:].sum())
        else:
            out[:, :k] += wk * f[:, -k:]
            loss += wk * float(f[:, :-k].sum())
    return out, loss
