"""Escape-time kernels for z -> z^2 + c over a block of pixel rows.

Two implementations compute bit-identical results:

* ``escape_block_numba`` -- a scalar loop compiled with ``numba.njit``
  (``nogil`` so row blocks can run on threads);
* ``escape_block_numpy`` -- a vectorized loop that only touches pixels still
  iterating.

``escape_block`` is the numba kernel unless numba is missing or the
environment variable ``SECTORREN_NO_NUMBA`` is set to a non-empty value
other than ``0``.

Pixel ``(i, j)`` of a ``W x H`` grid with pixel size ``px`` sits at
``x = cx + ((2j + 1 - W)/2) px`` and ``y = cy + ((H - 1 - 2i)/2) px``; row 0 is
the top.  The escape count is the first ``n`` with ``|z_n| > bailout``
(``z_0`` included); orbits that stay bounded through ``z_max_iter`` record
``max_iter``.
"""
from __future__ import annotations

import os

import numpy as np

MODE_MANDELBROT = 0
MODE_JULIA = 1


def _numba_disabled() -> bool:
    flag = os.environ.get("SECTORREN_NO_NUMBA", "")
    return flag not in ("", "0")


def escape_block_numpy(mode, cx, cy, px, width, height, row0, row1, cr, ci, max_iter, bailout,
                       iters, escaped, magnitude):
    rows = np.arange(row0, row1, dtype=np.float64)
    cols = np.arange(width, dtype=np.float64)
    xs = cx + (0.5 * (2.0 * cols + 1.0 - width)) * px
    ys = cy + (0.5 * (height - 1.0 - 2.0 * rows)) * px
    X, Y = np.meshgrid(xs, ys)
    X, Y = X.ravel(), Y.ravel()
    if mode == MODE_JULIA:
        zx, zy = X.copy(), Y.copy()
        a = np.full_like(X, cr)
        b = np.full_like(X, ci)
    else:
        zx, zy = np.zeros_like(X), np.zeros_like(X)
        a, b = X, Y
    n_pix = X.size
    out_n = np.full(n_pix, max_iter, dtype=np.int32)
    out_e = np.zeros(n_pix, dtype=np.bool_)
    out_m = np.zeros(n_pix, dtype=np.float64)
    idx = np.arange(n_pix)
    for n in range(max_iter + 1):
        m = np.sqrt(zx * zx + zy * zy)
        gone = m > bailout
        if gone.any():
            hit = idx[gone]
            out_n[hit] = n
            out_e[hit] = True
            out_m[hit] = m[gone]
            keep = ~gone
            idx, zx, zy, a, b, m = idx[keep], zx[keep], zy[keep], a[keep], b[keep], m[keep]
            if idx.size == 0:
                break
        if n == max_iter:
            out_m[idx] = m
            break
        zx, zy = zx * zx - zy * zy + a, 2.0 * zx * zy + b
    iters[row0:row1, :] = out_n.reshape(row1 - row0, width)
    escaped[row0:row1, :] = out_e.reshape(row1 - row0, width)
    magnitude[row0:row1, :] = out_m.reshape(row1 - row0, width)


try:
    if _numba_disabled():
        raise ImportError("numba disabled by SECTORREN_NO_NUMBA")
    from numba import njit
except ImportError:  # pragma: no cover - exercised through the environment flag
    njit = None


if njit is not None:

    @njit(nogil=True, cache=True)
    def escape_block_numba(mode, cx, cy, px, width, height, row0, row1, cr, ci, max_iter, bailout,
                           iters, escaped, magnitude):
        near = bailout * bailout * (1.0 - 1e-12)
        for i in range(row0, row1):
            y = cy + (0.5 * (height - 1.0 - 2.0 * i)) * px
            for j in range(width):
                x = cx + (0.5 * (2.0 * j + 1.0 - width)) * px
                if mode == MODE_JULIA:
                    zx, zy, a, b = x, y, cr, ci
                else:
                    zx, zy, a, b = 0.0, 0.0, x, y
                n = 0
                gone = False
                while True:
                    xx = zx * zx
                    yy = zy * zy
                    r2 = xx + yy
                    # the square root decides only near the bailout circle
                    if r2 > near and np.sqrt(r2) > bailout:
                        gone = True
                        break
                    if n == max_iter:
                        break
                    zy = 2.0 * zx * zy + b
                    zx = xx - yy + a
                    n += 1
                m = np.sqrt(zx * zx + zy * zy)
                iters[i, j] = n
                escaped[i, j] = gone
                magnitude[i, j] = m

    escape_block = escape_block_numba
    BACKEND = "numba"
else:
    escape_block_numba = None
    escape_block = escape_block_numpy
    BACKEND = "numpy"
