"""Hot numeric loops, each in a numba and a pure-numpy flavour.

The numba versions are used when numba imports cleanly and the
environment variable ``POLYMULT_DISABLE_NUMBA`` is unset (or ``0``).  Both
flavours are always importable by name (``*_numba`` / ``*_numpy``) so they
can be cross-checked and benchmarked against each other.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA and os.environ.get("POLYMULT_DISABLE_NUMBA", "0") in ("", "0")

_CHUNK = 1 << 18


# -- box scan ---------------------------------------------------------------


def _scan_box_py(V, offs, lo, hi, out, count_only):
    n = lo.shape[0]
    r = V.shape[0]
    x = lo.copy()
    slack = np.empty(r, dtype=np.int64)
    count = 0
    if n == 0:
        return 0
    for j in range(n):
        if hi[j] < lo[j]:
            return 0
    while True:
        ok = True
        for i in range(r):
            s = offs[i]
            for j in range(n):
                s += V[i, j] * x[j]
            slack[i] = s
            if s < 0:
                ok = False
                break
        if ok:
            if not count_only:
                for j in range(n):
                    out[count, j] = x[j]
            count += 1
        # odometer, last coordinate fastest -> lexicographic order
        j = n - 1
        while j >= 0:
            x[j] += 1
            if x[j] <= hi[j]:
                break
            x[j] = lo[j]
            j -= 1
        if j < 0:
            return count


if HAVE_NUMBA:
    _scan_box_jit = njit(cache=True)(_scan_box_py)


def scan_box_numba(V, offs, lo, hi):
    """Integer points ``x`` in the box ``[lo, hi]`` with ``V x + offs >= 0``.

    Points come back in lexicographic order as an ``(N, n)`` int64 array.
    """
    V, offs, lo, hi = _i64(V), _i64(offs), _i64(lo), _i64(hi)
    dummy = np.empty((0, lo.shape[0]), dtype=np.int64)
    count = _scan_box_jit(V, offs, lo, hi, dummy, True)
    out = np.empty((count, lo.shape[0]), dtype=np.int64)
    _scan_box_jit(V, offs, lo, hi, out, False)
    return out


def scan_box_numpy(V, offs, lo, hi):
    V, offs, lo, hi = _i64(V), _i64(offs), _i64(lo), _i64(hi)
    n = lo.shape[0]
    if n == 0 or np.any(hi < lo):
        return np.empty((0, n), dtype=np.int64)
    shape = tuple(int(s) for s in hi - lo + 1)
    total = int(np.prod(shape, dtype=object))
    pieces = []
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        pts = np.stack(np.unravel_index(flat, shape), axis=1) + lo
        keep = np.all(pts @ V.T + offs >= 0, axis=1)
        pieces.append(pts[keep])
    return np.concatenate(pieces, axis=0)


# -- potential on a grid ------------------------------------------------------


def _grid_argmin_py(V, offs, lo, step, counts):
    """Minimize sum c_i ln c_i over a strictly interior 2-D grid."""
    r = V.shape[0]
    best = np.inf
    bi = -1
    bj = -1
    for a in range(counts[0]):
        x0 = lo[0] + a * step
        for b in range(counts[1]):
            x1 = lo[1] + b * step
            total = 0.0
            inside = True
            for i in range(r):
                c = V[i, 0] * x0 + V[i, 1] * x1 + offs[i]
                if c <= 0.0:
                    inside = False
                    break
                total += c * np.log(c)
            if inside and total < best:
                best = total
                bi = a
                bj = b
    return best, bi, bj


if HAVE_NUMBA:
    _grid_argmin_jit = njit(cache=True)(_grid_argmin_py)


def grid_argmin_numba(V, offs, lo, step, counts):
    best, bi, bj = _grid_argmin_jit(_f64(V), _f64(offs), _f64(lo), float(step), _i64(counts))
    return best, (int(bi), int(bj))


def grid_argmin_numpy(V, offs, lo, step, counts):
    V, offs, lo, counts = _f64(V), _f64(offs), _f64(lo), _i64(counts)
    xs1 = lo[1] + np.arange(counts[1]) * step
    best, arg = np.inf, (-1, -1)
    rows = max(1, _CHUNK // max(1, int(counts[1])))
    for a0 in range(0, int(counts[0]), rows):
        xs0 = lo[0] + np.arange(a0, min(a0 + rows, int(counts[0]))) * step
        c = (
            V[:, 0, None, None] * xs0[None, :, None]
            + V[:, 1, None, None] * xs1[None, None, :]
            + offs[:, None, None]
        )
        inside = np.all(c > 0.0, axis=0)
        with np.errstate(divide="ignore", invalid="ignore"):
            vals = np.where(inside, np.sum(np.where(c > 0.0, c * np.log(np.where(c > 0.0, c, 1.0)), 0.0), axis=0), np.inf)
        flat = int(np.argmin(vals))
        i, j = np.unravel_index(flat, vals.shape)
        if vals[i, j] < best:
            best, arg = float(vals[i, j]), (a0 + int(i), int(j))
    return best, arg


# -- Gaussian quadratic form --------------------------------------------------


def _quad_forms_py(X, Q):
    N, d = X.shape
    out = np.empty(N)
    for t in range(N):
        s = 0.0
        for j in range(d):
            xj = X[t, j]
            for l in range(d):
                s += xj * Q[j, l] * X[t, l]
        out[t] = s
    return out


if HAVE_NUMBA:
    _quad_forms_jit = njit(cache=True)(_quad_forms_py)


def quad_forms_numba(X, Q):
    """Row-wise ``x^T Q x`` for an ``(N, d)`` array."""
    return _quad_forms_jit(_f64(X).reshape(len(X), -1), _f64(Q).reshape(len(Q), -1))


def quad_forms_numpy(X, Q):
    X = _f64(X).reshape(len(X), -1)
    return np.einsum("ij,jk,ik->i", X, _f64(Q).reshape(len(Q), -1), X)


def _i64(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def _f64(a):
    return np.ascontiguousarray(a, dtype=np.float64)


if USE_NUMBA:
    scan_box = scan_box_numba
    grid_argmin = grid_argmin_numba
    quad_forms = quad_forms_numba
else:
    scan_box = scan_box_numpy
    grid_argmin = grid_argmin_numpy
    quad_forms = quad_forms_numpy

BACKEND = "numba" if USE_NUMBA else "numpy"
