# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: product-grid sup evaluation and batched Aberth sweeps.

Semantics must match ``_ref`` (the NumPy fallback): same locking rules,
same flat-index convention, same guard behaviour.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport hypot, sqrt

cnp.import_array()

cdef double _EPS = 2.220446049250313e-16
cdef double _RES_FACTOR = 100.0


def grid_sup_abs(exps, coeffs, axes):
    """See ``deformkit._kernels._ref.grid_sup_abs``."""
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    axes = [np.ascontiguousarray(a, dtype=np.complex128) for a in axes]
    if any(a.size == 0 for a in axes):
        return 0.0, -1
    if coeffs.size == 0:
        return 0.0, 0

    cdef Py_ssize_t L = len(axes)
    cdef cnp.ndarray[cnp.int64_t, ndim=2] E = exps
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] C = coeffs
    cdef Py_ssize_t nterms = C.shape[0]

    last = axes[L - 1]
    g_last = np.unique(exps[:, L - 1])
    rows_np = np.searchsorted(g_last, exps[:, L - 1]).astype(np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] rows = rows_np
    cdef Py_ssize_t G = g_last.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] PL = last[:, None] ** g_last[None, :]
    cdef Py_ssize_t n_last = last.shape[0]

    # Padded power tables for the outer axes: pows[j, k, e] = axes[j][k]**e.
    cdef Py_ssize_t n_outer = L - 1
    cdef Py_ssize_t max_len = 1, max_exp = 0
    cdef Py_ssize_t j, k, t, r
    for j in range(n_outer):
        max_len = max(max_len, <Py_ssize_t> axes[j].shape[0])
        max_exp = max(max_exp, <Py_ssize_t> int(exps[:, j].max()))
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] pows = np.zeros(
        (max(n_outer, 1), max_len, max_exp + 1), dtype=np.complex128
    )
    cdef cnp.ndarray[cnp.int64_t, ndim=1] lens = np.ones(max(n_outer, 1), dtype=np.int64)
    for j in range(n_outer):
        a = axes[j]
        lens[j] = a.shape[0]
        pows[j, : a.shape[0], :] = a[:, None] ** np.arange(max_exp + 1)[None, :]

    cdef cnp.ndarray[cnp.complex128_t, ndim=1] acc = np.zeros(G, dtype=np.complex128)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] odo = np.zeros(max(n_outer, 1), dtype=np.int64)

    cdef Py_ssize_t outer_total = 1
    for j in range(n_outer):
        outer_total *= lens[j]

    cdef double best = -1.0, mag2, vr, vi
    cdef Py_ssize_t best_flat = 0
    cdef Py_ssize_t m, i
    cdef double complex v, val

    for m in range(outer_total):
        for r in range(G):
            acc[r] = 0
        for t in range(nterms):
            v = C[t]
            for j in range(n_outer):
                v = v * pows[j, odo[j], E[t, j]]
            acc[rows[t]] = acc[rows[t]] + v
        for k in range(n_last):
            val = 0
            for r in range(G):
                val = val + acc[r] * PL[k, r]
            vr = val.real
            vi = val.imag
            mag2 = vr * vr + vi * vi
            if mag2 > best:
                best = mag2
                best_flat = m * n_last + k
        # odometer over the outer axes, last outer axis fastest (C order)
        for j in range(n_outer - 1, -1, -1):
            odo[j] += 1
            if odo[j] < lens[j]:
                break
            odo[j] = 0

    return sqrt(best), int(best_flat)


def aberth_batch(coeffs, z0, double tol, int max_sweeps):
    """See ``deformkit._kernels._ref.aberth_batch``."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] ca = np.ascontiguousarray(
        coeffs, dtype=np.complex128
    )
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] z = np.array(
        z0, dtype=np.complex128, copy=True
    )
    cdef cnp.ndarray[cnp.float64_t, ndim=2] aa = np.abs(ca)
    cdef Py_ssize_t B = z.shape[0], m = z.shape[1], deg = ca.shape[1] - 1

    cdef cnp.ndarray[cnp.uint8_t, ndim=2] locked = np.zeros((B, m), dtype=np.uint8)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] sweeps = np.full(B, max_sweeps, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] row_done = np.zeros(B, dtype=np.uint8)

    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zt = np.zeros(m, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] w = np.zeros(m, dtype=np.complex128)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] res_lock = np.zeros(m, dtype=np.uint8)
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] step_lock = np.zeros(m, dtype=np.uint8)

    cdef Py_ssize_t b, i, jj, k, sweep
    cdef double complex p, dp, zi, diff, repulse, newton, denom, wv
    cdef double s, az
    cdef bint all_locked

    for sweep in range(max_sweeps):
        all_locked = True
        for b in range(B):
            if row_done[b]:
                continue
            for i in range(m):
                zt[i] = z[b, i]
            for i in range(m):
                res_lock[i] = 0
                step_lock[i] = 0
                w[i] = 0
                if locked[b, i]:
                    continue
                zi = zt[i]
                p = ca[b, deg]
                dp = 0
                s = aa[b, deg]
                az = hypot(zi.real, zi.imag)
                for k in range(deg - 1, -1, -1):
                    dp = dp * zi + p
                    p = p * zi + ca[b, k]
                    s = s * az + aa[b, k]
                if hypot(p.real, p.imag) <= _RES_FACTOR * _EPS * s:
                    res_lock[i] = 1
                    continue
                repulse = 0
                for jj in range(m):
                    if jj != i:
                        diff = zi - zt[jj]
                        if diff != 0:
                            repulse = repulse + 1.0 / diff
                if dp != 0:
                    newton = p / dp
                else:
                    newton = p
                denom = 1.0 - newton * repulse
                if denom != 0:
                    wv = newton / denom
                else:
                    wv = newton
                w[i] = wv
                if hypot(wv.real, wv.imag) <= tol * (1.0 + az):
                    step_lock[i] = 1
            for i in range(m):
                if locked[b, i]:
                    continue
                if not res_lock[i]:
                    z[b, i] = zt[i] - w[i]
                if res_lock[i] or step_lock[i]:
                    locked[b, i] = 1
            for i in range(m):
                if not locked[b, i]:
                    break
            else:
                row_done[b] = 1
                sweeps[b] = sweep + 1
            if not row_done[b]:
                all_locked = False
        if all_locked:
            break

    converged = locked.astype(bool).all(axis=1)
    return z, sweeps, converged
