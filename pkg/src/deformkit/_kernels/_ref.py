"""NumPy implementations of the hot kernels.

Selected at import time when the compiled extension is unavailable (or
forced via ``DEFORMKIT_PURE_PY=1``).  Must stay semantically interchangeable
with ``_fast``: same arguments, same locking rules, same tie conventions.
"""

import numpy as np

_EPS = float(np.finfo(np.float64).eps)
# Residual lock: accept a root once |p(z)| is below this multiple of the
# evaluation noise floor sum_k |a_k| |z|^k * eps.
_RES_FACTOR = 100.0
# Max number of grid points materialized at once by grid_sup_abs.
_OUTER_LIMIT = 1 << 21
# Per-chunk value count: ~16 MB of complex128 keeps the gemm/abs passes in cache.
_CHUNK_ELEMS = 1 << 20


def grid_sup_abs(exps, coeffs, axes):
    """Supremum of |sum_t coeffs[t] * prod_j axes[j][k_j]**exps[t, j]| over
    the Cartesian product of the axis value arrays.

    Returns ``(sup, flat_index)`` where ``flat_index`` is a C-order index
    over ``(k_0, ..., k_{L-1})`` (last axis fastest) attaining the supremum,
    or ``-1`` when the grid is empty.
    """
    exps = np.ascontiguousarray(exps, dtype=np.int64)
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    axes = [np.ascontiguousarray(a, dtype=np.complex128) for a in axes]
    if any(a.size == 0 for a in axes):
        return 0.0, -1
    if coeffs.size == 0:
        return 0.0, 0
    mag2, flat = _sup_recurse(exps, coeffs, axes)
    return float(np.sqrt(mag2)), int(flat)


def _sup_recurse(exps, coeffs, axes):
    sizes = [a.size for a in axes]
    outer = 1
    for s in sizes[:-1]:
        outer *= s
    if len(axes) > 1 and outer > _OUTER_LIMIT:
        # Peel the first axis and recurse so the materialized outer grid
        # stays bounded.
        tail = int(np.prod(sizes[1:], dtype=np.int64))
        best = (-1.0, -1)
        for k, v in enumerate(axes[0]):
            sub_coeffs = coeffs * v ** exps[:, 0]
            mag2, flat = _sup_recurse(exps[:, 1:], sub_coeffs, axes[1:])
            if mag2 > best[0]:
                best = (mag2, k * tail + flat)
        return best
    return _sup_gemm(exps, coeffs, axes)


def _sup_gemm(exps, coeffs, axes):
    last = axes[-1]
    n_last = last.size
    g_last = np.unique(exps[:, -1])
    rows = np.searchsorted(g_last, exps[:, -1])

    outer_axes = axes[:-1]
    outer = 1
    for a in outer_axes:
        outer *= a.size

    # partial[r, m] = sum of coeffs[t] * outer-monomial(t, m) over terms t
    # whose last-axis exponent is g_last[r].
    partial = np.zeros((g_last.size, outer), dtype=np.complex128)
    for t in range(coeffs.size):
        vec = np.asarray(coeffs[t])
        for j, a in enumerate(outer_axes):
            vec = np.multiply.outer(vec, a ** exps[t, j])
        partial[rows[t]] += vec.ravel()

    pow_last = last[:, None] ** g_last[None, :]

    best_mag2 = -1.0
    best_flat = 0
    chunk = max(1, _CHUNK_ELEMS // max(outer, 1))
    for start in range(0, n_last, chunk):
        vals = pow_last[start : start + chunk] @ partial
        mag2 = vals.real**2
        mag2 += vals.imag**2
        top = float(mag2.max())
        if top > best_mag2:
            best_mag2 = top
            kk, m = divmod(int(np.argmax(mag2)), outer)
            best_flat = m * n_last + (start + kk)
    return best_mag2, best_flat


def aberth_batch(coeffs, z0, tol, max_sweeps):
    """Simultaneous root iteration for a batch of same-degree polynomials.

    Parameters
    ----------
    coeffs : (B, m+1) complex128
        Ascending coefficients (index = power), leading entries nonzero.
    z0 : (B, m) complex128
        Initial root estimates.
    tol : float
        Relative correction tolerance for locking a root.
    max_sweeps : int
        Iteration cap; rows still moving afterwards report unconverged.

    Returns
    -------
    roots : (B, m) complex128
    sweeps : (B,) int64   sweeps used per row
    converged : (B,) bool
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z = np.array(z0, dtype=np.complex128, copy=True)
    B, m = z.shape
    abs_coeffs = np.abs(coeffs)

    locked = np.zeros((B, m), dtype=bool)
    sweeps = np.full(B, max_sweeps, dtype=np.int64)
    active_rows = np.arange(B)

    for sweep in range(max_sweeps):
        if active_rows.size == 0:
            break
        zc = z[active_rows]
        lc = locked[active_rows]
        ca = coeffs[active_rows]
        aa = abs_coeffs[active_rows]

        p, dp, s = _horner_all(ca, aa, zc)

        res_lock = ~lc & (np.abs(p) <= _RES_FACTOR * _EPS * s)

        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            diff = zc[:, :, None] - zc[:, None, :]
            inv = np.where(diff != 0, 1.0 / diff, 0.0)
            inv[:, np.arange(m), np.arange(m)] = 0.0
            repulse = inv.sum(axis=2)
            newton = np.where(dp != 0, p / np.where(dp != 0, dp, 1.0), p)
            denom = 1.0 - newton * repulse
            w = np.where(denom != 0, newton / np.where(denom != 0, denom, 1.0), newton)

        step_lock = ~lc & ~res_lock & (np.abs(w) <= tol * (1.0 + np.abs(zc)))
        move = ~lc & ~res_lock
        zc = np.where(move, zc - w, zc)
        lc = lc | res_lock | step_lock

        z[active_rows] = zc
        locked[active_rows] = lc

        done = lc.all(axis=1)
        sweeps[active_rows[done]] = sweep + 1
        active_rows = active_rows[~done]

    converged = locked.all(axis=1)
    return z, sweeps, converged


def _horner_all(coeffs, abs_coeffs, z):
    """Evaluate p, p' and the noise scale sum |a_k| |z|^k at each root."""
    deg = coeffs.shape[1] - 1
    az = np.abs(z)
    p = np.broadcast_to(coeffs[:, deg : deg + 1], z.shape).copy()
    s = np.broadcast_to(abs_coeffs[:, deg : deg + 1], z.shape).copy()
    dp = np.zeros_like(z)
    for k in range(deg - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[:, k : k + 1]
        s = s * az + abs_coeffs[:, k : k + 1]
    return p, dp, s
