"""All roots of a univariate complex polynomial, with residual certificates.

The solver runs simultaneous Aberth-Ehrlich sweeps from initial points on a
circle of radius one plus the Cauchy bound, rotated by a fixed irrational
angle to break the symmetry of polynomials like ``t**n - c``.  Roots lock
either when their correction is relatively tiny or when the residual falls
below the double-precision evaluation noise floor (which is as far as a
repeated root can be resolved).  A Newton polish pass follows; steps are
kept only when they reduce the residual.

Degrees above 64 are out of scope and rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .polynomials import SparsePoly

__all__ = [
    "UniPoly",
    "RootMultiset",
    "RootConvergenceError",
    "find_roots",
    "cluster_multiplicities",
    "MAX_DEGREE",
    "MAX_SWEEPS",
]

MAX_DEGREE = 64
MAX_SWEEPS = 200
# Fixed rotation (radians) applied to the initial circle of estimates.
INIT_ANGLE = math.sqrt(2.0)


class RootConvergenceError(RuntimeError):
    """Raised when the iteration cap is hit; carries the best iterate."""

    def __init__(self, message: str, best_roots, residual: float):
        super().__init__(message)
        self.best_roots = best_roots
        self.residual = residual


class UniPoly:
    """Univariate polynomial ``sum_i coeffs[i] * t**i`` with nonzero lead."""

    __slots__ = ("_coeffs",)

    def __init__(self, coeffs: Sequence[complex]):
        arr = np.asarray(list(coeffs), dtype=np.complex128)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("a univariate polynomial needs degree >= 1")
        if arr[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        if not np.all(np.isfinite(arr.view(np.float64))):
            raise ValueError("coefficients must be finite")
        if arr.size - 1 > MAX_DEGREE:
            raise ValueError(f"degree {arr.size - 1} exceeds the supported cap {MAX_DEGREE}")
        arr.setflags(write=False)
        object.__setattr__(self, "_coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @property
    def coeffs(self) -> np.ndarray:
        return self._coeffs

    @property
    def degree(self) -> int:
        return self._coeffs.size - 1

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in self._coeffs[::-1]:
            acc = acc * z + c
        return acc

    def deriv_at(self, z: complex) -> complex:
        acc = 0j
        n = self.degree
        for k in range(n, 0, -1):
            acc = acc * z + k * self._coeffs[k]
        return acc

    def __eq__(self, other) -> bool:
        return isinstance(other, UniPoly) and np.array_equal(self._coeffs, other._coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({list(self._coeffs)})"

    # Serializes as the single-variable case of the sparse-polynomial format.
    def to_sparse(self) -> SparsePoly:
        return SparsePoly(1, {(i,): c for i, c in enumerate(self._coeffs) if c != 0})

    @classmethod
    def from_sparse(cls, p: SparsePoly) -> "UniPoly":
        if p.nvars != 1:
            raise ValueError(f"expected a univariate polynomial, got nvars={p.nvars}")
        if p.is_zero():
            raise ValueError("zero polynomial has no roots to find")
        deg = p.total_degree()
        if deg < 1:
            raise ValueError("degree must be >= 1")
        coeffs = [0j] * (deg + 1)
        for (i,), c in p.terms.items():
            coeffs[i] = c
        return cls(coeffs)

    def to_json_dict(self) -> dict:
        return self.to_sparse().to_json_dict()

    @classmethod
    def from_json_dict(cls, data) -> "UniPoly":
        return cls.from_sparse(SparsePoly.from_json_dict(data))


@dataclass(frozen=True)
class RootMultiset:
    """Roots of a polynomial, counted with multiplicity.

    ``residual_bound`` is the max of ``|p(root)|`` over the listed values,
    scaled by ``max(1, max|coeff|)``.
    """

    roots: tuple[tuple[complex, int], ...]
    residual_bound: float
    poly: UniPoly | None = field(default=None, compare=False)

    def __post_init__(self):
        if any(m < 1 for _, m in self.roots):
            raise ValueError("multiplicities must be positive")

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.roots)

    def values(self) -> list[complex]:
        """Roots expanded by multiplicity."""
        out: list[complex] = []
        for v, m in self.roots:
            out.extend([v] * m)
        return out


def _initial_points_batch(coeffs: np.ndarray) -> np.ndarray:
    """Perturbed-circle estimates: Cauchy-bound radius, fixed rotation."""
    m = coeffs.shape[1] - 1
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.abs(coeffs[:, :-1] / coeffs[:, -1:])
    cauchy = 1.0 + ratios.max(axis=1)
    phases = np.exp(1j * (2.0 * np.pi * np.arange(m) / m + INIT_ANGLE))
    return cauchy[:, None] * phases[None, :]


def _polish_batch(coeffs: np.ndarray, roots: np.ndarray, steps: int = 2):
    """Newton steps kept only when they reduce |p|; returns roots, |p(root)|."""
    res = _eval_batch(coeffs, roots)
    for _ in range(steps):
        p, dp = _eval_deriv_batch(coeffs, roots)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = np.where(dp != 0, p / np.where(dp != 0, dp, 1.0), 0.0)
        cand = roots - step
        cand_res = _eval_batch(coeffs, cand)
        better = cand_res < res
        roots = np.where(better, cand, roots)
        res = np.where(better, cand_res, res)
    return roots, res


def _eval_batch(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    deg = coeffs.shape[1] - 1
    p = np.broadcast_to(coeffs[:, deg : deg + 1], z.shape).copy()
    for k in range(deg - 1, -1, -1):
        p = p * z + coeffs[:, k : k + 1]
    return np.abs(p)


def _eval_deriv_batch(coeffs: np.ndarray, z: np.ndarray):
    deg = coeffs.shape[1] - 1
    p = np.broadcast_to(coeffs[:, deg : deg + 1], z.shape).copy()
    dp = np.zeros_like(z)
    for k in range(deg - 1, -1, -1):
        dp = dp * z + p
        p = p * z + coeffs[:, k : k + 1]
    return p, dp


def solve_batch(coeffs: np.ndarray, tol: float = 1e-12):
    """Root-find a batch of same-degree polynomials (ascending coefficients).

    Returns ``(roots (B, m), residuals (B, m), converged (B,))``.  Rows are
    independent; used heavily by hypersurface sampling.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    z0 = _initial_points_batch(coeffs)
    roots, _, converged = _kernels.aberth_batch(coeffs, z0, tol, MAX_SWEEPS)
    roots, res = _polish_batch(coeffs, roots)
    return roots, res, converged


def find_roots(p: UniPoly, tol: float = 1e-12) -> RootMultiset:
    """All ``degree`` roots of ``p``, each with multiplicity 1.

    Raises
    ------
    RootConvergenceError
        If some root is still moving after the sweep cap; the exception
        carries the best iterate and its residual.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    roots_b, res_b, conv_b = solve_batch(p.coeffs[None, :], tol)
    roots, res, converged = roots_b[0], res_b[0], bool(conv_b[0])
    scale = max(1.0, float(np.max(np.abs(p.coeffs))))
    residual_bound = float(np.max(res)) / scale
    if not converged:
        raise RootConvergenceError(
            f"root iteration did not converge within {MAX_SWEEPS} sweeps "
            f"(residual {residual_bound:.3e})",
            best_roots=[complex(z) for z in roots],
            residual=residual_bound,
        )
    # Deterministic presentation order: by (real, imag).
    order = np.lexsort((roots.imag, roots.real))
    listed = tuple((complex(roots[i]), 1) for i in order)
    return RootMultiset(roots=listed, residual_bound=residual_bound, poly=p)


def cluster_multiplicities(r: RootMultiset, radius: float = 1e-6) -> RootMultiset:
    """Merge single-linkage clusters of roots within ``radius``.

    Each cluster becomes one root at the multiplicity-weighted centroid with
    multiplicity equal to the cluster's total; the overall multiplicity is
    preserved.  The clustering radius is caller-controlled because the right
    value depends on how strongly repeated roots split under rounding.
    """
    if radius <= 0:
        raise ValueError(f"radius must be positive, got {radius}")
    entries = list(r.roots)
    n = len(entries)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(entries[i][0] - entries[j][0]) <= radius:
                parent[find(i)] = find(j)

    groups: dict[int, list[tuple[complex, int]]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(entries[i])

    merged = []
    for members in groups.values():
        total = sum(m for _, m in members)
        centroid = sum(v * m for v, m in members) / total
        merged.append((centroid, total))
    merged.sort(key=lambda vm: (vm[0].real, vm[0].imag))

    if r.poly is not None:
        scale = max(1.0, float(np.max(np.abs(r.poly.coeffs))))
        bound = max((abs(r.poly(v)) for v, _ in merged), default=0.0) / scale
    else:
        bound = r.residual_bound
    return RootMultiset(roots=tuple(merged), residual_bound=bound, poly=r.poly)
