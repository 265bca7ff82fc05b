"""Zero sets of polynomials on a bounded window, and their deformations.

The window is the complex hypercube ``H(T)`` of sup-norm radius ``T``.  A
complex grid axis is the Cartesian product of uniform real grids on the
real and imaginary parts over ``[-T, T]`` (``resolution`` points per real
axis), restricted to modulus at most ``T``; full grids are products of such
axes, so membership in ``H(T)`` factors per coordinate.

Quantitative deformation bound: if every coefficient of ``g`` is strictly
within ``delta_bound(eps, T, d, support_size)`` of ``f``'s, then
``|g - f| < eps`` everywhere on ``H(T)`` (``lemma_check`` verifies the
supremum numerically), and consequently the zero set of ``f`` inside
``H(T)`` stays inside the eps-sublevel set of ``g`` (``containment_check``).

Zero sets are sampled fiberwise: fixing all coordinates but one on a grid
leaves a univariate polynomial per fiber, solved in one batched sweep.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .jets import (
    INFINITE,
    Jet,
    JetPoly,
    ST_MATCH_TOL,
    jet_align_roots,
    st_poly,
    standard_part,
)
from .polynomials import (
    PolySystem,
    SparsePoly,
    coeff_sup_distance,
    degree_and_support,
)
from .roots import UniPoly, solve_batch

__all__ = [
    "Hypercube",
    "SampleCloud",
    "complex_grid_axis",
    "v_eps_member",
    "delta_bound",
    "lemma_check",
    "LemmaReport",
    "sample_hypersurface",
    "containment_check",
    "ContainmentReport",
    "system_residual",
    "variety_jet_check",
    "VarietyJetReport",
    "classify_jet_point",
    "lipschitz_bound",
    "eval_at_points",
    "DEGENERATE_LEAD_TOL",
]

# A fiber's leading coefficient below this is treated as a degree drop and
# the fiber is skipped (and counted), never interpolated.
DEGENERATE_LEAD_TOL = 1e-12


@dataclass(frozen=True)
class Hypercube:
    """Closed sup-norm ball of radius T in n complex dimensions."""

    T: float
    n: int

    def __post_init__(self):
        if self.T <= 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")

    def contains(self, point: Sequence[complex]) -> bool:
        if len(point) != self.n:
            raise ValueError(f"point has dimension {len(point)}, expected {self.n}")
        return max(abs(complex(z)) for z in point) <= self.T


def complex_grid_axis(T: float, resolution: int) -> np.ndarray:
    """Grid values for one complex coordinate, C-ordered by (re, im) index."""
    if T <= 0:
        raise ValueError(f"T must be positive, got {T}")
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    g = np.linspace(-T, T, resolution)
    re, im = np.meshgrid(g, g, indexing="ij")
    vals = (re + 1j * im).ravel()
    return vals[np.abs(vals) <= T * (1.0 + 1e-12)]


class SampleCloud:
    """Finite set of points in C^n with provenance."""

    __slots__ = ("points", "label", "meta")

    def __init__(self, points, label: str = "", meta: dict | None = None):
        arr = np.asarray(points, dtype=np.complex128)
        if arr.ndim != 2:
            raise ValueError("points must be a 2-D array of shape (count, n)")
        arr.setflags(write=False)
        object.__setattr__(self, "points", arr)
        object.__setattr__(self, "label", str(label))
        object.__setattr__(self, "meta", dict(meta or {}))

    def __setattr__(self, name, value):
        raise AttributeError("SampleCloud is immutable")

    @property
    def n(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = []
        for j in range(self.n):
            header += [f"re_{j + 1}", f"im_{j + 1}"]
        writer.writerow(header)
        for row in self.points:
            flat = []
            for z in row:
                flat += [repr(float(z.real)), repr(float(z.imag))]
            writer.writerow(flat)
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, label: str = "") -> "SampleCloud":
        rows = list(csv.reader(io.StringIO(text)))
        if not rows:
            raise ValueError("empty CSV")
        header = rows[0]
        if len(header) % 2 or not header or header[0] != "re_1":
            raise ValueError(f"unexpected CSV header {header!r}")
        n = len(header) // 2
        pts = []
        for row in rows[1:]:
            if not row:
                continue
            if len(row) != 2 * n:
                raise ValueError(f"row of width {len(row)}, expected {2 * n}")
            vals = [float(x) for x in row]
            pts.append([complex(vals[2 * j], vals[2 * j + 1]) for j in range(n)])
        arr = np.asarray(pts, dtype=np.complex128).reshape(len(pts), n)
        return cls(arr, label=label)


# -- pointwise membership and the quantitative bound -------------------------


def v_eps_member(g: SparsePoly, w: Sequence[complex], eps: float) -> bool:
    """True iff |g(w)| < eps (strict)."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return abs(g.evaluate(w)) < eps


def delta_bound(eps: float, T: float, d: int, support_size: int) -> float:
    """Exclusive coefficient budget eps / (T**d * support_size).

    Any deformation strictly below this bound moves values on the radius-T
    hypercube by less than eps: each of the ``support_size`` monomials is
    bounded by ``T**d`` there.  Requires ``T >= 1`` (so lower-degree
    monomials are also covered by ``T**d``).
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if T < 1:
        raise ValueError(f"the bound requires T >= 1, got {T}")
    if d < 0:
        raise ValueError(f"degree must be >= 0, got {d}")
    if support_size < 1:
        raise ValueError(f"support_size must be >= 1, got {support_size}")
    return eps / (float(T) ** d * support_size)


def _require_deformation_within(f: SparsePoly, g: SparsePoly, limit: float) -> float:
    """Check the strict coefficient bound, naming the worst offender."""
    if f.nvars != g.nvars:
        raise ValueError(f"variable count mismatch: {f.nvars} vs {g.nvars}")
    ft, gt = f.terms, g.terms
    worst_idx, worst = None, -1.0
    for idx in ft.keys() | gt.keys():
        dv = abs(gt.get(idx, 0j) - ft.get(idx, 0j))
        if dv > worst:
            worst_idx, worst = idx, dv
    if worst >= limit:
        raise ValueError(
            f"coefficient at {worst_idx} deviates by {worst:.6g}, "
            f"not strictly below the bound {limit:.6g}"
        )
    return worst


def _union_degree_and_support(f: SparsePoly, g: SparsePoly) -> tuple[int, int]:
    """Degree and size of the common (union) support of the pair.

    The quantitative bound indexes both polynomials by one support set;
    comparing polynomials with different supports therefore uses the union
    with zero-filled missing coefficients.
    """
    idxs = f.terms.keys() | g.terms.keys()
    if not idxs:
        raise ValueError("both polynomials are zero")
    return max(sum(i) for i in idxs), len(idxs)


def _term_arrays(p: SparsePoly):
    items = p.sorted_terms()
    if not items:
        return np.zeros((0, p.nvars), dtype=np.int64), np.zeros(0, dtype=np.complex128)
    exps = np.array([idx for idx, _ in items], dtype=np.int64)
    coeffs = np.array([c for _, c in items], dtype=np.complex128)
    return exps, coeffs


def _decode_flat(flat: int, axes: list[np.ndarray]) -> tuple[complex, ...]:
    idx = []
    for a in reversed(axes):
        flat, k = divmod(flat, a.size)
        idx.append(a[k])
    return tuple(reversed(idx))


@dataclass(frozen=True)
class LemmaReport:
    eps: float
    T: float
    grid: int
    delta_limit: float
    coeff_distance: float
    sup_deviation: float
    argmax_point: tuple[complex, ...]
    points_checked: int
    passed: bool

    def to_json_dict(self) -> dict:
        return {
            "eps": self.eps,
            "T": self.T,
            "grid": self.grid,
            "delta_limit": self.delta_limit,
            "coeff_distance": self.coeff_distance,
            "sup_deviation": self.sup_deviation,
            "argmax_point": [{"re": z.real, "im": z.imag} for z in self.argmax_point],
            "points_checked": self.points_checked,
            "passed": self.passed,
        }


def lemma_check(
    f: SparsePoly, g: SparsePoly, T: float, eps: float, grid: int = 21
) -> LemmaReport:
    """Measure sup |g - f| over the gridded hypercube and compare with eps.

    Requires ``g`` to deviate strictly below ``delta_bound`` per coefficient
    (violations raise, naming the offending term); under that hypothesis the
    reported supremum is guaranteed below eps.  The bound's degree and
    support size come from the union support of the pair.
    """
    if f.is_zero():
        raise ValueError("the base polynomial must be nonzero")
    d, support = _union_degree_and_support(f, g)
    limit = delta_bound(eps, T, d, support)
    dist = _require_deformation_within(f, g, limit)
    diff = g - f
    axis = complex_grid_axis(T, grid)
    axes = [axis] * f.nvars
    exps, coeffs = _term_arrays(diff)
    sup, flat = _kernels.grid_sup_abs(exps, coeffs, axes)
    point = _decode_flat(max(flat, 0), axes)
    total = axis.size**f.nvars
    return LemmaReport(
        eps=eps,
        T=T,
        grid=grid,
        delta_limit=limit,
        coeff_distance=dist,
        sup_deviation=sup,
        argmax_point=point,
        points_checked=total,
        passed=sup < eps,
    )


# -- zero-set sampling ---------------------------------------------------------


def _grid_values(exps: np.ndarray, coeffs: np.ndarray, axes: list[np.ndarray]) -> np.ndarray:
    """Polynomial values over the product grid, flattened in C order."""
    M = 1
    for a in axes:
        M *= a.size
    if M > 50_000_000:
        raise ValueError(f"grid of {M} points is too large; lower the resolution")
    vals = np.zeros(M, dtype=np.complex128)
    for t in range(coeffs.size):
        vec = np.asarray(coeffs[t])
        for j, a in enumerate(axes):
            vec = np.multiply.outer(vec, a ** exps[t, j])
        vals += vec.ravel()
    return vals


def eval_at_points(p: SparsePoly, points: np.ndarray) -> np.ndarray:
    """Vectorized evaluation at an (M, n) array of points."""
    pts = np.asarray(points, dtype=np.complex128)
    if pts.ndim != 2 or pts.shape[1] != p.nvars:
        raise ValueError(f"points must have shape (M, {p.nvars})")
    vals = np.zeros(pts.shape[0], dtype=np.complex128)
    for idx, c in p.sorted_terms():
        mono = np.full(pts.shape[0], c, dtype=np.complex128)
        for j, e in enumerate(idx):
            if e:
                mono *= pts[:, j] ** e
        vals += mono
    return vals


def sample_hypersurface(
    f: SparsePoly,
    T: float,
    axis: int,
    grid: int = 21,
    tol: float = 1e-8,
) -> SampleCloud:
    """Finite stand-in for the zero set of ``f`` inside the radius-T hypercube.

    For every grid assignment of the other coordinates, the polynomial is
    specialized to the 1-based ``axis`` variable and solved; roots of modulus
    at most ``T`` whose full residual ``|f(z)|`` stays within ``tol`` times
    the documented scale are kept.  Fibers whose leading coefficient
    collapses (degree drop) are skipped and counted in ``meta``, as are
    fibers where the solver failed to converge.
    """
    if f.is_zero():
        raise ValueError("cannot sample the zero polynomial")
    n = f.nvars
    if not 1 <= axis <= n:
        raise ValueError(f"axis must be in 1..{n}, got {axis}")
    j = axis - 1
    m = f.degree_in(j)
    if m < 1:
        raise ValueError(f"polynomial is constant in axis {axis}")
    d, support = degree_and_support(f)
    scale = 1.0 + f.coeff_inf_norm() * support * float(max(T, 1.0)) ** d

    other = [k for k in range(n) if k != j]
    axis_vals = complex_grid_axis(T, grid)
    fiber_axes = [axis_vals] * len(other)
    fibers = 1
    for a in fiber_axes:
        fibers *= a.size

    # Specialized coefficients c_k over the fiber grid: c_k collects the
    # terms whose axis exponent is k, as a polynomial in the other variables.
    C = np.zeros((fibers, m + 1), dtype=np.complex128)
    for k in range(m + 1):
        sel = [(idx, c) for idx, c in f.sorted_terms() if idx[j] == k]
        if not sel:
            continue
        if other:
            exps = np.array([[idx[o] for o in other] for idx, _ in sel], dtype=np.int64)
            coeffs = np.array([c for _, c in sel], dtype=np.complex128)
            C[:, k] = _grid_values(exps, coeffs, fiber_axes)
        else:
            C[:, k] = sum(c for _, c in sel)

    good = np.abs(C[:, m]) >= DEGENERATE_LEAD_TOL
    degenerate = int(fibers - good.sum())

    points = np.zeros((0, n), dtype=np.complex128)
    unconverged = 0
    max_residual = 0.0
    kept_count = 0
    if good.any():
        roots, res, converged = solve_batch(C[good])
        unconverged = int((~converged).sum())
        keep = (np.abs(roots) <= T * (1.0 + 1e-12)) & (res <= tol * scale)

        fiber_ids = np.nonzero(good)[0]
        if other:
            shape = tuple(a.size for a in fiber_axes)
            multi = np.unravel_index(fiber_ids, shape)
            fiber_coords = np.stack(
                [fiber_axes[q][multi[q]] for q in range(len(other))], axis=1
            )
        else:
            fiber_coords = np.zeros((1, 0), dtype=np.complex128)

        rows, cols = np.nonzero(keep)
        pts = np.zeros((rows.size, n), dtype=np.complex128)
        for q, o in enumerate(other):
            pts[:, o] = fiber_coords[rows, q]
        pts[:, j] = roots[rows, cols]
        points = pts
        kept_count = rows.size
        if rows.size:
            max_residual = float(res[rows, cols].max())

    return SampleCloud(
        points,
        label=f"sampled zero set (axis={axis}, T={T}, grid={grid})",
        meta={
            "fibers_total": int(fibers),
            "fibers_degenerate": degenerate,
            "fibers_unconverged": unconverged,
            "points_kept": int(kept_count),
            "max_residual": max_residual,
            "residual_scale": scale,
            "tol": tol,
        },
    )


def lipschitz_bound(g: SparsePoly, T: float) -> float:
    """Bound on |g(w) - g(z)| / ||w - z||_inf over the radius-T hypercube."""
    total = 0.0
    for idx, c in g.terms.items():
        deg = sum(idx)
        if deg:
            total += abs(c) * deg * float(max(T, 1.0)) ** (deg - 1)
    return total


@dataclass(frozen=True)
class ContainmentReport:
    eps: float
    T: float
    grid: int
    delta_limit: float
    coeff_distance: float
    violations: int
    max_residual: float
    eps_effective: float
    samples: int
    sample_meta: dict = field(compare=False)
    violation_list: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "eps": self.eps,
            "T": self.T,
            "grid": self.grid,
            "delta_limit": self.delta_limit,
            "coeff_distance": self.coeff_distance,
            "violations": self.violations,
            "max_residual": self.max_residual,
            "eps_effective": self.eps_effective,
            "samples": self.samples,
            "sample_meta": self.sample_meta,
            "violation_list": [
                {
                    "point": [{"re": z.real, "im": z.imag} for z in pt],
                    "residual": r,
                }
                for pt, r in self.violation_list
            ],
        }


def containment_check(
    f: SparsePoly,
    g: SparsePoly,
    T: float,
    eps: float,
    grid: int = 21,
    tol: float = 1e-8,
    axis: int | None = None,
) -> ContainmentReport:
    """Sample the zero set of ``f`` in H(T) and test |g| < eps at each point.

    Under the coefficient precondition the sampled containment has no
    violations; sampling error is accounted for by reporting
    ``eps_effective = eps - lipschitz_bound(g, T) * tol``.
    """
    if f.is_zero():
        raise ValueError("the base polynomial must be nonzero")
    d, support = _union_degree_and_support(f, g)
    limit = delta_bound(eps, T, d, support)
    dist = _require_deformation_within(f, g, limit)

    if axis is None:
        axis = next(
            (k + 1 for k in range(f.nvars) if f.degree_in(k) > 0),
            None,
        )
        if axis is None:
            raise ValueError("polynomial is constant; its zero set is empty")
    cloud = sample_hypersurface(f, T, axis, grid, tol)

    vals = np.abs(eval_at_points(g, cloud.points))
    bad = np.nonzero(vals >= eps)[0]
    max_residual = float(vals.max()) if vals.size else 0.0

    listed = tuple(
        (tuple(complex(z) for z in cloud.points[i]), float(vals[i]))
        for i in bad[:20]
    )
    return ContainmentReport(
        eps=eps,
        T=T,
        grid=grid,
        delta_limit=limit,
        coeff_distance=dist,
        violations=int(bad.size),
        max_residual=max_residual,
        eps_effective=eps - lipschitz_bound(g, T) * tol,
        samples=len(cloud),
        sample_meta=cloud.meta,
        violation_list=listed,
    )


def system_residual(F: PolySystem, z: Sequence[complex]) -> float:
    """Max of |f(z)| over the system: < eps means eps-membership in the variety."""
    return max(abs(p.evaluate(z)) for p in F)


def classify_jet_point(point: Sequence[Jet]) -> str:
    """'finite', 'infinite', or 'mixed' by coordinate finiteness."""
    flags = [w.is_finite() for w in point]
    if all(flags):
        return "finite"
    if not any(flags):
        return "infinite"
    return "mixed"


@dataclass(frozen=True)
class VarietyJetReport:
    samples_total: int
    witnesses: int
    forward_checked: int
    forward_failures: int
    backward_checked: int
    backward_failures: int
    threshold: float
    univariate_crosscheck: dict | None = None

    @property
    def passed(self) -> bool:
        ok = self.forward_failures == 0 and self.backward_failures == 0
        if self.univariate_crosscheck is not None:
            ok = ok and self.univariate_crosscheck.get("failures", 0) == 0
        return ok

    def to_json_dict(self) -> dict:
        return {
            "samples_total": self.samples_total,
            "witnesses": self.witnesses,
            "forward_checked": self.forward_checked,
            "forward_failures": self.forward_failures,
            "backward_checked": self.backward_checked,
            "backward_failures": self.backward_failures,
            "threshold": self.threshold,
            "univariate_crosscheck": self.univariate_crosscheck,
            "passed": self.passed,
        }


def variety_jet_check(
    system: PolySystem | SparsePoly,
    jet_system: Sequence[JetPoly] | JetPoly,
    samples: SampleCloud,
    order: int | None = None,
    tol: float = 1e-8,
    seed: int = 0,
) -> VarietyJetReport:
    """Witness-level verification that infinitesimally deformed polynomials
    vanish infinitesimally exactly above the standard zero set.

    Forward: every sampled point with system residual within ``tol``, viewed
    as a constant jet point, keeps all jet-polynomial values infinitesimal.
    Backward: perturbing those points by random infinitesimals leaves the
    standard parts inside the residual-``tol`` zero set, and the perturbed
    values stay infinitesimal.  For a univariate single-polynomial system
    the lifted jet roots provide an independent crosscheck.

    The full statements quantify over all finite jet points, which no finite
    computation can enumerate; constructed witnesses and random samples are
    the honest finite surrogate.
    """
    F = PolySystem([system]) if isinstance(system, SparsePoly) else system
    G = [jet_system] if isinstance(jet_system, JetPoly) else list(jet_system)
    if len(G) != len(F):
        raise ValueError(f"system sizes differ: {len(F)} vs {len(G)}")
    for f, g in zip(F, G):
        if g.nvars != F.nvars:
            raise ValueError("jet polynomial dimension mismatch")
        if coeff_sup_distance(st_poly(g), f) > ST_MATCH_TOL:
            raise ValueError(
                "standard part of a jet polynomial does not match its base polynomial"
            )
    if samples.n != F.nvars:
        raise ValueError("sample cloud dimension mismatch")
    K = min(g.order for g in G) if order is None else order

    # Slack for float rounding between evaluating standard parts directly
    # and extracting them from jet evaluations.
    norms = samples.points
    max_norm = float(np.abs(norms).max()) if len(samples) else 0.0
    slack = 0.0
    for f in F:
        dd = max(f.total_degree(), 0)
        slack = max(slack, ST_MATCH_TOL * f.support_size() * max(1.0, max_norm) ** dd)
    threshold = tol + 10.0 * slack

    witnesses = [
        tuple(complex(z) for z in samples.points[i])
        for i in range(len(samples))
        if system_residual(F, samples.points[i]) <= tol
    ]

    forward_failures = 0
    for z in witnesses:
        w = [Jet.constant(c, K) for c in z]
        for g in G:
            sp = standard_part(g.evaluate(w))
            if sp is INFINITE or abs(sp) > threshold:
                forward_failures += 1
                break

    backward_failures = 0
    for i, z in enumerate(witnesses):
        rng = np.random.default_rng([seed, i])
        w = []
        for c in z:
            tail = 0.1 * np.sqrt(rng.random(K)) * np.exp(2j * np.pi * rng.random(K))
            coeffs = np.concatenate(([c], tail))
            w.append(Jet(0, coeffs, K))
        st_point = [standard_part(wj) for wj in w]
        ok = system_residual(F, st_point) <= tol
        if ok:
            for g in G:
                sp = standard_part(g.evaluate(w))
                if sp is INFINITE or abs(sp) > threshold:
                    ok = False
                    break
        if not ok:
            backward_failures += 1

    crosscheck = None
    if len(F) == 1 and F.nvars == 1 and F.polys[0].total_degree() >= 1:
        alignment = jet_align_roots(UniPoly.from_sparse(F.polys[0]), G[0], K)
        fails = sum(
            1
            for z, w in alignment.pairs
            if abs(standard_part(w) - z) > 1e-12
        )
        crosscheck = {
            "lifted": len(alignment.pairs),
            "skipped": len(alignment.skipped),
            "failures": fails,
        }

    return VarietyJetReport(
        samples_total=len(samples),
        witnesses=len(witnesses),
        forward_checked=len(witnesses),
        forward_failures=forward_failures,
        backward_checked=len(witnesses),
        backward_failures=backward_failures,
        threshold=threshold,
        univariate_crosscheck=crosscheck,
    )
