"""Sup-norm distances between points and sampled zero sets.

Includes the line-pair counterexample showing that coefficient closeness
does not bound Hausdorff distance on unbounded zero sets: however small the
tilt ``delta'`` of ``t2 - (1 + delta') t1`` against ``t2 - t1``, any point
of the tilted line with first coordinate of modulus at least
``2 eps / delta'`` sits at sup-norm distance at least eps from the diagonal
(exactly ``delta' |w| / 2``, attained at the midpoint), so the deviation
grows linearly with the window radius.  That analytic bound is computed
alongside the sampled one on purpose: the negative result must not hinge on
sampling density.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .polynomials import SparsePoly, coeff_sup_distance
from .varieties import SampleCloud, complex_grid_axis

__all__ = [
    "sup_norm_dist",
    "point_set_distance",
    "hausdorff",
    "is_eps_set_deformation",
    "counterexample_report",
    "CounterexampleReport",
    "counterexample_pair",
]


def sup_norm_dist(w: Sequence[complex], z: Sequence[complex]) -> float:
    if len(w) != len(z):
        raise ValueError(f"dimension mismatch: {len(w)} vs {len(z)}")
    return max(abs(complex(a) - complex(b)) for a, b in zip(w, z))


def point_set_distance(w: Sequence[complex], Z: SampleCloud) -> float:
    """Min sup-norm distance from the point to the (finite, nonempty) cloud."""
    if len(Z) == 0:
        raise ValueError("distance to an empty cloud is undefined")
    wv = np.asarray([complex(c) for c in w], dtype=np.complex128)
    if wv.size != Z.n:
        raise ValueError(f"dimension mismatch: {wv.size} vs {Z.n}")
    d = np.abs(Z.points - wv[None, :]).max(axis=1)
    return float(d.min())


def _directed_sup(A: np.ndarray, B: np.ndarray, chunk: int = 16384) -> float:
    worst = 0.0
    for start in range(0, A.shape[0], chunk):
        blk = A[start : start + chunk]
        d = np.abs(blk[:, None, :] - B[None, :, :]).max(axis=2).min(axis=1)
        worst = max(worst, float(d.max()))
    return worst


def hausdorff(W: SampleCloud, Z: SampleCloud) -> float:
    """Max of the two directed sup-inf sup-norm distances."""
    if len(W) == 0 or len(Z) == 0:
        raise ValueError("Hausdorff distance needs nonempty clouds")
    if W.n != Z.n:
        raise ValueError(f"dimension mismatch: {W.n} vs {Z.n}")
    return max(_directed_sup(W.points, Z.points), _directed_sup(Z.points, W.points))


def is_eps_set_deformation(W: SampleCloud, Z: SampleCloud, eps: float) -> bool:
    """True iff the Hausdorff distance is strictly below eps (symmetric)."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return hausdorff(W, Z) < eps


def counterexample_pair(delta_prime: float) -> tuple[SparsePoly, SparsePoly]:
    """The line pair: f = t2 - t1 and its tilt g = t2 - (1 + delta') t1."""
    f = SparsePoly(2, {(0, 1): 1.0, (1, 0): -1.0})
    g = SparsePoly(2, {(0, 1): 1.0, (1, 0): -(1.0 + delta_prime)})
    return f, g


@dataclass(frozen=True)
class Witness:
    w: complex
    point: tuple[complex, complex]
    analytic_distance: float
    measured_distance: float

    def to_json_dict(self) -> dict:
        return {
            "w": {"re": self.w.real, "im": self.w.imag},
            "point": [{"re": z.real, "im": z.imag} for z in self.point],
            "analytic_distance": self.analytic_distance,
            "measured_distance": self.measured_distance,
        }


@dataclass(frozen=True)
class CounterexampleReport:
    delta_prime: float
    eps: float
    T: float
    grid: int
    measure_grid: int
    coeff_distance: float
    witness_threshold: float
    witnesses: tuple[Witness, ...]
    max_analytic_distance: float
    max_measured_distance: float
    certified: bool
    status: str
    growth: dict

    def to_json_dict(self) -> dict:
        return {
            "delta_prime": self.delta_prime,
            "eps": self.eps,
            "T": self.T,
            "grid": self.grid,
            "measure_grid": self.measure_grid,
            "coeff_distance": self.coeff_distance,
            "witness_threshold": self.witness_threshold,
            "witness_count": len(self.witnesses),
            "witnesses": [w.to_json_dict() for w in self.witnesses[:200]],
            "max_analytic_distance": self.max_analytic_distance,
            "max_measured_distance": self.max_measured_distance,
            "certified": self.certified,
            "status": self.status,
            "growth": self.growth,
        }


def _witness_scan(delta_prime, eps, T, grid, measure_grid):
    """Witnesses of the tilted line in H(T) plus their diagonal distances."""
    wgrid = complex_grid_axis(T, grid)
    scale = 1.0 + delta_prime
    on_window = np.abs(wgrid * scale) <= T * (1.0 + 1e-12)
    threshold = 2.0 * eps / delta_prime
    far = np.abs(wgrid) >= threshold
    ws = wgrid[on_window & far]

    diag = complex_grid_axis(T, measure_grid)
    witnesses = []
    for w in ws:
        w2 = scale * w
        measured = float(np.minimum.reduce(
            np.maximum(np.abs(w - diag), np.abs(w2 - diag))
        )) if diag.size else float("inf")
        analytic = float(delta_prime * abs(w) / 2.0)
        witnesses.append(
            Witness(
                w=complex(w),
                point=(complex(w), complex(w2)),
                analytic_distance=analytic,
                measured_distance=measured,
            )
        )
    witnesses.sort(key=lambda x: (-x.analytic_distance, x.w.real, x.w.imag))
    return witnesses


def counterexample_report(
    delta_prime: float,
    eps: float,
    T: float,
    grid: int = 25,
    measure_grid: int | None = None,
) -> CounterexampleReport:
    """Certify that the tilted-line zero set escapes every eps-neighborhood.

    Samples both lines on H(T); for every sampled point of the tilted line
    with ``|w| >= 2 eps / delta_prime`` it reports the exact midpoint bound
    ``delta_prime |w| / 2`` and the measured distance to a dense diagonal
    sample.  Measured distances can only overestimate (the samples are a
    subset of the diagonal), so ``measured >= eps`` certifies the escape.
    The growth section repeats the scan at ``2 T`` with proportionally
    scaled grids, exhibiting the linear growth of the deviation.

    A window too small to contain any witness yields status
    ``"no witness in window"``, not an error.
    """
    if delta_prime <= 0:
        raise ValueError(f"delta_prime must be positive, got {delta_prime}")
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if T <= 0:
        raise ValueError(f"T must be positive, got {T}")
    if measure_grid is None:
        measure_grid = 8 * grid + 1

    f, g = counterexample_pair(delta_prime)
    dist = coeff_sup_distance(f, g)

    witnesses = _witness_scan(delta_prime, eps, T, grid, measure_grid)
    witnesses2 = _witness_scan(delta_prime, eps, 2.0 * T, grid, measure_grid)

    def summarize(ws):
        if not ws:
            return 0.0, 0.0
        return (
            max(x.analytic_distance for x in ws),
            max(x.measured_distance for x in ws),
        )

    max_a, max_m = summarize(witnesses)
    max_a2, max_m2 = summarize(witnesses2)

    growth = {
        "T_doubled": 2.0 * T,
        "max_analytic_distance": max_a2,
        "max_measured_distance": max_m2,
        "analytic_ratio": (max_a2 / max_a) if max_a else None,
        "measured_ratio": (max_m2 / max_m) if max_m else None,
    }

    # One-ulp slack: the midpoint bound makes every witness distance >= eps
    # in exact arithmetic; float rounding must not flip the certificate.
    floor = eps * (1.0 - 1e-12)
    certified = bool(witnesses) and all(
        x.measured_distance >= floor and x.analytic_distance >= floor
        for x in witnesses
    )
    if not witnesses:
        status = "no witness in window"
    elif certified:
        status = "certified"
    else:
        status = "certification failed"
    return CounterexampleReport(
        delta_prime=delta_prime,
        eps=eps,
        T=T,
        grid=grid,
        measure_grid=measure_grid,
        coeff_distance=dist,
        witness_threshold=2.0 * eps / delta_prime,
        witnesses=tuple(witnesses),
        max_analytic_distance=max_a,
        max_measured_distance=max_m,
        certified=certified,
        status=status,
        growth=growth,
    )
