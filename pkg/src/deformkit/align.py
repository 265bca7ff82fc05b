"""Bottleneck (min-max) alignment of two equal-size root multisets.

Two root sequences are eps-aligned when some ordering pairs every root of
one strictly within eps of a root of the other.  The optimal such pairing
minimizes the largest matched distance, which is a bottleneck assignment:
binary-search the sorted n*n pairwise distances, testing each threshold
with an augmenting-path bipartite matching.  The optimum is exact because
it is always one of the pairwise distances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .roots import RootConvergenceError, RootMultiset, UniPoly, find_roots

__all__ = ["Matching", "bottleneck_match", "is_eps_aligned", "empirical_modulus"]


@dataclass(frozen=True)
class Matching:
    """Optimal pairing: entry ``perm[i]`` of B is matched with entry i of A."""

    perm: tuple[int, ...]
    bottleneck: float

    def to_json_dict(self) -> dict:
        return {"perm": list(self.perm), "bottleneck": self.bottleneck}


def _expand(values) -> list[complex]:
    if isinstance(values, RootMultiset):
        return values.values()
    return [complex(v) for v in values]


def _feasible_matching(dist: np.ndarray, threshold: float) -> list[int] | None:
    """Perfect matching in the graph {(i, j): dist[i, j] <= threshold}."""
    n = dist.shape[0]
    adj = dist <= threshold
    match_of_b = [-1] * n

    def augment(i: int, seen: list[bool]) -> bool:
        for j in range(n):
            if adj[i, j] and not seen[j]:
                seen[j] = True
                if match_of_b[j] < 0 or augment(match_of_b[j], seen):
                    match_of_b[j] = i
                    return True
        return False

    for i in range(n):
        if not augment(i, [False] * n):
            return None
    perm = [-1] * n
    for j, i in enumerate(match_of_b):
        perm[i] = j
    return perm


def bottleneck_match(a, b) -> Matching:
    """Bijection between two equal-size multisets minimizing the max distance.

    Accepts ``RootMultiset`` instances (expanded by multiplicity) or plain
    sequences of complex numbers.
    """
    av, bv = _expand(a), _expand(b)
    if len(av) != len(bv):
        raise ValueError(f"size mismatch: {len(av)} vs {len(bv)}")
    if not av:
        raise ValueError("cannot match empty multisets")
    A = np.asarray(av, dtype=np.complex128)
    B = np.asarray(bv, dtype=np.complex128)
    dist = np.abs(A[:, None] - B[None, :])

    thresholds = np.unique(dist)
    lo, hi = 0, thresholds.size - 1
    best_perm = None
    while lo <= hi:
        mid = (lo + hi) // 2
        perm = _feasible_matching(dist, float(thresholds[mid]))
        if perm is not None:
            best_perm = perm
            hi = mid - 1
        else:
            lo = mid + 1
    assert best_perm is not None  # full threshold always feasible
    n = len(best_perm)
    value = max(float(dist[i, best_perm[i]]) for i in range(n))
    return Matching(perm=tuple(best_perm), bottleneck=value)


def is_eps_aligned(a, b, eps: float) -> bool:
    """True iff the optimal pairing keeps every pair strictly within eps."""
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    return bottleneck_match(a, b).bottleneck < eps


def _unit_noise(n_coeffs: int, seed: int, trial: int) -> np.ndarray:
    """Unit-disc noise per coefficient, fixed by (seed, trial)."""
    rng = np.random.default_rng([seed, trial])
    u = rng.random(n_coeffs)
    v = rng.random(n_coeffs)
    return np.sqrt(u) * np.exp(2j * np.pi * v)


def _deform(f: UniPoly, noise: np.ndarray, delta: float) -> UniPoly:
    eta = noise * (delta * (1.0 - 1e-9))
    # Cap the leading perturbation so the degree cannot drop.
    lead = abs(f.coeffs[-1])
    cap = min(1.0, 0.5 * lead / (delta * (1.0 - 1e-9)))
    eta[-1] *= cap
    return UniPoly(f.coeffs + eta)


def empirical_modulus(
    f: UniPoly,
    eps: float,
    trials: int = 20,
    seed: int = 0,
    steps: int = 40,
    root_tol: float = 1e-12,
) -> float:
    """Estimate the largest delta keeping random delta-deformations eps-aligned.

    Bisects (on a log scale) over delta in [1e-12, eps].  A candidate passes
    when every one of ``trials`` random deformations of ``f`` has roots
    eps-aligned with ``f``'s.  Trial noise is drawn once per (seed, trial)
    and scaled by the candidate delta, so trials are schedule-independent
    and the whole estimate is deterministic per seed.  The returned value is
    the largest tested delta that passed.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    base_roots = find_roots(f, root_tol)
    noises = [_unit_noise(f.coeffs.size, seed, t) for t in range(trials)]

    def passes(delta: float) -> bool:
        for trial, noise in enumerate(noises):
            g = _deform(f, noise, delta)
            try:
                deformed = find_roots(g, root_tol)
            except RootConvergenceError as exc:
                raise RootConvergenceError(
                    f"trial {trial} at delta={delta:.3e}: {exc}",
                    best_roots=exc.best_roots,
                    residual=exc.residual,
                ) from exc
            if not is_eps_aligned(base_roots, deformed, eps):
                return False
        return True

    lo, hi = np.log10(1e-12), np.log10(eps)
    best = None
    if passes(10.0**lo):
        best = 10.0**lo
    else:
        raise ArithmeticError(
            "no feasible delta found down to 1e-12; "
            "the polynomial's roots are too sensitive for this eps"
        )
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        delta = 10.0**mid
        if passes(delta):
            best = delta
            lo = mid
        else:
            hi = mid
    return float(best)
