"""Bottleneck matching against brute force, and the empirical modulus."""

import itertools
import math

import numpy as np
import pytest

from deformkit import (
    UniPoly,
    bottleneck_match,
    empirical_modulus,
    find_roots,
    is_eps_aligned,
    random_deformation,
)
from deformkit.align import _deform, _unit_noise


def brute_force_bottleneck(a, b):
    """Oracle: minimum over all n! orderings of the max pairwise distance.

    Scores with the same vectorized distance matrix the matcher sees (so
    exact float equality is meaningful) but searches by full enumeration.
    """
    A = np.asarray([complex(x) for x in a], dtype=np.complex128)
    B = np.asarray([complex(x) for x in b], dtype=np.complex128)
    dist = np.abs(A[:, None] - B[None, :])
    best = math.inf
    for perm in itertools.permutations(range(len(b))):
        worst = max(float(dist[i, j]) for i, j in enumerate(perm))
        best = min(best, worst)
    return best


def test_identity_pairing_beats_crossing():
    m = bottleneck_match([0, 1], [0.1, 1.05])
    assert m.bottleneck == pytest.approx(0.1, abs=0)
    assert m.perm == (0, 1)


def test_self_match_is_zero():
    vals = [0.3 + 1j, -2, 5j]
    assert bottleneck_match(vals, vals).bottleneck == 0.0


def test_symmetric_square_example():
    m = bottleneck_match([1, -1], [1j, -1j])
    assert m.bottleneck == pytest.approx(math.sqrt(2), rel=1e-15)


def test_matches_brute_force_exactly():
    rng = np.random.default_rng(2024)
    for _ in range(200):
        n = int(rng.integers(1, 7))
        a = rng.normal(size=n) + 1j * rng.normal(size=n)
        b = rng.normal(size=n) + 1j * rng.normal(size=n)
        fast = bottleneck_match(a, b).bottleneck
        slow = brute_force_bottleneck(a, b)
        assert fast == slow  # the optimum is one of the shared distances


def test_matching_is_a_valid_bijection():
    rng = np.random.default_rng(9)
    a = rng.normal(size=5) + 1j * rng.normal(size=5)
    b = rng.normal(size=5) + 1j * rng.normal(size=5)
    m = bottleneck_match(a, b)
    assert sorted(m.perm) == list(range(5))
    assert m.bottleneck == max(abs(a[i] - b[m.perm[i]]) for i in range(5))


def test_bottleneck_is_symmetric():
    rng = np.random.default_rng(31)
    for _ in range(50):
        n = int(rng.integers(1, 7))
        a = rng.normal(size=n) + 1j * rng.normal(size=n)
        b = rng.normal(size=n) + 1j * rng.normal(size=n)
        assert (
            bottleneck_match(a, b).bottleneck == bottleneck_match(b, a).bottleneck
        )


def test_size_mismatch_rejected():
    with pytest.raises(ValueError):
        bottleneck_match([0, 1], [0])
    with pytest.raises(ValueError):
        bottleneck_match([], [])


def test_eps_alignment_strictness_and_monotonicity():
    a, b = [0, 1], [0.1, 1.05]
    assert is_eps_aligned(a, b, 0.2)
    assert not is_eps_aligned(a, b, 0.1)  # strict at the boundary
    assert is_eps_aligned(a, a, 1e-12)
    eps_values = [0.05, 0.1000001, 0.2, 1.0]
    flags = [is_eps_aligned(a, b, e) for e in eps_values]
    assert flags == sorted(flags)  # once aligned, stays aligned


def test_multiset_expansion_by_multiplicity():
    r = find_roots(UniPoly([1, -2, 1]))  # double root at 1
    m = bottleneck_match(r, [1.0, 1.0])
    assert m.bottleneck < 1e-6


def test_deformation_bottleneck_shrinks_with_delta():
    f = UniPoly([-6j, (-2 - 3j), (1 - 3j), 1])  # (t-1)(t+2)(t-3i)
    base = find_roots(f)
    prev = None
    for k in range(3, 9):
        delta = 10.0**-k
        g = UniPoly.from_sparse(
            random_deformation(f.to_sparse(), delta, seed=100 + k)
        )
        b = bottleneck_match(base, find_roots(g)).bottleneck
        assert b < 10 * delta
        if prev is not None:
            assert b <= 2 * prev
        prev = b
    assert prev < 1e-4


# -- empirical eps-to-delta modulus ------------------------------------------------


def modulus_grid_oracle(f, eps, trials, seed, grid):
    """Independent estimate: dense delta grid with brute-force alignment."""
    base = find_roots(f).values()
    best = None
    for delta in grid:
        ok = True
        for t in range(trials):
            g = _deform(f, _unit_noise(f.coeffs.size, seed, t), delta)
            if brute_force_bottleneck(base, find_roots(g).values()) >= eps:
                ok = False
                break
        if ok:
            best = delta
    return best


def test_modulus_simple_roots():
    f = UniPoly([-1, 0, 1])
    delta = empirical_modulus(f, eps=0.01, trials=8, seed=5)
    assert 1e-4 <= delta <= 1e-2
    grid = np.logspace(-5, -2, 16)
    oracle = modulus_grid_oracle(f, 0.01, trials=8, seed=5, grid=grid)
    assert oracle is not None
    # same order of magnitude as the independent grid estimate
    assert oracle / 4 <= delta <= oracle * 4


def test_modulus_double_root_needs_smaller_delta():
    f = UniPoly([1, -2, 1])
    delta = empirical_modulus(f, eps=0.01, trials=8, seed=5)
    assert delta <= 1e-4


def test_modulus_preserves_degree():
    f = UniPoly([0, 1e-6])  # tiny leading coefficient
    noise = _unit_noise(2, 0, 0)
    g = _deform(f, noise, 0.5)
    assert g.degree == f.degree


def test_modulus_rejects_bad_arguments():
    f = UniPoly([-1, 0, 1])
    with pytest.raises(ValueError):
        empirical_modulus(f, eps=0.01, trials=0)
    with pytest.raises(ValueError):
        empirical_modulus(f, eps=-1.0, trials=2)


def test_matching_serialization():
    m = bottleneck_match([0, 1], [0.1, 1.05])
    assert m.to_json_dict() == {"perm": [0, 1], "bottleneck": m.bottleneck}


def test_modulus_propagates_solver_failure_with_context(monkeypatch):
    from deformkit import align as align_mod
    from deformkit.roots import RootConvergenceError

    real = align_mod.find_roots
    calls = {"n": 0}

    def flaky(p, tol=1e-12):
        calls["n"] += 1
        if calls["n"] > 1:  # base solve succeeds, first trial fails
            raise RootConvergenceError("forced failure", best_roots=[], residual=1.0)
        return real(p, tol)

    monkeypatch.setattr(align_mod, "find_roots", flaky)
    with pytest.raises(RootConvergenceError) as exc:
        empirical_modulus(UniPoly([-1, 0, 1]), eps=0.01, trials=2)
    assert "trial 0" in str(exc.value)
