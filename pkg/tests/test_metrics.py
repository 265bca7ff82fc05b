"""Sup-norm set distances and the tilted-line escape certificate."""

import numpy as np
import pytest

from deformkit import (
    SampleCloud,
    coeff_sup_distance,
    containment_check,
    counterexample_pair,
    counterexample_report,
    hausdorff,
    is_eps_set_deformation,
    point_set_distance,
    sup_norm_dist,
)


def cloud(rows):
    return SampleCloud(np.asarray(rows, dtype=np.complex128))


def test_sup_norm_examples():
    assert sup_norm_dist((0, 0), (1, 2)) == 2.0
    assert sup_norm_dist((1.5j, -2), (1.5j, -2)) == 0.0
    assert sup_norm_dist((1 + 1j, 0), (1, 0)) == 1.0
    with pytest.raises(ValueError):
        sup_norm_dist((1,), (1, 2))


def test_point_to_cloud():
    Z = cloud([[1, 1], [3, 3]])
    assert point_set_distance((1, 1), Z) == 0.0
    assert point_set_distance((0, 0), Z) == 1.0
    with pytest.raises(ValueError):
        point_set_distance((0, 0), SampleCloud(np.zeros((0, 2))))


def test_hausdorff_examples():
    W = cloud([[0, 0]])
    Z = cloud([[1, 2]])
    assert hausdorff(W, W) == 0.0
    assert hausdorff(W, Z) == 2.0
    # the asymmetric sup matters
    A = cloud([[0], [10]])
    B = cloud([[0]])
    assert hausdorff(A, B) == 10.0
    assert hausdorff(B, A) == 10.0


def test_hausdorff_pseudometric_properties():
    rng = np.random.default_rng(8)
    for _ in range(25):
        n = int(rng.integers(1, 3))
        A = cloud(rng.normal(size=(rng.integers(1, 6), n)) * (1 + 1j))
        B = cloud(rng.normal(size=(rng.integers(1, 6), n)) * (1 + 1j))
        C = cloud(rng.normal(size=(rng.integers(1, 6), n)) * (1 + 1j))
        dab = hausdorff(A, B)
        assert dab == hausdorff(B, A)
        assert dab <= hausdorff(A, C) + hausdorff(C, B) + 1e-12
    # zero iff equal as sets (duplicates and order are immaterial)
    A = cloud([[1, 2], [3, 4], [1, 2]])
    B = cloud([[3, 4], [1, 2]])
    assert hausdorff(A, B) == 0.0
    assert hausdorff(A, cloud([[3, 4], [1, 2.5]])) > 0


def test_set_deformation_is_strict_and_symmetric():
    W = cloud([[0, 0]])
    Z = cloud([[1, 2]])
    assert not is_eps_set_deformation(W, Z, 2.0)
    assert is_eps_set_deformation(W, Z, 2.5)
    assert is_eps_set_deformation(Z, W, 2.5)
    assert is_eps_set_deformation(W, W, 1e-12)


# -- the escape certificate ---------------------------------------------------------


def test_pair_coefficient_distance_is_the_tilt():
    f, g = counterexample_pair(0.1)
    assert coeff_sup_distance(f, g) == pytest.approx(0.1, rel=1e-12)


def test_certificate_at_reference_parameters():
    rep = counterexample_report(0.1, 0.5, 12.0, grid=25, measure_grid=241)
    assert rep.status == "certified"
    assert rep.witness_threshold == pytest.approx(10.0, abs=1e-12)
    # the on-axis witness: |w| = 10 exactly, distance exactly tilt*|w|/2
    best = [w for w in rep.witnesses if abs(abs(w.w) - 10.0) < 1e-9]
    assert best
    for w in best:
        assert w.analytic_distance == pytest.approx(0.5, abs=1e-12)
        assert abs(w.measured_distance - 0.5) <= 0.01  # within 2 percent
    assert all(w.measured_distance >= 0.5 * (1 - 1e-12) for w in rep.witnesses)


def test_origin_lies_on_both_lines():
    diag = cloud([[z, z] for z in np.linspace(-2, 2, 81)])
    assert point_set_distance((0, 0), diag) == 0.0


def test_midpoint_bound_holds_against_every_sample():
    # For each diagonal sample z and witness point (w, (1+d)w):
    # max(|w - z|, |(1+d)w - z|) >= d |w| / 2, independent of density.
    rng = np.random.default_rng(19)
    d = 0.07
    zs = rng.normal(size=40) + 1j * rng.normal(size=40)
    for _ in range(20):
        w = complex(*rng.uniform(-30, 30, 2))
        bound = d * abs(w) / 2
        for z in zs:
            measured = max(abs(w - z), abs((1 + d) * w - z))
            assert measured >= bound * (1 - 1e-12)


def test_deviation_grows_linearly_with_window():
    rep = counterexample_report(0.1, 0.5, 12.0, grid=25, measure_grid=241)
    growth = rep.growth
    assert growth["analytic_ratio"] >= 2.0 * (1 - 1e-12)
    assert growth["measured_ratio"] >= 2.0 * (1 - 1e-9)
    assert growth["max_analytic_distance"] >= rep.max_analytic_distance * 2 * (1 - 1e-12)


def test_small_window_has_no_witness():
    rep = counterexample_report(0.1, 0.5, 5.0, grid=25, measure_grid=81)
    assert rep.status == "no witness in window"
    assert rep.witnesses == ()


def test_bounded_window_containment_still_passes():
    # The same pair escapes globally yet satisfies containment on H(1).
    f, g = counterexample_pair(0.1)
    rep = containment_check(f, g, T=1.0, eps=0.5, grid=9)
    assert rep.violations == 0


def test_certificate_parameter_validation():
    with pytest.raises(ValueError):
        counterexample_report(0.0, 0.5, 12.0)
    with pytest.raises(ValueError):
        counterexample_report(0.1, -1.0, 12.0)
    with pytest.raises(ValueError):
        counterexample_report(0.1, 0.5, 0.0)


def test_hausdorff_dimension_mismatch():
    with pytest.raises(ValueError):
        hausdorff(cloud([[0, 0]]), cloud([[0]]))
    with pytest.raises(ValueError):
        hausdorff(cloud([[0]]), SampleCloud(np.zeros((0, 1))))
