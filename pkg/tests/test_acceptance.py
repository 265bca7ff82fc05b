"""Acceptance suite: one test per criterion, one PASS line per criterion.

Run ``pytest tests/test_acceptance.py -v -s`` to see the lines as they
print.  Criteria with runtime budgets assert them.
"""

import itertools
import json
import time

import numpy as np

from deformkit import (
    Jet,
    JetPoly,
    SparsePoly,
    UniPoly,
    bottleneck_match,
    coeff_sup_distance,
    containment_check,
    counterexample_pair,
    counterexample_report,
    delta_bound,
    find_roots,
    hensel_lift_root,
    lemma_check,
    random_deformation,
    st_poly,
    standard_part,
)
from deformkit.cli import main as cli_main

SEED = 20250802


def report(criterion, ok, detail):
    line = f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line, flush=True)
    assert ok, line


def random_case(rng):
    """Nonzero, non-constant polynomial with n <= 3, d <= 4, plus (T, eps)."""
    while True:
        n = int(rng.integers(1, 4))
        terms = {}
        for _ in range(int(rng.integers(2, 7))):
            while True:
                idx = tuple(int(x) for x in rng.integers(0, 5, n))
                if sum(idx) <= 4:
                    break
            terms[idx] = complex(*rng.uniform(-1, 1, 2))
        f = SparsePoly(n, terms)
        if not f.is_zero() and f.total_degree() >= 1:
            T = float(rng.choice([1.0, 2.0]))
            eps = float(rng.choice([0.1, 1.0]))
            return f, T, eps


def sweep_cases(count=100):
    rng = np.random.default_rng(SEED)
    return [random_case(rng) for _ in range(count)]


CASES = sweep_cases()


def test_criterion_1_lemma_sweep():
    t0 = time.perf_counter()
    failures = []
    for i, (f, T, eps) in enumerate(CASES):
        d, s = f.total_degree(), f.support_size()
        g = random_deformation(f, 0.9 * delta_bound(eps, T, d, s), seed=SEED + i)
        rep = lemma_check(f, g, T=T, eps=eps, grid=21)
        if not (rep.passed and rep.sup_deviation < eps):
            failures.append((i, rep.sup_deviation, eps))
    elapsed = time.perf_counter() - t0
    report(
        1,
        not failures and elapsed < 30.0,
        f"bound sweep {len(CASES) - len(failures)}/{len(CASES)} "
        f"within eps on a 21-per-axis grid in {elapsed:.1f}s (budget 30s)",
    )


def test_criterion_2_containment_sweep():
    t0 = time.perf_counter()
    failures = []
    for i, (f, T, eps) in enumerate(CASES):
        d, s = f.total_degree(), f.support_size()
        g = random_deformation(f, 0.9 * delta_bound(eps, T, d, s), seed=SEED + i)
        grid = 21 if f.nvars <= 2 else 13
        rep = containment_check(f, g, T=T, eps=eps, grid=grid)
        if rep.violations != 0 or not rep.max_residual < eps:
            failures.append((i, rep.violations, rep.max_residual, eps))
    elapsed = time.perf_counter() - t0
    report(
        2,
        not failures and elapsed < 120.0,
        f"zero-set containment {len(CASES) - len(failures)}/{len(CASES)} "
        f"with zero violations in {elapsed:.1f}s (budget 120s)",
    )


def test_criterion_3_root_continuity_ladder():
    t0 = time.perf_counter()
    # (t-1)(t+2)(t-3i): simple roots respond linearly
    f = UniPoly([6j, -2 - 3j, 1 - 3j, 1])
    base = find_roots(f)
    ok = True
    worst = []
    for k in range(3, 9):
        delta = 10.0**-k
        for trial in range(3):
            g = UniPoly.from_sparse(
                random_deformation(f.to_sparse(), delta, seed=SEED + 10 * k + trial)
            )
            b = bottleneck_match(base, find_roots(g)).bottleneck
            worst.append(b / delta)
            ok = ok and b < 10 * delta
    # (t-1)^2 (t+2): the double root responds like sqrt(delta)
    f2 = UniPoly([2, -3, 0, 1])
    base2 = find_roots(f2)
    for trial in range(3):
        g2 = UniPoly.from_sparse(
            random_deformation(f2.to_sparse(), 1e-8, seed=SEED + trial)
        )
        b2 = bottleneck_match(base2, find_roots(g2)).bottleneck
        ok = ok and b2 < 1e-3
    elapsed = time.perf_counter() - t0
    report(
        3,
        ok and elapsed < 10.0,
        f"simple roots stay within 10*delta (max ratio {max(worst):.2f}), "
        f"double root within 1e-3 at delta=1e-8, in {elapsed:.1f}s (budget 10s)",
    )


def test_criterion_4_bottleneck_oracle():
    rng = np.random.default_rng(SEED + 4)
    agree = 0
    total = 200
    for _ in range(total):
        n = int(rng.integers(1, 7))
        a = rng.normal(size=n) + 1j * rng.normal(size=n)
        b = rng.normal(size=n) + 1j * rng.normal(size=n)
        dist = np.abs(a[:, None] - b[None, :])
        brute = min(
            max(float(dist[i, j]) for i, j in enumerate(perm))
            for perm in itertools.permutations(range(n))
        )
        if bottleneck_match(a, b).bottleneck == brute:
            agree += 1
    report(4, agree == total, f"bottleneck equals brute force exactly {agree}/{total}")


def test_criterion_5_standard_part_homomorphism():
    rng = np.random.default_rng(SEED + 5)
    K = 8
    good = 0
    total = 1000
    for _ in range(total):
        a = Jet(0, rng.normal(size=K + 1) + 1j * rng.normal(size=K + 1), K)
        b = Jet(0, rng.normal(size=K + 1) + 1j * rng.normal(size=K + 1), K)
        add_ok = abs(standard_part(a + b) - (standard_part(a) + standard_part(b))) <= 1e-12
        mul_ok = abs(standard_part(a * b) - standard_part(a) * standard_part(b)) <= 1e-12
        if add_ok and mul_ok:
            good += 1
    poly_good = 0
    for i in range(total):
        n = 1 + (i % 2)
        gs = []
        for _ in range(2):
            terms = {}
            for _ in range(int(rng.integers(1, 4))):
                idx = tuple(int(x) for x in rng.integers(0, 3, n))
                tail = (rng.normal(size=K) + 1j * rng.normal(size=K)) / 8
                head = complex(*rng.uniform(-1, 1, 2))
                terms[idx] = Jet(0, np.concatenate(([head], tail)), K)
            gs.append(JetPoly(n, terms, K))
        g, h = gs
        ok_add = coeff_sup_distance(st_poly(g + h), st_poly(g) + st_poly(h)) <= 1e-12
        ok_mul = coeff_sup_distance(st_poly(g * h), st_poly(g) * st_poly(h)) <= 1e-12
        if ok_add and ok_mul:
            poly_good += 1
    report(
        5,
        good == total and poly_good == total,
        f"standard part respects + and * on {good}/{total} jet pairs "
        f"and {poly_good}/{total} polynomial pairs (1e-12 absolute)",
    )


def test_criterion_6_lift_matches_binomial_series():
    K = 8
    f = UniPoly([-1, 0, 1])
    g = JetPoly(
        1,
        {(2,): Jet.constant(1, K), (0,): -(Jet.constant(1, K) + Jet.eps(K))},
        K,
    )
    w = hensel_lift_root(f, 1.0, g, K)
    series = [1.0]
    for k in range(1, K + 1):
        series.append(series[-1] * (0.5 - (k - 1)) / k)
    coeff_err = max(abs(w.coeff(k) - series[k]) for k in range(K + 1))
    residual = g.evaluate([w])
    res_err = max(abs(residual.coeff(k)) for k in range(K + 1))
    report(
        6,
        coeff_err <= 1e-10 and res_err <= 1e-9,
        f"lifted root matches the sqrt(1+e) series "
        f"(coeff err {coeff_err:.1e} <= 1e-10, residual {res_err:.1e} <= 1e-9)",
    )


def test_criterion_7_counterexample_reproduction():
    rep = counterexample_report(0.1, 0.5, 12.0, grid=25, measure_grid=1201)
    on_axis = [w for w in rep.witnesses if abs(abs(w.w) - 10.0) < 1e-9]
    ok = rep.status == "certified"
    ok = ok and abs(rep.witness_threshold - 10.0) < 1e-12
    ok = ok and bool(on_axis)
    ok = ok and all(abs(w.analytic_distance - 0.5) <= 1e-12 for w in on_axis)
    ok = ok and all(abs(w.measured_distance - 0.5) <= 0.01 for w in on_axis)
    growth_ok = (
        rep.growth["max_measured_distance"]
        >= 2.0 * rep.max_measured_distance * (1 - 1e-9)
    )
    ok = ok and growth_ok
    # the same pair still satisfies bounded-window containment
    f, g = counterexample_pair(0.1)
    bounded = containment_check(f, g, T=1.0, eps=0.5, grid=21)
    ok = ok and bounded.violations == 0
    report(
        7,
        ok,
        "witness |w|=10=2eps/delta' at exact distance delta'|w|/2=0.5, "
        f"measured {on_axis[0].measured_distance:.4f} (within 2%), "
        f"T doubling scales the escape by {rep.growth['measured_ratio']:.3f}, "
        f"bounded-window containment still passes ({bounded.violations} violations)",
    )


def test_criterion_8_cli_determinism(tmp_path):
    f1 = tmp_path / "f1.json"
    f1.write_text(json.dumps(UniPoly([-1, 0, 1]).to_json_dict()))
    g1 = tmp_path / "g1.json"
    g1.write_text(json.dumps(UniPoly([-0.99, 0.005, 1.01]).to_json_dict()))
    gjet = tmp_path / "gjet.json"
    gjet.write_text(
        json.dumps(
            JetPoly(
                1, {(2,): Jet.constant(1), (0,): -(Jet.constant(1) + Jet.eps())}
            ).to_json_dict()
        )
    )
    f2 = tmp_path / "f2.json"
    f2.write_text(
        json.dumps(SparsePoly(2, {(1, 1): 1.0, (0, 0): -1.0}).to_json_dict())
    )
    g2 = tmp_path / "g2.json"
    g2.write_text(
        json.dumps(SparsePoly(2, {(1, 1): 1.02, (0, 0): -0.99}).to_json_dict())
    )
    diag = tmp_path / "diag.json"
    diag.write_text(
        json.dumps(SparsePoly(2, {(1, 0): 1.0, (0, 1): -1.0}).to_json_dict())
    )
    from deformkit import SampleCloud

    cloud = tmp_path / "cloud.csv"
    cloud.write_text(
        SampleCloud(
            np.array([[z, z] for z in np.linspace(-1, 1, 7)], dtype=np.complex128)
        ).to_csv()
    )

    commands = {
        "roots": ["roots", "--poly", str(f1)],
        "align": ["align", "--f", str(f1), "--g", str(g1), "--eps", "0.1"],
        "modulus": ["modulus", "--f", str(f1), "--eps", "0.01", "--trials", "3"],
        "jet-lift": ["jet-lift", "--f", str(f1), "--g", str(gjet)],
        "lemma": ["lemma", "--f", str(f2), "--g", str(g2), "--grid", "9"],
        "contain": ["contain", "--f", str(diag), "--g", str(diag), "--grid", "9"],
        "variety": ["variety", "--f", str(diag), "--points", str(cloud), "--eps", "1e-6"],
        "hausdorff": ["hausdorff", "--W", str(cloud), "--Z", str(cloud), "--eps", "0.5"],
        "counterexample": [
            "counterexample", "--delta-prime", "0.1", "--eps", "0.5",
            "--T", "12", "--grid", "25", "--measure-grid", "81",
        ],
    }
    mismatched = []
    for name, argv in commands.items():
        outs = []
        for run in (1, 2):
            out = tmp_path / f"{name}.{run}.json"
            rc = cli_main(argv + ["--seed", "7", "--no-timestamp", "--out", str(out)])
            assert rc == 0, f"{name} exited {rc}"
            outs.append(out.read_bytes())
        if outs[0] != outs[1]:
            mismatched.append(name)
    report(
        8,
        not mismatched,
        f"all {len(commands)} subcommands byte-identical across reruns"
        + (f" (mismatches: {mismatched})" if mismatched else ""),
    )
