"""Acceptance criteria 1-9, each run at its stated size and tolerance.

Every test records ``(passed, detail)`` in ``ACCEPTANCE_RESULTS`` before
asserting, so the terminal summary prints one line per criterion even when
a criterion fails.
"""

import random
import statistics
import time
from itertools import combinations
from math import sqrt

import numpy as np
import pytest

from bergetheta import construction as con
from bergetheta import oracle, poly, reduction, search
from bergetheta.cli import main
from bergetheta.hypergraph import build, validate_theta

from .conftest import ACCEPTANCE_RESULTS, random_hypergraph

pytestmark = [pytest.mark.acceptance, pytest.mark.slow]


def record(key, passed, detail):
    ACCEPTANCE_RESULTS[key] = (bool(passed), detail)
    assert passed, f"criterion {key}: {detail}"


def test_oracle_equivalence():
    rng = random.Random(1)
    start = time.perf_counter()
    graphs = count_checks = theta_checks = 0
    mismatches = []
    while graphs < 500:
        r = rng.choice([2, 3, 4])
        n = rng.randint(r, 8)
        H = random_hypergraph(rng, r, n, rng.randint(0, 10))
        graphs += 1
        for k in range(1, 5):
            table = oracle.oracle_count_table(H, k)
            for x in range(n):
                for y in range(n):
                    if x != y:
                        count_checks += 1
                        got = search.count_paths(H, search.PathQuery(x, y, k))
                        if got != table.get((x, y), 0):
                            mismatches.append(("count", H, k, x, y))
            for t in range(1, 4):
                theta_checks += 1
                w = search.find_theta(H, k, t)
                ok = (w is not None) == oracle.oracle_has_theta(H, k, t)
                if w is not None:
                    ok &= validate_theta(H, w)
                if not ok:
                    mismatches.append(("theta", H, k, t))
    elapsed = time.perf_counter() - start
    record(
        "1",
        not mismatches and elapsed < 120,
        f"{graphs} graphs, {count_checks} count and {theta_checks} theta checks, "
        f"{len(mismatches)} mismatches, {elapsed:.1f}s (target < 120s)",
    )


def _vanishing(p, nvars, d, points, samples, seed):
    rng = poly.poly_rng(seed)
    pts = np.asarray(points)
    hits = 0
    for _ in range(samples):
        f = poly.sample_uniform(p, nvars, d, rng)
        hits += not poly.evaluate_batch(f, pts).any()
    return hits / samples


def test_single_point_independence():
    start = time.perf_counter()
    freq = _vanishing(5, 2, 3, [[2, 4]], 10_000, seed=2)
    elapsed = time.perf_counter() - start
    record("2", abs(freq - 0.2) <= 0.015 and elapsed < 10,
           f"frequency {freq:.4f} vs 0.2 +- 0.015, {elapsed:.1f}s (target < 10s)")


def test_multi_point_independence():
    start = time.perf_counter()
    f2 = _vanishing(5, 2, 1, [[0, 0], [3, 1]], 20_000, seed=3)
    target3 = 7**-3
    tol3 = 3.5 * sqrt(target3 * (1 - target3) / 20_000)
    f3 = _vanishing(7, 2, 2, [[0, 0], [1, 5], [4, 2]], 20_000, seed=4)
    elapsed = time.perf_counter() - start
    ok = abs(f2 - 0.04) <= 0.005 and abs(f3 - target3) <= tol3 and elapsed < 30
    record("3", ok, f"z=2: {f2:.4f} vs 0.04 +- 0.005; z=3: {f3:.5f} vs {target3:.5f} +- {tol3:.5f}; "
                    f"{elapsed:.1f}s (target < 30s)")


def test_edge_count():
    start = time.perf_counter()
    counts = [con.build_graph(con.ConstructionParams(2, 3, 3, 10, seed)).hypergraph.m for seed in range(30)]
    elapsed = time.perf_counter() - start
    mean = statistics.mean(counts)
    sd = statistics.stdev(counts)
    var = statistics.variance(counts)
    half = 3 * sd / sqrt(30)
    ok = abs(mean - 27) <= half and var <= 2 * mean and elapsed < 300
    record("4", ok, f"mean {mean:.2f} (27 +- {half:.2f}), variance {var:.2f} (<= {2 * mean:.2f}), "
                    f"{elapsed:.1f}s (target < 300s)")


def _grow_free_graph(rng, n):
    """Simple 3-graph on n vertices grown greedily while staying C4-free."""
    triples = list(combinations(range(n), 3))
    rng.shuffle(triples)
    edges = []
    for e in triples:
        if len(edges) == oracle.MAX_EDGES:
            break
        if search.is_theta_free(build(3, n, edges + [e]), 2, 2):
            edges.append(e)
    return build(3, n, edges)


def test_reduction_lemma_conclusion():
    rng = random.Random(5)
    start = time.perf_counter()
    bound = reduction.multiplicity_bound(2, 2, 3, 2)
    corpus = []
    while len(corpus) < 200:
        H = _grow_free_graph(rng, rng.randint(7, 10))
        if not oracle.oracle_has_theta(H, 2, 2):
            corpus.append(H)
    violations, worst, sizes = 0, 0, []
    for H in corpus:
        G = reduction.reduce(H, 2)
        worst = max(worst, G.max_multiplicity())
        sizes.append(H.m)
        if G.max_multiplicity() > bound or not search.is_theta_free(G.as_hypergraph(), 2, 2):
            violations += 1
    elapsed = time.perf_counter() - start
    record("5", violations == 0 and bound == 21 and elapsed < 120,
           f"{len(corpus)} certified graphs (mean {statistics.mean(sizes):.1f} edges), max multiplicity "
           f"{worst} <= {bound}, {violations} violations, {elapsed:.1f}s (target < 120s)")


def test_lift_soundness():
    rng = random.Random(6)
    graphs = reduced_hits = failures = 0
    while graphs < 200:
        n = rng.randint(5, 8)
        H = random_hypergraph(rng, 3, n, rng.randint(4, 12))
        if not oracle.oracle_has_theta(H, 2, 2):
            continue
        graphs += 1
        G = reduction.reduce(H, 2)
        w = search.find_theta(G.as_hypergraph(), 2, 2)
        if w is None:
            continue
        reduced_hits += 1
        try:
            ok = validate_theta(H, reduction.lift_theta(G, w, H))
        except reduction.ReductionError:
            ok = False
        failures += not ok
    record("6", failures == 0 and reduced_hits > 0,
           f"{graphs} theta-containing graphs, {reduced_hits} reduced thetas lifted, {failures} failures")


def test_bad_pair_trend():
    k, r = 2, 3
    threshold = con.default_threshold(k, r)
    start = time.perf_counter()
    means = {}
    deleted = []
    for q in (3, 5, 7):
        bad = []
        for seed in range(10):
            H = con.build_graph(con.ConstructionParams(k, r, q, seed=seed)).hypergraph
            c = con.census(H, k, cap=threshold + 1)
            bad.append(len(con.bad_pairs(c, threshold)))
            if q == 7:
                res = con.repair(H, k, threshold)
                deleted.append(len(res.log) / H.m)
        means[q] = statistics.mean(bad)
    elapsed = time.perf_counter() - start
    trend = means[3] >= means[5] >= means[7]
    repair_ok = max(deleted) <= 0.05
    detail = (
        f"threshold {threshold}; mean bad pairs q=3: {means[3]:.2f}, q=5: {means[5]:.2f}, q=7: {means[7]:.2f} "
        f"({'non-increasing' if trend else 'NOT non-increasing'}); repair at q=7 removes at most "
        f"{100 * max(deleted):.2f}% (mean {100 * statistics.mean(deleted):.2f}%, limit 5%); "
        f"{elapsed:.0f}s (target < 900s)"
    )
    record("7", trend and repair_ok and elapsed < 900, detail)


def _run_pipeline(tmp, workers):
    w = str(workers)
    g, s = tmp / "g.txt", tmp / "s.json"
    assert main(["generate", "-k", "2", "-r", "3", "-q", "5", "--seed", "8", "--workers", w,
                 "--out", str(g), "--stats", str(s), "--census-cap", "12"]) == 0
    assert main(["census", str(g), "-k", "2", "--cap", "12", "--threshold", "10", "--workers", w,
                 "--out", str(tmp / "c.json")]) == 0
    assert main(["repair", str(g), "-k", "2", "--threshold", "4", "--workers", w,
                 "--out", str(tmp / "r.txt"), "--log", str(tmp / "r.json")]) == 0
    return {p.name: p.read_bytes() for p in sorted(tmp.iterdir())}


def test_determinism(tmp_path, capsys):
    runs = []
    for i, workers in enumerate([1, 1, 4, 4]):
        d = tmp_path / f"run{i}"
        d.mkdir()
        runs.append(_run_pipeline(d, workers))
    capsys.readouterr()
    same = all(run == runs[0] for run in runs)
    record("8", same and len(runs[0]) == 5,
           f"{len(runs)} runs (workers 1, 1, 4, 4) over {sorted(runs[0])}: "
           f"{'byte-identical' if same else 'DIFFER'}")


def test_multiplicity_bound_values():
    got = [reduction.multiplicity_bound(*a) for a in [(2, 1, 3, 2), (2, 2, 3, 2), (2, 2, 4, 2)]]
    record("9", got == [9, 21, 52], f"bounds {got} vs [9, 21, 52]")
