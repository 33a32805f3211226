"""Random polynomial hypergraphs, path censuses and bad-pair repair.

Vertex layout: part ``i`` (0-based) holds the ``N = q**k`` vertices
``i*N .. (i+1)*N - 1`` and vertex ``i*N + sum(c[j] * q**j)`` has coordinates
``c`` in F_q^k. A candidate tuple ``(v_1, ..., v_r)`` with one vertex per
part is the point of F_q^(kr) obtained by concatenating the coordinates in
part order; it is an edge iff all ``s = k(r-1) - 1`` polynomials vanish
there. Candidates are scanned in the order of the integer whose base-q
digits (least significant first) are that concatenated point, which is
also the order of the resulting edge list.
"""

from __future__ import annotations

import os
from collections import Counter
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from . import search
from .field import check_modulus
from .hypergraph import Hypergraph, build
from .poly import MultiPoly, evaluate_many, poly_rng, sample_uniform

DEFAULT_MAX_TUPLES = int(os.environ.get("BERGETHETA_MAX_TUPLES", 20_000_000))
FULL_CENSUS_LIMIT = 2000
DEFAULT_PAIR_SAMPLE = 20_000
SCAN_CHUNK = 1 << 15

# Default bad-pair thresholds, keyed by (k, r): the smallest threshold at
# which repair removed <= 5% of edges on every pilot seed at the largest
# pilot q. Reproduce with benchmarks/pilot.py (q in {3, 5, 7}, seeds
# 1000..1019, d = k(2k+1)).
PILOT_THRESHOLDS = {(2, 3): 10}


def default_threshold(k: int, r: int) -> int:
    try:
        return PILOT_THRESHOLDS[(k, r)]
    except KeyError:
        raise ConstructionError(f"no pilot threshold for k={k}, r={r}; pass one explicitly") from None


class ConstructionError(ValueError):
    pass


class BudgetExceeded(ConstructionError):
    def __init__(self, required, budget):
        super().__init__(
            f"scan needs {required} candidate tuples, budget is {budget} "
            "(raise it with --max-tuples or BERGETHETA_MAX_TUPLES)"
        )
        self.required = required
        self.budget = budget


@dataclass(frozen=True)
class ConstructionParams:
    k: int
    r: int
    q: int
    d: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise ConstructionError(f"k must be >= 2, got {self.k}")
        if self.r < 2:
            raise ConstructionError(f"r must be >= 2, got {self.r}")
        try:
            check_modulus(self.q)
        except ValueError as exc:
            raise ConstructionError(f"q must be prime: {exc}") from None
        if self.d is None:
            object.__setattr__(self, "d", self.k * (2 * self.k + 1))
        if self.d < 1:
            raise ConstructionError(f"degree bound must be >= 1, got {self.d}")
        if not 0 <= self.seed < 2**64:
            raise ConstructionError("seed must be a 64-bit unsigned integer")

    @property
    def s(self) -> int:
        return self.k * (self.r - 1) - 1

    @property
    def nvars(self) -> int:
        return self.k * self.r

    @property
    def N(self) -> int:
        return self.q**self.k

    @property
    def n(self) -> int:
        return self.r * self.N

    @property
    def candidates(self) -> int:
        return self.q ** (self.k * self.r)

    @property
    def expected_edges(self) -> int:
        return self.q ** (self.k + 1)

    @property
    def edge_probability(self) -> Fraction:
        return Fraction(1, self.q**self.s)

    def as_dict(self):
        return {"k": self.k, "r": self.r, "q": self.q, "d": self.d, "s": self.s, "seed": self.seed}


def vertex_id(part: int, coords: Sequence[int], q: int) -> int:
    return part * q ** len(coords) + sum(c * q**j for j, c in enumerate(coords))


def vertex_coords(v: int, q: int, k: int) -> tuple[int, tuple[int, ...]]:
    N = q**k
    part, rest = divmod(v, N)
    return part, tuple((rest // q**j) % q for j in range(k))


def sample_polys(params: ConstructionParams) -> list[MultiPoly]:
    """The ``s`` polynomials for ``params.seed``; polynomial i uses stream i."""
    return [
        sample_uniform(params.q, params.nvars, params.d, poly_rng(params.seed, i))
        for i in range(params.s)
    ]


def _digits(lo, hi, q, nvars):
    idx = np.arange(lo, hi, dtype=np.int64)
    pts = np.empty((hi - lo, nvars), dtype=np.int64)
    for j in range(nvars):
        idx, pts[:, j] = np.divmod(idx, q)
    return pts


def _scan_chunk(polys, lo, hi, q, nvars):
    vals = evaluate_many(polys, _digits(lo, hi, q, nvars))
    return lo + np.flatnonzero(~vals.any(axis=1))


def scan_edges(params: ConstructionParams, polys: Sequence[MultiPoly], workers: int = 1) -> np.ndarray:
    """Indices of candidate tuples where every polynomial vanishes, ascending."""
    total = params.candidates
    ranges = [(lo, min(lo + SCAN_CHUNK, total)) for lo in range(0, total, SCAN_CHUNK)]
    args = (params.q, params.nvars)
    if workers <= 1:
        hits = [_scan_chunk(polys, lo, hi, *args) for lo, hi in ranges]
    else:
        with ThreadPoolExecutor(workers) as pool:
            hits = list(pool.map(lambda rg: _scan_chunk(polys, rg[0], rg[1], *args), ranges))
    return np.concatenate(hits) if hits else np.empty(0, dtype=np.int64)


@dataclass
class Generation:
    params: ConstructionParams
    polys: list[MultiPoly]
    hypergraph: Hypergraph


def build_graph(
    params: ConstructionParams,
    polys: Sequence[MultiPoly] | None = None,
    max_tuples: int | None = None,
    workers: int = 1,
) -> Generation:
    """Random polynomial hypergraph for ``params``.

    ``polys`` overrides the sampled polynomials (all must be in ``kr``
    variables over F_q); it exists for tests that need a fixed system.
    """
    budget = DEFAULT_MAX_TUPLES if max_tuples is None else max_tuples
    if params.candidates > budget:
        raise BudgetExceeded(params.candidates, budget)
    if polys is None:
        polys = sample_polys(params)
    polys = list(polys)
    if not polys or any(f.nvars != params.nvars or f.p != params.q for f in polys):
        raise ConstructionError(f"need polynomials in {params.nvars} variables over F_{params.q}")

    hits = scan_edges(params, polys, workers)
    N = params.N
    edges = np.empty((len(hits), params.r), dtype=np.int64)
    rest = hits
    for i in range(params.r):
        rest, local = np.divmod(rest, N)
        edges[:, i] = i * N + local
    parts = [v // N for v in range(params.n)]
    H = build(params.r, params.n, edges.tolist(), parts)
    return Generation(params, polys, H)


# -- census ------------------------------------------------------------------


@dataclass
class PathCensus:
    k: int
    cap: int | None
    xs: np.ndarray
    ys: np.ndarray
    counts: np.ndarray
    sampled: bool = False
    scope: str = "all"
    inconclusive: list = field(default_factory=list)

    def __len__(self):
        return len(self.counts)

    @property
    def max(self) -> int:
        return int(self.counts.max()) if len(self.counts) else 0

    def histogram(self) -> dict[int, int]:
        values, freq = np.unique(self.counts, return_counts=True)
        return {int(v): int(c) for v, c in zip(values, freq)}

    def above(self) -> dict[int, int]:
        """Pairs with count strictly above each threshold ``0..max-1``."""
        hist = self.histogram()
        return {t: sum(c for v, c in hist.items() if v > t) for t in range(self.max)}

    def pairs_with_count(self, minimum: int) -> list[tuple[int, int, int]]:
        sel = np.flatnonzero(self.counts >= minimum)
        return [(int(self.xs[i]), int(self.ys[i]), int(self.counts[i])) for i in sel]

    def summary(self) -> dict:
        return {
            "k": self.k,
            "cap": self.cap,
            "scope": self.scope,
            "sampled": self.sampled,
            "pairs": len(self),
            "max": self.max,
            "histogram": {str(v): c for v, c in self.histogram().items()},
            "above": {str(t): c for t, c in self.above().items()},
            "inconclusive": [list(p) for p in self.inconclusive],
        }


def _pair_list(H, scope, sample, seed):
    if scope not in ("all", "cross"):
        raise ConstructionError(f"scope must be 'all' or 'cross', got {scope!r}")
    if scope == "cross" and H.parts is None:
        raise ConstructionError("cross-part census needs a partite layout")
    n = H.n
    total = n * (n - 1) // 2
    if sample is None and n <= FULL_CENSUS_LIMIT:
        xs, ys = np.triu_indices(n, 1)
        sampled = False
    else:
        size = min(sample or DEFAULT_PAIR_SAMPLE, total)
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(1 << 20,))))
        flat = np.sort(rng.choice(total, size=size, replace=False))
        # row x of the upper triangle starts at x(2n - x - 1)/2
        rows = np.arange(n, dtype=np.int64)
        starts = rows * (2 * n - rows - 1) // 2
        xs = np.searchsorted(starts, flat, side="right") - 1
        ys = flat - starts[xs] + xs + 1
        sampled = True
    xs = np.asarray(xs, dtype=np.int64)
    ys = np.asarray(ys, dtype=np.int64)
    if scope == "cross":
        parts = np.asarray(H.parts)
        keep = parts[xs] != parts[ys]
        xs, ys = xs[keep], ys[keep]
    return xs, ys, sampled


def _count_from_sources(H, k, cap, node_budget, jobs):
    """jobs: list of (x, [y, ...]). Returns list of (counts, inconclusive)."""
    out = []
    for x, targets in jobs:
        try:
            table = search.count_paths_from(H, x, k, search._Budget(node_budget))
            counts = [table.get(y, 0) for y in targets]
            if cap is not None:
                counts = [min(c, cap) for c in counts]
            out.append((counts, []))
            continue
        except search.SearchInconclusive:
            pass
        counts, bad = [], []
        for y in targets:
            try:
                q = search.PathQuery(x, y, k, cap)
                counts.append(search.count_paths(H, q, search._Budget(node_budget)))
            except search.SearchInconclusive:
                counts.append(cap if cap is not None else 0)
                bad.append((x, y))
        out.append((counts, bad))
    return out


def census(
    H: Hypergraph,
    k: int,
    cap: int | None = None,
    *,
    scope: str = "all",
    sample: int | None = None,
    seed: int = 0,
    workers: int = 1,
    node_budget: int | None = None,
) -> PathCensus:
    """Berge path counts of length ``k`` for vertex pairs ``x < y``.

    All pairs are examined when ``H.n <= 2000`` and ``sample`` is None;
    otherwise a uniform sample of ``sample`` pairs drawn from ``seed``.
    Counts are clipped at ``cap``. Pairs whose count could not be decided
    within ``node_budget`` are listed in ``inconclusive`` (recorded at the
    cap, or 0 when uncapped).
    """
    if k < 1:
        raise ConstructionError(f"k must be >= 1, got {k}")
    if cap is not None and cap < 1:
        raise ConstructionError(f"cap must be >= 1, got {cap}")
    budget = search.DEFAULT_NODE_BUDGET if node_budget is None else node_budget
    xs, ys, sampled = _pair_list(H, scope, sample, seed)

    jobs = []
    if len(xs):
        starts = np.flatnonzero(np.r_[True, xs[1:] != xs[:-1]])
        bounds = np.r_[starts, len(xs)]
        jobs = [(int(xs[a]), ys[a:b].tolist()) for a, b in zip(bounds[:-1], bounds[1:])]

    if workers <= 1 or len(jobs) < 2:
        results = _count_from_sources(H, k, cap, budget, jobs)
    else:
        size = -(-len(jobs) // workers)
        batches = [jobs[i : i + size] for i in range(0, len(jobs), size)]
        with ProcessPoolExecutor(workers) as pool:
            parts = pool.map(_count_from_sources, *zip(*[(H, k, cap, budget, b) for b in batches]))
            results = [res for batch in parts for res in batch]

    counts = np.fromiter((c for res, _ in results for c in res), dtype=np.int64, count=len(xs))
    inconclusive = [pair for _, bad in results for pair in bad]
    return PathCensus(k, cap, xs, ys, counts, sampled, scope, inconclusive)


def bad_pairs(c: PathCensus, threshold: int) -> list[tuple[int, int]]:
    """Pairs with more than ``threshold`` paths."""
    if threshold < 1:
        raise ConstructionError(f"threshold must be >= 1, got {threshold}")
    if c.cap is not None and c.cap <= threshold:
        raise ConstructionError(
            f"cap {c.cap} cannot certify counts above threshold {threshold}; need cap > threshold"
        )
    sel = np.flatnonzero(c.counts > threshold)
    return [(int(c.xs[i]), int(c.ys[i])) for i in sel]


# -- repair ------------------------------------------------------------------


@dataclass
class RepairResult:
    hypergraph: Hypergraph
    log: list[int]  # deleted edge indices, relative to the input hypergraph
    initial_bad: list[tuple[int, int]]
    initial_excess: int


def repair(H: Hypergraph, k: int, threshold: int, workers: int = 1) -> RepairResult:
    """Delete edges until no pair has more than ``threshold`` length-k paths.

    Bad pairs are handled in ascending order. While the current pair is
    still bad, the edge lying on the most of its paths is deleted (lowest
    index on ties). Counts never increase under deletion, so pairs that
    start good stay good.
    """
    if threshold < 1:
        raise ConstructionError(f"threshold must be >= 1, got {threshold}")
    initial = census(H, k, workers=workers)
    if initial.inconclusive:
        raise search.SearchInconclusive(search.DEFAULT_NODE_BUDGET)
    bad = bad_pairs(initial, threshold)
    excess = int(np.maximum(initial.counts - threshold, 0).sum())

    alive = list(range(H.m))  # current edge index -> original index
    current = H
    log: list[int] = []
    for x, y in bad:
        while True:
            paths = search.enumerate_paths(current, search.PathQuery(x, y, k))
            if len(paths) <= threshold:
                break
            usage = Counter(e for p in paths for e in p.edge_indices)
            top = max(usage.values())
            victim = min(e for e, c in usage.items() if c == top)
            log.append(alive.pop(victim))
            current = current.without_edges([victim])
    return RepairResult(current, log, bad, excess)


# -- moments -----------------------------------------------------------------


@dataclass(frozen=True)
class MomentEstimate:
    value: Fraction
    pairs: int
    lower_bound_only: bool

    def __float__(self):
        return float(self.value)


def estimate_moment(
    H: Hypergraph,
    k: int,
    m: int,
    pairs: Sequence[tuple[int, int]] | None = None,
    cap: int | None = None,
) -> MomentEstimate:
    """Average of ``count**m`` over ``pairs`` (default: all pairs ``x < y``).

    If any pair reaches ``cap`` the value is only a lower bound and is
    flagged as such.
    """
    if not 1 <= m <= 2 * k + 1:
        raise ConstructionError(f"moment order must be in [1, {2 * k + 1}], got {m}")
    if pairs is None:
        pairs = list(combinations(range(H.n), 2))
    if not pairs:
        return MomentEstimate(Fraction(0), 0, False)
    total = 0
    capped = False
    for x, y in pairs:
        c = search.count_paths(H, search.PathQuery(x, y, k, cap))
        capped |= cap is not None and c >= cap
        total += c**m
    return MomentEstimate(Fraction(total, len(pairs)), len(pairs), capped)


def pool_moments(estimates: Sequence[MomentEstimate]) -> MomentEstimate:
    """Pair-weighted average of several estimates (e.g. over seeds)."""
    pairs = sum(e.pairs for e in estimates)
    if not pairs:
        return MomentEstimate(Fraction(0), 0, False)
    value = sum((e.value * e.pairs for e in estimates), Fraction(0)) / pairs
    return MomentEstimate(value, pairs, any(e.lower_bound_only for e in estimates))
