"""Greedy reduction of an r-uniform hypergraph to an m-uniform multigraph.

Hyperedges are processed in stored order; each contributes the m-subset
of itself that has been chosen the fewest times so far. For a simple
hypergraph without a Berge theta, every m-set ends up with multiplicity at
most :func:`multiplicity_bound`, and a theta among the chosen m-sets lifts
back to a theta in the source.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from math import comb

from .hypergraph import BergePathWitness, Hypergraph, ThetaWitness, build, validate_theta
from .hypergraph import dumps as _dumps

TIE_BREAKS = ("lex", "random")


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class ReductionParams:
    m: int
    tie_break: str = "lex"
    seed: int = 0  # only read by the random tie-break

    def __post_init__(self):
        if self.m < 2:
            raise ReductionError(f"target uniformity must be >= 2, got {self.m}")
        if self.tie_break not in TIE_BREAKS:
            raise ReductionError(f"unknown tie-break {self.tie_break!r}; choose from {TIE_BREAKS}")


@dataclass(frozen=True, eq=False)
class ReducedGraph:
    """Chosen m-sets, one instance per source hyperedge, in source order."""

    m: int
    n: int
    instances: tuple[tuple[tuple[int, ...], int], ...]
    multiplicity: Counter = field(repr=False)

    @property
    def sources(self) -> list[int]:
        return [src for _, src in self.instances]

    def max_multiplicity(self) -> int:
        return max(self.multiplicity.values(), default=0)

    def as_hypergraph(self) -> Hypergraph:
        """Instances as the edge list of an m-uniform multihypergraph.

        Edge ``i`` of the result is instance ``i``.
        """
        return build(self.m, self.n, [mset for mset, _ in self.instances])


def reduce(H: Hypergraph, params: ReductionParams | int) -> ReducedGraph:
    if isinstance(params, int):
        params = ReductionParams(params)
    m = params.m
    if m >= H.r:
        raise ReductionError(f"need m < r, got m = {m}, r = {H.r}")
    rng = random.Random(params.seed) if params.tie_break == "random" else None

    counts: Counter = Counter()
    instances = []
    for i, edge in enumerate(H.edges):
        candidates = list(combinations(edge, m))
        low = min(counts[c] for c in candidates)
        tied = [c for c in candidates if counts[c] == low]
        chosen = tied[0] if rng is None else rng.choice(tied)
        counts[chosen] += 1
        instances.append((chosen, i))
    return ReducedGraph(m=m, n=H.n, instances=tuple(instances), multiplicity=counts)


def multiplicity_bound(k: int, t: int, r: int, m: int) -> int:
    """Sum over j = 1..k+1 of C(m k (t-1) + j m - m, r - m), plus k + 1."""
    if k < 2:
        raise ReductionError(f"need k >= 2, got {k}")
    if t < 1:
        raise ReductionError(f"need t >= 1, got {t}")
    if not 2 <= m < r:
        raise ReductionError(f"need 2 <= m < r, got m = {m}, r = {r}")
    # math.comb(a, b) is 0 for b > a
    return sum(comb(m * k * (t - 1) + j * m - m, r - m) for j in range(1, k + 2)) + k + 1


def lift_theta(G: ReducedGraph, w: ThetaWitness, H: Hypergraph | None = None) -> ThetaWitness:
    """Replace each instance in ``w`` by its source hyperedge.

    If ``H`` is given the lifted witness is also checked against it.
    """
    if not validate_theta(G.as_hypergraph(), w):
        raise ReductionError("witness is not a valid theta in the reduced graph")
    sources = G.sources
    lifted = ThetaWitness(
        w.x,
        w.y,
        tuple(
            BergePathWitness(p.core_vertices, tuple(sources[e] for e in p.edge_indices))
            for p in w.paths
        ),
    )
    if H is not None and not validate_theta(H, lifted):
        raise ReductionError("lifted witness does not validate on the source hypergraph")
    return lifted


def dumps(G: ReducedGraph) -> str:
    return _dumps(G.as_hypergraph(), sources=G.sources)


def from_hypergraph(H: Hypergraph, sources) -> ReducedGraph:
    """Rebuild a reduced graph from its serialized edge list and sources."""
    instances = tuple((tuple(e), int(s)) for e, s in zip(H.edges, sources))
    return ReducedGraph(H.r, H.n, instances, Counter(e for e, _ in instances))
