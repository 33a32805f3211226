"""Counting and enumerating Berge paths, and searching for Berge thetas.

Paths are grown from ``x`` through the pair index of the host hypergraph;
edge distinctness is enforced with an in-progress used-edge set.

Theta search works on core sequences rather than full paths: it packs
lazily generated core sequences with disjoint interiors, and only then asks
(by bipartite matching of path steps to edges) whether every step can get
its own edge. Many paths share a core sequence, so this avoids packing over
all of them.

A theta with ``k = 1`` is read as ``t`` distinct edges that all contain
``{x, y}``. Nothing in the algorithms special-cases it.
"""

from __future__ import annotations

import os
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterator

from .hypergraph import BergePathWitness, Hypergraph, ThetaWitness

DEFAULT_NODE_BUDGET = int(os.environ.get("BERGETHETA_NODE_BUDGET", 5_000_000))


class InvalidQuery(ValueError):
    pass


class SearchInconclusive(RuntimeError):
    """The node budget ran out before the search could decide."""

    def __init__(self, budget):
        super().__init__(f"search exceeded node budget of {budget}")
        self.budget = budget


@dataclass(frozen=True)
class PathQuery:
    x: int
    y: int
    k: int
    cap: int | None = None

    def __post_init__(self):
        if self.x == self.y:
            raise InvalidQuery(f"endpoints must differ, got x = y = {self.x}")
        if self.k < 1:
            raise InvalidQuery(f"path length must be >= 1, got {self.k}")
        if self.cap is not None and self.cap < 1:
            raise InvalidQuery(f"cap must be >= 1, got {self.cap}")


class _Budget:
    __slots__ = ("left", "limit")

    def __init__(self, limit):
        self.limit = limit
        self.left = limit

    def tick(self, n=1):
        self.left -= n
        if self.left < 0:
            raise SearchInconclusive(self.limit)


class _CapReached(Exception):
    pass


def _check_vertices(H, q):
    for v in (q.x, q.y):
        if not 0 <= v < H.n:
            raise InvalidQuery(f"vertex {v} out of range [0, {H.n})")


def count_paths(H: Hypergraph, q: PathQuery, budget: _Budget | None = None) -> int:
    """Number of length-``q.k`` Berge paths from ``q.x`` to ``q.y``.

    Stops at ``q.cap`` if given; a result below the cap is exact.
    """
    _check_vertices(H, q)
    x, y, k, cap = q.x, q.y, q.k, q.cap
    edges, incident = H.edges, H._incidence
    visited = {x}
    used: set[int] = set()
    count = 0

    def grow(v, depth):
        nonlocal count
        if budget is not None:
            budget.tick()
        if depth == k - 1:
            for e in H.edges_containing(v, y):
                if e not in used:
                    count += 1
                    if cap is not None and count >= cap:
                        raise _CapReached
            return
        for e in incident[v]:
            if e in used:
                continue
            used.add(e)
            for w in edges[e]:
                if w in visited or w == y:
                    continue
                visited.add(w)
                grow(w, depth + 1)
                visited.discard(w)
            used.discard(e)

    try:
        grow(x, 0)
    except _CapReached:
        pass
    return count


def count_paths_from(H: Hypergraph, x: int, k: int, budget: _Budget | None = None) -> dict[int, int]:
    """Exact path counts from ``x`` to every reachable endpoint, in one DFS."""
    if k < 1:
        raise InvalidQuery(f"path length must be >= 1, got {k}")
    edges, incident = H.edges, H._incidence
    visited = {x}
    used: set[int] = set()
    counts: dict[int, int] = defaultdict(int)

    def grow(v, depth):
        if budget is not None:
            budget.tick()
        last = depth == k - 1
        for e in incident[v]:
            if e in used:
                continue
            if last:
                for w in edges[e]:
                    if w not in visited:
                        counts[w] += 1
                continue
            used.add(e)
            for w in edges[e]:
                if w in visited:
                    continue
                visited.add(w)
                grow(w, depth + 1)
                visited.discard(w)
            used.discard(e)

    grow(x, 0)
    return dict(counts)


def _edge_assignments(H, cores, k):
    """Distinct-edge choices for a fixed core sequence, in ascending order."""
    options = [H.edges_containing(cores[i], cores[i + 1]) for i in range(k)]
    chosen: list[int] = []

    def pick(i):
        if i == k:
            yield tuple(chosen)
            return
        for e in options[i]:
            if e in chosen:
                continue
            chosen.append(e)
            yield from pick(i + 1)
            chosen.pop()

    yield from pick(0)


def iter_paths(H: Hypergraph, q: PathQuery, budget: _Budget | None = None) -> Iterator[BergePathWitness]:
    """Yield the x-y paths of length k, lexicographically by core sequence and
    then by edge sequence."""
    for cores in _candidate_cores(H, q, budget):
        for assignment in _edge_assignments(H, cores, q.k):
            if budget is not None:
                budget.tick()
            yield BergePathWitness(cores, assignment)


def enumerate_paths(H: Hypergraph, q: PathQuery) -> list[BergePathWitness]:
    out = []
    for w in iter_paths(H, q):
        out.append(w)
        if q.cap is not None and len(out) >= q.cap:
            break
    return out


def iter_core_sequences(H: Hypergraph, q: PathQuery, budget: _Budget | None = None) -> Iterator[tuple[int, ...]]:
    """Core sequences of x-y paths (those admitting distinct edges), ascending."""
    for cores in _candidate_cores(H, q, budget):
        if _assign_edges(H, [cores], budget) is not None:
            yield cores


def _candidate_cores(H, q, budget):
    _check_vertices(H, q)
    x, y, k = q.x, q.y, q.k
    neighbors: dict[int, list[int]] = {}
    cores = [x]

    def walk(v, depth):
        if budget is not None:
            budget.tick()
        if depth == k - 1:
            if H.edges_containing(v, y):
                yield tuple(cores) + (y,)
            return
        if v not in neighbors:
            neighbors[v] = H.neighbors(v)
        for w in neighbors[v]:
            if w == y or w in cores:
                continue
            cores.append(w)
            yield from walk(w, depth + 1)
            cores.pop()

    yield from walk(x, 0)


def _assign_edges(H, core_seqs, budget):
    """Distinct edges for every step of every core sequence, or None.

    Returns the lexicographically least assignment (steps in path order,
    paths in the given order), found greedily with a matching-based
    feasibility check after each fixed step.
    """
    slots = [H.edges_containing(c[i], c[i + 1]) for c in core_seqs for i in range(len(c) - 1)]

    def feasible(fixed):
        # Kuhn's augmenting paths for the free slots, avoiding fixed edges
        owner: dict[int, int] = {}
        taken = set(fixed)

        def augment(slot, seen):
            for e in slots[slot]:
                if budget is not None:
                    budget.tick()
                if e in taken or e in seen:
                    continue
                seen.add(e)
                if e not in owner or augment(owner[e], seen):
                    owner[e] = slot
                    return True
            return False

        return all(augment(i, set()) for i in range(len(fixed), len(slots)))

    if not feasible([]):
        return None
    fixed: list[int] = []
    for i in range(len(slots)):
        for e in slots[i]:
            if e not in fixed and feasible(fixed + [e]):
                fixed.append(e)
                break
    return fixed


class _Lazy:
    def __init__(self, it):
        self._it = it
        self._items: list = []
        self._done = False

    def get(self, i):
        while len(self._items) <= i and not self._done:
            try:
                self._items.append(next(self._it))
            except StopIteration:
                self._done = True
        return self._items[i] if i < len(self._items) else None


def _pack(H, cores: _Lazy, t, budget):
    """Least t core sequences (in generation order) with disjoint interiors
    whose steps can all receive distinct edges."""
    chosen: list[tuple[int, ...]] = []
    taken: set[int] = set()

    def extend(start):
        if len(chosen) == t:
            return _assign_edges(H, chosen, budget)
        i = start
        while True:
            c = cores.get(i)
            if c is None:
                return None
            budget.tick()
            internal = set(c[1:-1])
            if not internal & taken:
                chosen.append(c)
                taken.update(internal)
                # an empty interior (k = 1) can be reused; edges still differ
                found = extend(i if not internal else i + 1)
                if found is not None:
                    return found
                chosen.pop()
                taken.difference_update(internal)
            i += 1

    edges = extend(0)
    if edges is None:
        return None
    k = len(chosen[0]) - 1
    return [BergePathWitness(c, tuple(edges[j * k : (j + 1) * k])) for j, c in enumerate(chosen)]


def find_theta_at(H: Hypergraph, x: int, y: int, k: int, t: int, node_budget: int | None = None):
    """Theta with endpoints ``x < y`` or None. See :func:`find_theta`."""
    budget = _Budget(DEFAULT_NODE_BUDGET if node_budget is None else node_budget)
    return _theta_at(H, x, y, k, t, budget)


def _theta_at(H, x, y, k, t, budget, prefiltered=False):
    if not prefiltered and count_paths(H, PathQuery(x, y, k, cap=t), budget) < t:
        return None
    paths = _pack(H, _Lazy(iter_core_sequences(H, PathQuery(x, y, k), budget)), t, budget)
    if paths is None:
        return None
    return ThetaWitness(x, y, tuple(paths))


def _check_theta_params(k, t):
    if k < 1:
        raise InvalidQuery(f"path length must be >= 1, got {k}")
    if t < 1:
        raise InvalidQuery(f"number of paths must be >= 1, got {t}")


def find_theta(H: Hypergraph, k: int, t: int, node_budget: int | None = None) -> ThetaWitness | None:
    """Find a Berge theta made of ``t`` length-``k`` paths, or return None.

    The search is exhaustive. Among all thetas it returns the least one by
    endpoints ``(x, y)`` with ``x < y``, then by the paths' core sequences.

    Raises
    ------
    SearchInconclusive
        If more than ``node_budget`` search nodes are needed. This is never
        reported as absence.
    """
    _check_theta_params(k, t)
    budget = _Budget(DEFAULT_NODE_BUDGET if node_budget is None else node_budget)
    for x in range(H.n):
        if not H.incident(x):
            continue
        counts = count_paths_from(H, x, k, budget)
        for y in sorted(y for y, c in counts.items() if y > x and c >= t):
            w = _theta_at(H, x, y, k, t, budget, prefiltered=True)
            if w is not None:
                return w
    return None


def is_theta_free(H: Hypergraph, k: int, t: int, node_budget: int | None = None) -> bool:
    return find_theta(H, k, t, node_budget) is None
