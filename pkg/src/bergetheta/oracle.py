"""Brute-force reference for Berge path counts and theta presence.

Test-only. It reads nothing from a hypergraph except ``n`` and the raw edge
tuples, and shares no code with :mod:`bergetheta.search`: paths are found by
trying every ordered choice of ``k`` distinct edges and every admissible core
sequence through it, and thetas by checking disjointness over all
``t``-subsets of those paths.
"""

from collections import Counter
from functools import lru_cache
from itertools import combinations, product

import numpy as np

MAX_VERTICES = 10
MAX_EDGES = 14


class OracleRefusal(ValueError):
    """Instance is above the oracle's soft size limit."""


def _guard(H):
    if H.n > MAX_VERTICES or len(H.edges) > MAX_EDGES:
        raise OracleRefusal(
            f"oracle limited to n <= {MAX_VERTICES}, m <= {MAX_EDGES}; "
            f"got n = {H.n}, m = {len(H.edges)}"
        )


def all_paths(H, k):
    """Every Berge path of length k as ``(cores, edge_indices)`` tuples."""
    _guard(H)
    return list(_all_paths(tuple(H.edges), k))


@lru_cache(maxsize=64)
def _all_paths(edges, k):
    sets = [frozenset(e) for e in edges]
    found = []
    # ordered choices of k distinct edges, skipping prefixes whose
    # consecutive edges are disjoint (they admit no core vertex)
    seqs = [(i,) for i in range(len(sets))]
    for _ in range(k - 1):
        seqs = [s + (j,) for s in seqs for j in range(len(sets)) if j not in s and sets[s[-1]] & sets[j]]
    for seq in seqs:
        # v_0 in h_1, v_k in h_k, and v_i in h_i ∩ h_{i+1} for 0 < i < k
        choices = [sets[seq[0]]]
        choices += [sets[seq[i]] & sets[seq[i + 1]] for i in range(k - 1)]
        choices.append(sets[seq[-1]])
        for cores in product(*choices):
            if len(set(cores)) == k + 1:
                found.append((cores, seq))
    return tuple(found)


def oracle_count_paths(H, x, y, k):
    return sum(1 for cores, _ in all_paths(H, k) if cores[0] == x and cores[-1] == y)


def oracle_count_table(H, k):
    """``{(x, y): count}`` for every ordered pair with at least one path."""
    table = Counter()
    for cores, _ in all_paths(H, k):
        table[cores[0], cores[-1]] += 1
    return table


def _has_packing(paths, t):
    if len(paths) < t:
        return False
    if t == 1:
        return True
    # a packing is t paths whose interior cores and edges are pairwise
    # disjoint; both fit in one bitmask, and paths with equal masks are
    # interchangeable
    shift = 1 + max(max(cores) for cores, _ in paths)
    masks = np.unique(
        np.array(
            [sum(1 << v for v in cores[1:-1]) | (sum(1 << e for e in seq) << shift) for cores, seq in paths],
            dtype=np.int64,
        )
    )
    compat = (masks[:, None] & masks[None, :]) == 0
    if t == 2:
        return bool(compat.any())
    if t == 3:
        c = compat.astype(np.float64)
        return bool(((c @ c) * c).any())
    for combo in combinations(range(len(masks)), t):
        if all(compat[a, b] for a, b in combinations(combo, 2)):
            return True
    return False


def oracle_has_theta(H, k, t):
    _guard(H)
    # t paths need t(k-1) interior vertices besides the two endpoints
    if t * (k - 1) + 2 > H.n or t * k > len(H.edges):
        return False
    by_pair: dict[tuple[int, int], list] = {}
    for cores, seq in all_paths(H, k):
        x, y = cores[0], cores[-1]
        if x < y:
            by_pair.setdefault((x, y), []).append((cores, seq))
    return any(_has_packing(paths, t) for paths in by_pair.values())
