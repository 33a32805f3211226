"""Uniform hypergraphs, Berge path/theta witnesses and the text file format.

Edges keep the order they were given in; several algorithms (notably the
greedy reduction) depend on it. Duplicate edges are allowed and receive
distinct indices.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence


class HypergraphError(ValueError):
    """Raised for malformed hypergraph input."""


class ParseError(HypergraphError):
    """Raised when a hypergraph text file cannot be parsed."""


@dataclass(frozen=True)
class BergePathWitness:
    """Core vertices ``v_0..v_k`` and the edge indices ``h_1..h_k`` joining them."""

    core_vertices: tuple[int, ...]
    edge_indices: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "core_vertices", tuple(self.core_vertices))
        object.__setattr__(self, "edge_indices", tuple(self.edge_indices))

    @property
    def length(self) -> int:
        return len(self.edge_indices)

    @property
    def internal(self) -> tuple[int, ...]:
        return self.core_vertices[1:-1]


@dataclass(frozen=True)
class ThetaWitness:
    x: int
    y: int
    paths: tuple[BergePathWitness, ...]

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(self.paths))

    @property
    def t(self) -> int:
        return len(self.paths)

    @property
    def k(self) -> int:
        return self.paths[0].length if self.paths else 0


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """An r-uniform (multi)hypergraph on vertices ``0..n-1``.

    Use :func:`build` (or :meth:`Hypergraph.build`) rather than the
    constructor; it validates the edges and builds the pair index.
    """

    r: int
    n: int
    edges: tuple[tuple[int, ...], ...]
    parts: tuple[int, ...] | None = None
    _pair_index: dict = field(default_factory=dict, repr=False)
    _incidence: tuple = field(default=(), repr=False)

    @classmethod
    def build(cls, r, n, edges, parts=None) -> "Hypergraph":
        return build(r, n, edges, parts)

    @property
    def m(self) -> int:
        return len(self.edges)

    def __len__(self):
        return len(self.edges)

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.r, self.n, self.edges, self.parts) == (
            other.r,
            other.n,
            other.edges,
            other.parts,
        )

    def __hash__(self):
        return hash((self.r, self.n, self.edges, self.parts))

    def edges_containing(self, u: int, v: int) -> tuple[int, ...]:
        """Indices of edges containing both ``u`` and ``v`` (ascending)."""
        if u > v:
            u, v = v, u
        return self._pair_index.get((u, v), ())

    def incident(self, v: int) -> tuple[int, ...]:
        """Indices of edges containing ``v`` (ascending)."""
        return self._incidence[v]

    def neighbors(self, v: int) -> list[int]:
        """Vertices sharing at least one edge with ``v``, ascending."""
        out = set()
        for e in self._incidence[v]:
            out.update(self.edges[e])
        out.discard(v)
        return sorted(out)

    def has_duplicate_edges(self) -> bool:
        return len(set(self.edges)) != len(self.edges)

    def without_edges(self, removed: Iterable[int]) -> "Hypergraph":
        """Copy with the given edge indices deleted, order of the rest kept."""
        removed = set(removed)
        kept = [e for i, e in enumerate(self.edges) if i not in removed]
        return build(self.r, self.n, kept, self.parts)

    def with_edges(self, extra: Iterable[Sequence[int]]) -> "Hypergraph":
        return build(self.r, self.n, list(self.edges) + [tuple(e) for e in extra], self.parts)


def _check_edge(pos, edge, r, n):
    if len(edge) != r:
        raise HypergraphError(f"edge {pos}: expected {r} vertices, got {len(edge)}")
    for v in edge:
        if not 0 <= v < n:
            raise HypergraphError(f"edge {pos}: vertex {v} out of range [0, {n})")
    if len(set(edge)) != r:
        raise HypergraphError(f"edge {pos}: duplicate vertex in {list(edge)}")


def build(r: int, n: int, edges, parts=None) -> Hypergraph:
    """Validate ``edges`` and return a hypergraph with its pair index built."""
    if r < 1:
        raise HypergraphError(f"uniformity must be positive, got {r}")
    if n < 0:
        raise HypergraphError(f"vertex count must be non-negative, got {n}")
    normalized = []
    for pos, edge in enumerate(edges):
        edge = tuple(int(v) for v in edge)
        _check_edge(pos, edge, r, n)
        normalized.append(tuple(sorted(edge)))

    if parts is not None:
        parts = tuple(int(p) for p in parts)
        if len(parts) != n:
            raise HypergraphError(f"partite layout has {len(parts)} entries, expected {n}")
        if any(not 0 <= p < r for p in parts):
            raise HypergraphError(f"part ids must lie in [0, {r})")
        for pos, edge in enumerate(normalized):
            if sorted(parts[v] for v in edge) != list(range(r)):
                raise HypergraphError(f"edge {pos}: not one vertex per part")

    pair_index = defaultdict(list)
    incidence = [[] for _ in range(n)]
    for i, edge in enumerate(normalized):
        for v in edge:
            incidence[v].append(i)
        for pair in combinations(edge, 2):
            pair_index[pair].append(i)

    return Hypergraph(
        r=r,
        n=n,
        edges=tuple(normalized),
        parts=parts,
        _pair_index={key: tuple(val) for key, val in pair_index.items()},
        _incidence=tuple(tuple(lst) for lst in incidence),
    )


def validate_path(H: Hypergraph, w: BergePathWitness) -> bool:
    """True iff ``w`` is a Berge path in ``H``. Never raises."""
    cores, idx = w.core_vertices, w.edge_indices
    k = len(idx)
    if k < 1 or len(cores) != k + 1:
        return False
    if len(set(cores)) != len(cores) or len(set(idx)) != k:
        return False
    for i, e in enumerate(idx):
        if not isinstance(e, int) or not 0 <= e < H.m:
            return False
        edge = H.edges[e]
        if cores[i] not in edge or cores[i + 1] not in edge:
            return False
    return True


def validate_theta(H: Hypergraph, w: ThetaWitness) -> bool:
    """True iff ``w`` is a Berge theta in ``H``: ``t`` valid x-y paths of equal
    length with pairwise disjoint internal cores and all edges distinct."""
    if not w.paths or w.x == w.y:
        return False
    k = w.paths[0].length
    seen_internal: set[int] = set()
    seen_edges: set[int] = set()
    for path in w.paths:
        if path.length != k or not validate_path(H, path):
            return False
        if path.core_vertices[0] != w.x or path.core_vertices[-1] != w.y:
            return False
        internal = set(path.internal)
        if internal & seen_internal:
            return False
        edges = set(path.edge_indices)
        if edges & seen_edges:
            return False
        seen_internal |= internal
        seen_edges |= edges
    return True


# -- text format -------------------------------------------------------------


def dumps(H: Hypergraph, sources: Sequence[int] | None = None) -> str:
    """Serialize to the line format ``r n m`` / edges / optional ``parts``.

    ``sources`` appends a ``sources`` line (used by reduced graphs).
    """
    lines = [f"{H.r} {H.n} {H.m}"]
    lines.extend(" ".join(map(str, e)) for e in H.edges)
    if H.parts is not None:
        lines.append("parts " + " ".join(map(str, H.parts)))
    if sources is not None:
        lines.append("sources " + " ".join(map(str, sources)))
    return "\n".join(lines) + "\n"


def _ints(tokens, lineno):
    try:
        return [int(tok) for tok in tokens]
    except ValueError:
        raise ParseError(f"line {lineno}: expected integers, got {' '.join(tokens)!r}") from None


def loads_with_sources(text: str) -> tuple[Hypergraph, list[int] | None]:
    rows = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        rows.append((lineno, line.split()))
    if not rows:
        raise ParseError("empty input: missing header line 'r n m'")

    lineno, header = rows[0]
    if len(header) != 3:
        raise ParseError(f"line {lineno}: header must be 'r n m'")
    r, n, m = _ints(header, lineno)
    body = rows[1:]
    if len(body) < m:
        raise ParseError(f"expected {m} edge lines, found {len(body)}")

    edges = []
    for lineno, toks in body[:m]:
        edge = _ints(toks, lineno)
        if edge != sorted(edge):
            raise ParseError(f"line {lineno}: edge vertices must be ascending")
        edges.append(edge)

    parts = sources = None
    tail = list(body[m:])
    while tail:
        lineno, toks = tail.pop(0)
        key, rest = toks[0], toks[1:]
        # the ids may also sit on the line after a bare keyword
        if not rest and tail and key in ("parts", "sources"):
            rest = tail.pop(0)[1]
        if key == "parts" and parts is None:
            parts = _ints(rest, lineno)
        elif key == "sources" and sources is None:
            sources = _ints(rest, lineno)
            if len(sources) != m:
                raise ParseError(f"line {lineno}: expected {m} sources, got {len(sources)}")
        else:
            raise ParseError(f"line {lineno}: unexpected content {key!r}")
    try:
        H = build(r, n, edges, parts)
    except ParseError:
        raise
    except HypergraphError as exc:
        raise ParseError(str(exc)) from None
    return H, sources


def loads(text: str) -> Hypergraph:
    return loads_with_sources(text)[0]


def read(path) -> Hypergraph:
    with open(path, encoding="ascii") as fh:
        return loads(fh.read())


def write(H: Hypergraph, path, sources=None) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps(H, sources))
