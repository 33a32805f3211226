"""Dense multivariate polynomials of bounded total degree over F_p.

Coefficients are stored one per monomial in graded lexicographic order:
monomials are sorted by total degree, and within a degree by exponent
vector in descending lexicographic order, so for two variables and
``d = 2`` the order is ``1, x1, x2, x1^2, x1 x2, x2^2``.

Batch evaluation builds every monomial value at a point from a
lower-degree monomial with one multiplication (each monomial of degree
``>= 1`` has a fixed parent: itself with the first non-zero exponent
decreased by one), then takes the dot product with the coefficient rows of
all polynomials at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Sequence

import numpy as np

from ._accel import njit, numba_enabled
from .field import FieldElement, check_modulus

INT64_MAX = 2**63 - 1
FLOAT_EXACT = 2**53


class PolyError(ValueError):
    pass


def monomial_count(nvars: int, d: int) -> int:
    if nvars < 1 or d < 0:
        raise PolyError(f"need nvars >= 1 and d >= 0, got nvars = {nvars}, d = {d}")
    return comb(nvars + d, d)


def _of_degree(nvars, deg):
    if nvars == 1:
        yield (deg,)
        return
    for a in range(deg, -1, -1):
        for rest in _of_degree(nvars - 1, deg - a):
            yield (a,) + rest


@lru_cache(maxsize=32)
def monomials(nvars: int, d: int) -> np.ndarray:
    """Exponent vectors in canonical order, shape ``(monomial_count, nvars)``."""
    rows = [e for deg in range(d + 1) for e in _of_degree(nvars, deg)]
    out = np.array(rows, dtype=np.int64).reshape(len(rows), nvars)
    out.setflags(write=False)
    return out


@lru_cache(maxsize=32)
def monomial_tree(nvars: int, d: int) -> tuple[np.ndarray, np.ndarray]:
    """``(parent, var)`` arrays: monomial j equals monomial ``parent[j]`` times
    variable ``var[j]``. Entry 0 (the constant) points at itself."""
    exps = monomials(nvars, d)
    index = {tuple(row): j for j, row in enumerate(exps.tolist())}
    parent = np.zeros(len(exps), dtype=np.int64)
    var = np.zeros(len(exps), dtype=np.int64)
    for j, row in enumerate(exps.tolist()):
        if j == 0:
            continue
        i = next(i for i, a in enumerate(row) if a)
        row[i] -= 1
        parent[j] = index[tuple(row)]
        var[j] = i
    parent.setflags(write=False)
    var.setflags(write=False)
    return parent, var


@dataclass(frozen=True, eq=False)
class MultiPoly:
    p: int
    nvars: int
    d: int
    coeffs: np.ndarray

    def __post_init__(self):
        check_modulus(self.p)
        coeffs = np.array(self.coeffs, dtype=np.int64)
        if coeffs.shape != (monomial_count(self.nvars, self.d),):
            raise PolyError(
                f"expected {monomial_count(self.nvars, self.d)} coefficients, got shape {coeffs.shape}"
            )
        if coeffs.size and (coeffs.min() < 0 or coeffs.max() >= self.p):
            raise PolyError(f"coefficients must lie in [0, {self.p})")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def __eq__(self, other):
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return (self.p, self.nvars, self.d) == (other.p, other.nvars, other.d) and np.array_equal(
            self.coeffs, other.coeffs
        )

    @classmethod
    def zero(cls, p, nvars, d):
        return cls(p, nvars, d, np.zeros(monomial_count(nvars, d), dtype=np.int64))

    @classmethod
    def from_terms(cls, p, nvars, d, terms: dict) -> "MultiPoly":
        """Build from ``{exponent tuple: coefficient}``."""
        index = {tuple(row): j for j, row in enumerate(monomials(nvars, d).tolist())}
        coeffs = np.zeros(len(index), dtype=np.int64)
        for exps, c in terms.items():
            exps = tuple(exps)
            if exps not in index:
                raise PolyError(f"monomial {exps} not in P_{d} on {nvars} variables")
            coeffs[index[exps]] = (coeffs[index[exps]] + c) % p
        return cls(p, nvars, d, coeffs)

    def evaluate(self, x: Sequence[int]) -> FieldElement:
        return evaluate(self, x)

    def evaluate_batch(self, points) -> np.ndarray:
        return evaluate_batch(self, points)


def sample_uniform(p: int, nvars: int, d: int, rng: np.random.Generator) -> MultiPoly:
    """Every coefficient independent and uniform on F_p, drawn from ``rng``."""
    check_modulus(p)
    coeffs = rng.integers(0, p, size=monomial_count(nvars, d), dtype=np.int64)
    return MultiPoly(p, nvars, d, coeffs)


def poly_rng(seed: int, index: int = 0) -> np.random.Generator:
    """PCG64 stream number ``index`` derived from ``seed``.

    Equivalent to ``Generator(PCG64(SeedSequence(seed, spawn_key=(index,))))``.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def evaluate(f: MultiPoly, x: Sequence[int]) -> FieldElement:
    """Term-by-term evaluation with Python integers."""
    if len(x) != f.nvars:
        raise PolyError(f"point has {len(x)} coordinates, polynomial has {f.nvars} variables")
    p = f.p
    x = [int(v) % p for v in x]
    total = 0
    for c, exps in zip(f.coeffs.tolist(), monomials(f.nvars, f.d).tolist()):
        if c:
            term = c
            for xi, a in zip(x, exps):
                term = term * pow(xi, a, p) % p
            total += term
    return FieldElement(total % p, p)


def _flush_interval(p):
    # terms of size <= (p-1)^2 that can be added to an accumulator < p
    return max(1, (INT64_MAX - p) // max(1, (p - 1) ** 2))


@njit(cache=True, nogil=True)
def _eval_kernel_int(points, parent, var, coeffs, p, flush):
    n = points.shape[0]
    nmono = parent.shape[0]
    s = coeffs.shape[0]
    out = np.empty((n, s), dtype=np.int64)
    mono = np.empty(nmono, dtype=np.int64)
    for i in range(n):
        mono[0] = 1
        for j in range(1, nmono):
            mono[j] = mono[parent[j]] * points[i, var[j]] % p
        for a in range(s):
            acc = 0
            for lo in range(0, nmono, flush):
                hi = min(lo + flush, nmono)
                for j in range(lo, hi):
                    acc += coeffs[a, j] * mono[j]
                acc %= p
            out[i, a] = acc
    return out


@njit(cache=True, nogil=True)
def _eval_kernel_float(points, parent, var, coeffs, p, block):
    # Exact while p**2 < 2**44 and nmono * (p-1)**2 < 2**53. Points are
    # processed in blocks so the inner loops run over contiguous lanes.
    n, nv = points.shape
    nmono = parent.shape[0]
    s = coeffs.shape[0]
    out = np.empty((n, s), dtype=np.int64)
    pf = float(p)
    inv = 1.0 / pf
    cf = coeffs.astype(np.float64)
    mono = np.empty((nmono, block))
    cols = np.empty((nv, block))
    acc = np.empty((s, block))
    for lo in range(0, n, block):
        m = min(block, n - lo)
        for v in range(nv):
            for b in range(m):
                cols[v, b] = points[lo + b, v]
        for b in range(m):
            mono[0, b] = 1.0
        for j in range(1, nmono):
            pj = parent[j]
            vj = var[j]
            for b in range(m):
                x = mono[pj, b] * cols[vj, b]
                # the +0.5 keeps the quotient clear of integers, so the
                # floor is exact without a correction branch
                mono[j, b] = x - np.floor((x + 0.5) * inv) * pf
        acc[:, :] = 0.0
        for a in range(s):
            for j in range(nmono):
                c = cf[a, j]
                for b in range(m):
                    acc[a, b] += c * mono[j, b]
        for a in range(s):
            for b in range(m):
                x = acc[a, b]
                r = x - np.floor(x * inv) * pf
                if r >= pf:
                    r -= pf
                elif r < 0.0:
                    r += pf
                out[lo + b, a] = np.int64(r)
    return out


def _float_exact(p, nmono):
    return p * p < 2**44 and nmono * (p - 1) ** 2 < FLOAT_EXACT


def _eval_numpy(points, parent, var, coeffs, p, chunk=1024):
    n = points.shape[0]
    nmono = parent.shape[0]
    out = np.empty((n, coeffs.shape[0]), dtype=np.int64)
    exact_float = nmono * (p - 1) ** 2 < FLOAT_EXACT
    flush = _flush_interval(p)
    for lo in range(0, n, chunk):
        cols = points[lo : lo + chunk].T
        mono = np.empty((nmono, cols.shape[1]), dtype=np.int64)
        mono[0] = 1
        for j in range(1, nmono):
            np.multiply(mono[parent[j]], cols[var[j]], out=mono[j])
            np.remainder(mono[j], p, out=mono[j])
        if exact_float:
            vals = (coeffs.astype(np.float64) @ mono.astype(np.float64)).astype(np.int64) % p
        else:
            vals = np.zeros((coeffs.shape[0], cols.shape[1]), dtype=np.int64)
            for b in range(0, nmono, flush):
                vals = (vals + coeffs[:, b : b + flush] @ mono[b : b + flush]) % p
        out[lo : lo + chunk] = vals.T
    return out


def _as_points(points, nvars, p):
    pts = np.asarray(points, dtype=np.int64)
    if pts.size == 0:
        return pts.reshape(0, nvars)
    if pts.ndim != 2 or pts.shape[1] != nvars:
        raise PolyError(f"points must have shape (n, {nvars}), got {pts.shape}")
    return np.ascontiguousarray(pts % p)


def evaluate_many(polys: Sequence[MultiPoly], points, use_numba: bool | None = None) -> np.ndarray:
    """Values of every polynomial at every point, shape ``(len(points), len(polys))``.

    All polynomials must share ``p``, ``nvars`` and ``d``.
    """
    if not polys:
        raise PolyError("need at least one polynomial")
    f0 = polys[0]
    if any((f.p, f.nvars, f.d) != (f0.p, f0.nvars, f0.d) for f in polys):
        raise PolyError("polynomials must share modulus, variable count and degree bound")
    pts = _as_points(points, f0.nvars, f0.p)
    if len(pts) == 0:
        return np.empty((0, len(polys)), dtype=np.int64)
    parent, var = monomial_tree(f0.nvars, f0.d)
    coeffs = np.ascontiguousarray(np.stack([f.coeffs for f in polys]))
    if use_numba is None:
        use_numba = numba_enabled()
    if use_numba:
        if _float_exact(f0.p, len(parent)):
            return _eval_kernel_float(pts, parent, var, coeffs, f0.p, 32)
        return _eval_kernel_int(pts, parent, var, coeffs, f0.p, _flush_interval(f0.p))
    return _eval_numpy(pts, parent, var, coeffs, f0.p)


def evaluate_batch(f: MultiPoly, points, use_numba: bool | None = None) -> np.ndarray:
    return evaluate_many([f], points, use_numba)[:, 0]


# -- dump format -------------------------------------------------------------


def dumps(f: MultiPoly) -> str:
    return f"{f.p} {f.nvars} {f.d}\n" + " ".join(map(str, f.coeffs.tolist())) + "\n"


def loads(text: str) -> MultiPoly:
    tokens = text.split()
    if len(tokens) < 3:
        raise PolyError("missing header 'p nvars d'")
    p, nvars, d = (int(t) for t in tokens[:3])
    return MultiPoly(p, nvars, d, np.array([int(t) for t in tokens[3:]], dtype=np.int64))
