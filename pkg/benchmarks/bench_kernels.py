"""Time batch polynomial evaluation: numba kernels vs the numpy fallback.

    python3 benchmarks/bench_kernels.py --points 20000 --repeat 3

The default workload is one chunk of the q = 7 construction scan
(k = 2, r = 3: 3 polynomials of degree 10 in 6 variables, 8008 monomials).
A large prime is also timed to exercise the integer kernel.
"""

import argparse
import time

import numpy as np

from bergetheta import poly
from bergetheta._accel import HAVE_NUMBA


def _best(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=20_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--nvars", type=int, default=6)
    ap.add_argument("--degree", type=int, default=10)
    ap.add_argument("--polys", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy path can be timed")
    rng = np.random.default_rng(args.seed)
    print(f"{args.polys} polys, {poly.monomial_count(args.nvars, args.degree)} monomials, {args.points} points")
    print(f"{'p':>12} {'kernel':>8} {'numba s':>9} {'numpy s':>9} {'speedup':>8}")
    for p in (7, 2_147_483_647):
        fs = [poly.sample_uniform(p, args.nvars, args.degree, rng) for _ in range(args.polys)]
        pts = rng.integers(0, p, size=(args.points, args.nvars))
        slow = _best(lambda: poly.evaluate_many(fs, pts, use_numba=False), args.repeat)
        if HAVE_NUMBA:
            expected = poly.evaluate_many(fs, pts, use_numba=True)  # also compiles
            assert (expected == poly.evaluate_many(fs, pts, use_numba=False)).all()
            fast = _best(lambda: poly.evaluate_many(fs, pts, use_numba=True), args.repeat)
            kind = "float" if poly._float_exact(p, len(fs[0].coeffs)) else "int"
            print(f"{p:>12} {kind:>8} {fast:>9.3f} {slow:>9.3f} {slow / fast:>7.1f}x")
        else:
            print(f"{p:>12} {'-':>8} {'-':>9} {slow:>9.3f} {'-':>8}")


if __name__ == "__main__":
    main()
