"""Pilot runs that calibrate the default bad-pair threshold.

    python3 benchmarks/pilot.py -k 2 -r 3 --qs 3 5 7 --seeds 1000 1019

For each q and seed: build the graph, count length-k Berge paths for all
pairs, and record the number of bad pairs per threshold. At the largest q
each candidate threshold is also repaired. The chosen threshold is the
smallest one whose repair deletes <= 5% of edges on every seed. These
seeds are disjoint from the evaluation seeds 0..9.
"""

import argparse
import json
import statistics

from bergetheta import construction as con


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("-k", type=int, default=2)
    ap.add_argument("-r", type=int, default=3)
    ap.add_argument("--qs", type=int, nargs="+", default=[3, 5, 7])
    ap.add_argument("--seeds", type=int, nargs=2, default=[1000, 1019], metavar=("FIRST", "LAST"))
    ap.add_argument("--thresholds", type=int, nargs="+", default=list(range(6, 15)))
    ap.add_argument("--limit", type=float, default=0.05, help="max deleted fraction")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--json", default=None, help="write the full table here")
    args = ap.parse_args(argv)

    seeds = range(args.seeds[0], args.seeds[1] + 1)
    top = max(args.qs)
    table = {"edges": {}, "bad": {}, "deleted": {}}
    for q in args.qs:
        edges, bad = [], {t: [] for t in args.thresholds}
        deleted = {t: [] for t in args.thresholds}
        for seed in seeds:
            H = con.build_graph(con.ConstructionParams(args.k, args.r, q, seed=seed), workers=args.workers).hypergraph
            edges.append(H.m)
            c = con.census(H, args.k, workers=args.workers)
            for t in args.thresholds:
                bad[t].append(int((c.counts > t).sum()))
                if q == top:
                    deleted[t].append(len(con.repair(H, args.k, t, args.workers).log) / max(H.m, 1))
        table["edges"][q] = statistics.mean(edges)
        table["bad"][q] = {t: statistics.mean(v) for t, v in bad.items()}
        if q == top:
            table["deleted"] = {t: (statistics.mean(v), max(v)) for t, v in deleted.items()}
        print(f"q={q}: mean edges {table['edges'][q]:.2f}")
        print("  mean bad pairs: " + ", ".join(f"T={t}: {m:.2f}" for t, m in table["bad"][q].items()))

    print(f"repair at q={top} (mean / max deleted fraction):")
    for t, (mean, worst) in table["deleted"].items():
        print(f"  T={t}: {100 * mean:.2f}% / {100 * worst:.2f}%")
    ok = [t for t, (_, worst) in table["deleted"].items() if worst <= args.limit]
    print(f"chosen threshold: {min(ok) if ok else 'none within limit'}")
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(table, fh, indent=2, sort_keys=True, default=str)


if __name__ == "__main__":
    main()
