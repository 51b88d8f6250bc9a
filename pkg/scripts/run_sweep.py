#!/usr/bin/env python3
"""Classify the desk lattice n <= 8, a <= 5 and write CSV plus a status tally.

    python3 scripts/run_sweep.py --out results/lattice.csv --jobs 2
"""
import argparse
import collections
import sys
from pathlib import Path

from cohsys import cli


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", default="1:8")
    p.add_argument("--a", default="1:5")
    p.add_argument("--k", default="1:(a+1)*n")
    p.add_argument("--mode", default="conjectures", choices=cli.MODES)
    p.add_argument("--out", type=Path, default=Path("results/lattice.csv"))
    p.add_argument("--cache", type=Path, default=Path("results/cache.jsonl"))
    p.add_argument("--jobs", type=int, default=1)
    args = p.parse_args(argv)

    args.out.parent.mkdir(parents=True, exist_ok=True)
    spec = cli.SweepSpec(n=args.n, a=args.a, t="all", k=args.k, mode=args.mode,
                         fmt="csv", cache=args.cache, jobs=args.jobs, out=args.out)
    records, counts, hits = cli.run_sweep(spec)
    args.out.write_text(cli.render(records, "csv"), encoding="utf-8")

    by_a = collections.defaultdict(collections.Counter)
    for r in records:
        by_a[r.a][r.status] += 1
    print(f"{len(records)} points ({hits} from cache) -> {args.out}")
    for a in sorted(by_a):
        row = " ".join(f"{s}={by_a[a][s]}" for s in counts)
        print(f"  a={a}: {row}")
    flagged = [r for r in records if r.flags]
    for r in flagged:
        print(f"  flagged {r.key}: {';'.join(r.flags)} status={r.status}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
