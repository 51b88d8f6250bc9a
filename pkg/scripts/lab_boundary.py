#!/usr/bin/env python3
"""Fraction of random systems with a found destabiliser, across an alpha grid.

    python3 scripts/lab_boundary.py 2 3 3 --alphas 1/2,9/10,1,11/10,2 --seeds 50
"""
import argparse
import sys
import time

from cohsys import knowledge as kn, lab
from cohsys.core import SystemType, fmt_ext, parse_rat


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--alphas", default="1/2,9/10,1,11/10,2")
    p.add_argument("--seeds", type=int, default=50)
    p.add_argument("--budget", type=int, default=2000)
    args = p.parse_args(argv)

    know = kn.classify(SystemType(args.n, args.d, args.k))
    print(f"({args.n},{args.d},{args.k}): {know.status.value} "
          f"{know.interval or know.nonempty_hull or ''}")
    for text in args.alphas.split(","):
        alpha = parse_rat(text)
        start = time.perf_counter()
        hits, kinds = 0, set()
        for seed in range(args.seeds):
            rep = lab.violation_search(lab.sample_system(args.n, args.d, args.k, seed),
                                       alpha, args.budget, seed)
            hits += bool(rep.violations)
            kinds.update((v.n1, v.d1, v.k1) for v in rep.violations)
        certified = know.contains(alpha)
        print(f"  alpha={fmt_ext(alpha):>6}  certified={str(certified):5}  "
              f"violations {hits}/{args.seeds}  types={sorted(kinds)}  "
              f"{time.perf_counter() - start:.1f}s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
