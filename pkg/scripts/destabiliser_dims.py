#!/usr/bin/env python3
"""Expected dimension of the locus of destabilising subsheaves of a fixed
general (E, V), per candidate splitting type, at one alpha.

For E1 = sum O(b_j) mapping into E, the images form a family of dimension
hom(E1, E) - aut(E1); requiring dim(V cap H^0(E1)) >= k1 is a Schubert
condition of codimension k1 (h0(E) - k - h0(E1) + k1). A negative result
means a general V has no such subsheaf. Zero with codimension zero is a
forced intersection (every sample finds it); zero with positive codimension
is a finite set of special maps, which random sampling hits with
probability zero.

    python3 scripts/destabiliser_dims.py 6 7 4 5/2
"""
import argparse
import sys

from cohsys import lab
from cohsys.core import alpha_slope, h0_split, parse_rat


def hom_dim(src, dst):
    return sum(max(0, a - b + 1) for a in dst for b in src)


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("k", type=int)
    p.add_argument("alpha")
    args = p.parse_args(argv)
    alpha = parse_rat(args.alpha)
    bundle = lab.generic_bundle(args.n, args.d)
    target = alpha_slope(args.n, args.d, args.k, alpha)
    best = None
    for sub in lab.subtype_catalog(bundle, args.k, alpha):
        h1 = h0_split(sub)
        for k1 in range(0, min(args.k, h1) + 1):
            if alpha_slope(len(sub), sum(sub), k1, alpha) < target:
                continue
            family = hom_dim(sub, bundle.degrees) - hom_dim(sub, sub)
            codim = k1 * (bundle.h0 - args.k - h1 + k1)
            exp = family - codim
            best = exp if best is None else max(best, exp)
            note = " forced" if codim == 0 else (" isolated" if exp == 0 else "")
            print(f"  E1={list(sub)} k1={k1}: family {family}, codim {codim}, expected {exp}{note}")
            break  # larger k1 only raises the codimension
    print(f"max expected dimension: {best}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
