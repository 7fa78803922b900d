#!/usr/bin/env python3
"""Time cofactor expansion against fraction-free elimination on random rational matrices."""

import argparse
import random
import time

from uinvariants.generators import random_matrix
from uinvariants.symmatrix import det_bareiss, det_cofactor


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=9)
    ap.add_argument("--count", type=int, default=50)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'n':>3} {'cofactor_ms':>12} {'bareiss_ms':>11} agree")
    for n in range(1, args.max_n + 1):
        rng = random.Random(f"{args.seed}/bench/{n}")
        mats = [random_matrix(n, rng) for _ in range(args.count)]
        t0 = time.perf_counter()
        a = [det_cofactor(m) for m in mats]
        t1 = time.perf_counter()
        b = [det_bareiss(m) for m in mats]
        t2 = time.perf_counter()
        per = 1000 / args.count
        print(f"{n:>3} {(t1 - t0) * per:>12.3f} {(t2 - t1) * per:>11.3f} {a == b}")


if __name__ == "__main__":
    main()
