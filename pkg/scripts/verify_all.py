#!/usr/bin/env python3
"""Run the full verification report for a range of orders and summarise it."""

import argparse
import time

from uinvariants.cli import CliConfig, _run_checks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--max-n", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--trials", type=int, default=20)
    args = ap.parse_args()

    all_ok = True
    print(f"{'n':>3} {'checks':>7} {'failed':>7} {'seconds':>8}")
    for n in range(1, args.max_n + 1):
        t0 = time.perf_counter()
        checks = _run_checks(CliConfig("verify", n=n, seed=args.seed, trials=args.trials))
        failed = [c for c in checks if not c["passed"]]
        all_ok &= not failed
        print(f"{n:>3} {len(checks):>7} {len(failed):>7} {time.perf_counter() - t0:>8.2f}")
        for c in failed:
            print(f"    failed: {c['name']} {c.get('k', '')} {c.get('i', '')}")
    raise SystemExit(0 if all_ok else 1)


if __name__ == "__main__":
    main()
