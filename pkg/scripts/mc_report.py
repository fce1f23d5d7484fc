#!/usr/bin/env python3
"""Monte Carlo necessity run across several seeds, one summary row per seed."""

import argparse
import time

from sniep5 import oracle


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seeds", type=int, nargs="+", default=[7, 11, 2009])
    p.add_argument("--workers", type=int, default=1)
    args = p.parse_args()
    print("seed,trials,violations,max_violation,seconds")
    for seed in args.seeds:
        t0 = time.perf_counter()
        rep = oracle.mc_necessity(args.trials, seed, workers=args.workers)
        print(f"{seed},{rep.samples},{len(rep.violating_points)},{rep.max_violation:.3e},{time.perf_counter() - t0:.2f}")


if __name__ == "__main__":
    main()
