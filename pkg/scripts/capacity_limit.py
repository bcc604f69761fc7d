"""Convergence of the per-node capacity ratio and an occupancy check.

Tabulates capacity_per_node(n, beta) / n^{-2 beta} on a doubling grid
for three range exponents; the beta = 0 column approaches 1 - 2/e.  An
independent Monte Carlo of the two-or-more occupancy of unit cells
cross-checks the closed form the capacity expression is built from.
"""

import argparse
import math
import sys

import numpy as np

from mobidelay.analytics import capacity_ratio, cell_occupancy_prob


def occupancy_mc(rng, n, placements):
    side = int(round(math.sqrt(n)))
    frac = np.empty(placements)
    for k in range(placements):
        x = rng.uniform(0.0, side, n)
        y = rng.uniform(0.0, side, n)
        cells = np.floor(x).astype(int) * side + np.floor(y).astype(int)
        frac[k] = np.mean(np.bincount(cells, minlength=side * side) >= 2)
    return frac.mean(), frac.std(ddof=1) / math.sqrt(placements)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--placements", type=int, default=300)
    ap.add_argument("--seed", type=int, default=0x5EED_CAFE)
    args = ap.parse_args()

    betas = (0.0, 0.125, 0.25)
    print("n        " + "".join(f"beta={b:<11}" for b in betas))
    n = 10**4
    while n <= 10**7:
        cells = "".join(f"{capacity_ratio(n, b):<16.10f}" for b in betas)
        print(f"{n:<9d}{cells}")
        n *= 10
    limit = 1.0 - 2.0 * math.exp(-1.0)
    print(f"beta=0 limit: {limit:.10f}")

    n = 10**4
    mc, se = occupancy_mc(np.random.default_rng(args.seed), n,
                          args.placements)
    closed = cell_occupancy_prob(n, 1.0)
    ok = abs(mc - closed) <= 3 * se
    print(f"occupancy at n={n}: MC {mc:.5f} +- {se:.5f}, "
          f"closed form {closed:.5f} -> {'ok' if ok else 'VIOLATION'}")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
