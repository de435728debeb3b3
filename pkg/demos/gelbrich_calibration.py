#!/usr/bin/env python3
"""Calibration behind the 0.15 slack in the empirical distance check.

The closed-form Gaussian W2 lower-bounds the distance between the laws,
but the empirical estimate on n samples is biased and noisy, so the
one-sided check `empirical >= closed_form * (1 - slack)` needs a slack
calibrated at the working sample size. This script reproduces that
calibration: for a spread of Gaussian pairs it reports the ratio
empirical / closed_form over 20 seeds at n = 64 .. 512, plus the median
absolute error as n doubles. The worst observed ratio at n = 512 sits
comfortably above 0.85, which is where the shipped slack of 0.15 comes
from.
"""

import numpy as np

from robust_shannon import GaussianLaw, SpdMatrix, check_gelbrich, gaussian_w2


def random_pair(rng, max_dim=4):
    d = int(rng.integers(1, max_dim + 1))
    laws = []
    for _ in range(2):
        g = rng.standard_normal((d, d))
        cov = SpdMatrix(g @ g.T + 0.2 * np.eye(d))
        laws.append(GaussianLaw(rng.standard_normal(d), cov))
    return laws


def main():
    rng = np.random.default_rng(2024)
    sizes = (64, 128, 256, 512)
    seeds = 20
    print(f"{'pair':>4} {'d':>2} {'closed':>8} | ratio min/median at each n")
    worst_at_512 = 1.0
    for pair_idx in range(10):
        p, q = random_pair(rng)
        closed = gaussian_w2(p, q)
        cells = []
        for n in sizes:
            ratios = sorted(
                check_gelbrich(p, q, n, 500 + pair_idx * 100 + s).empirical / closed
                for s in range(seeds)
            )
            median = 0.5 * (ratios[seeds // 2 - 1] + ratios[seeds // 2])
            cells.append(f"{ratios[0]:.3f}/{median:.3f}")
            if n == 512:
                worst_at_512 = min(worst_at_512, ratios[0])
        print(f"{pair_idx:>4} {p.dim:>2} {closed:8.4f} | " + "  ".join(cells))
    print()
    print(f"worst ratio across all pairs and seeds at n=512: {worst_at_512:.4f}")
    print("shipped slack: 0.15 (check passes when the ratio stays above 0.85)")
    print()
    print("Median |empirical - closed| as n doubles (should be non-increasing):")
    rng = np.random.default_rng(7)
    for pair_idx in range(3):
        p, q = random_pair(rng, max_dim=3)
        closed = gaussian_w2(p, q)
        medians = []
        for n in sizes:
            errors = sorted(
                abs(check_gelbrich(p, q, n, 900 + pair_idx * 1000 + s).empirical - closed)
                for s in range(seeds)
            )
            medians.append(0.5 * (errors[9] + errors[10]))
        trend = "  ".join(f"{m:.4f}" for m in medians)
        print(f"  pair {pair_idx} (d={p.dim}): {trend}")


if __name__ == "__main__":
    main()
