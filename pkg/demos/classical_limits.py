#!/usr/bin/env python3
"""Tour of the classical Gaussian limits.

Walks the scalar rate-distortion curve, opens up the reverse-waterfilling
allocation for a two-mode source, builds the linear test channel that
achieves the rate, and waterfills a MIMO channel. Everything prints as
small tables; no plotting.
"""

import math

import numpy as np

from robust_shannon import (
    SpdMatrix,
    gaussian_capacity,
    gaussian_mi,
    gaussian_rdf,
    rdf_realization,
    reverse_waterfill,
)


def scalar_rate_distortion():
    print("Scalar Gaussian source, variance 4")
    print(f"{'D':>6} {'rate (nats)':>12} {'closed form':>12}")
    for distortion in (0.25, 0.5, 1.0, 2.0, 4.0, 8.0):
        rate = gaussian_rdf(SpdMatrix.from_diag([4.0]), distortion)
        closed = max(0.0, 0.5 * math.log(4.0 / distortion))
        print(f"{distortion:6.2f} {rate:12.6f} {closed:12.6f}")
    print()


def reverse_waterfilling_anatomy():
    cov = SpdMatrix.from_diag([1.0, 4.0])
    print("Reverse waterfilling on eigenvalues (1, 4)")
    print(f"{'D':>6} {'level':>10} {'per-mode distortions':>22} {'rate':>10}")
    for distortion in (0.5, 1.0, 2.0, 3.0, 5.0):
        alloc = reverse_waterfill(cov, distortion)
        modes = ", ".join(f"{m:.3f}" for m in sorted(alloc.per_mode))
        print(f"{distortion:6.2f} {alloc.level:10.4f} {modes:>22} {alloc.rate_nats:10.6f}")
    print("Below the smallest eigenvalue both modes share the level; past the")
    print("total variance the source is reproduced for free and the rate is 0.")
    print()


def test_channel_realization():
    cov = SpdMatrix.from_diag([1.0, 4.0])
    distortion = 2.0
    channel = rdf_realization(cov, distortion)
    print(f"Forward test channel achieving R(D={distortion}) for eigenvalues (1, 4)")
    print("gain A =")
    print(np.array_str(channel.gain, precision=4, suppress_small=True))
    print("noise covariance =")
    print(np.array_str(channel.noise_cov.entries, precision=4, suppress_small=True))
    gap = channel.gain - np.eye(2)
    achieved = float(np.trace(gap @ cov.entries @ gap.T) + channel.noise_cov.trace)
    mi = gaussian_mi(channel.gain, cov, channel.noise_cov)
    print(f"achieved distortion = {achieved:.9f} (budget {distortion})")
    print(f"mutual information  = {mi:.9f} vs rate {gaussian_rdf(cov, distortion):.9f}")
    print()


def mimo_waterfilling():
    noise = SpdMatrix.from_diag([1.0, 1.0])
    h = np.diag([2.0, 0.5])
    print("MIMO capacity, channel diag(2, 0.5), unit noise")
    print(f"{'B':>6} {'rate (nats)':>12} {'power split':>18}")
    for power in (0.1, 0.5, 1.0, 2.0, 8.0):
        rate, _, alloc = gaussian_capacity(h, noise, power)
        split = ", ".join(f"{p:.3f}" for p in sorted(alloc.per_mode, reverse=True))
        print(f"{power:6.2f} {rate:12.6f} {split:>18}")
    print("Low budgets go entirely to the strong eigenmode; the weak one joins")
    print("once the water level clears its inverse gain.")


def main():
    scalar_rate_distortion()
    reverse_waterfilling_anatomy()
    test_channel_realization()
    mimo_waterfilling()


if __name__ == "__main__":
    main()
