#!/usr/bin/env python3
"""Probe the stability of Heaviside comparisons under small perturbations.

On data whose pairwise squared-distance differences all exceed theta, every
distance comparison is provably frozen when each prototype moves by less
than nu.  The probe perturbs all prototypes by random vectors of norm below
nu and counts flipped comparison matrices (expected: zero), then runs one
adversarial trial far beyond nu that is built to flip a comparison.
"""

import argparse
import math

import numpy as np

import vqlab as vq


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eta", type=float, default=0.2)
    ap.add_argument("--trials", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    cases = [
        ("two prototypes on [0, 1]",
         vq.UniformInterval(0, 1), [[0.3], [0.8]], 1.0),
        ("four prototypes on the unit square",
         vq.UniformBox([0, 0], [1, 1]),
         [[0.2, 0.2], [0.8, 0.2], [0.2, 0.8], [0.8, 0.8]], math.sqrt(2)),
        ("ten random prototypes on the unit square",
         vq.UniformBox([0, 0], [1, 1]),
         np.random.default_rng(3).random((10, 2)), math.sqrt(2)),
    ]
    for i, (label, density, w, delta) in enumerate(cases):
        cp = vq.perturbation_bound(args.eta, delta)
        flips = vq.invariance_probe(density, w, cp, args.trials,
                                    vq.SeededStream(args.seed + i))
        adv = vq.adversarial_probe(density, w, cp, vq.SeededStream(args.seed + i, 4))
        print(f"{label}: nu = {cp.nu:.3e}, "
              f"{flips}/{args.trials} flips below nu, adversarial flip = {adv}")


if __name__ == "__main__":
    main()
