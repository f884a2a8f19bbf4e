#!/usr/bin/env python3
"""Train prototypes online and watch the energy descend.

Runs hard competitive learning (or a soft family via --family) on the unit
interval and prints energy snapshots along the trajectory.  With two
prototypes and a decaying step size the run settles near the optimal
quantizer (1/4, 3/4) with energy 1/96.
"""

import argparse

import vqlab as vq


FAMILIES = {
    "kmeans": lambda n: vq.KMeansWinner(),
    "neural-gas": lambda n: vq.NeuralGas(0.5),
    "som": lambda n: vq.SOM(vq.NeighborGraph.chain(n), 0.5),
}


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--family", choices=sorted(FAMILIES), default="kmeans")
    ap.add_argument("--prototypes", type=int, default=2)
    ap.add_argument("--iterations", type=int, default=200_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    d = vq.UniformInterval(0, 1)
    spec = FAMILIES[args.family](args.prototypes)
    w0 = d.sample(vq.SeededStream(args.seed, stream_id=2).fresh(), size=args.prototypes)
    records = vq.run(d, w0, spec, vq.InverseTime(0.5, 1000.0), args.iterations,
                     vq.SeededStream(args.seed), snapshot_every=args.iterations // 10)

    integ = vq.Quadrature1D(50_000)
    print(f"{'iteration':>10} {'energy':>14}  prototypes")
    for r in records:
        e = vq.estimate_energy(d, r.prototypes, spec, integ)
        pts = " ".join(f"{x:.4f}" for x in sorted(r.prototypes.ravel()))
        print(f"{r.iteration:10d} {e:14.8f}  [{pts}]")


if __name__ == "__main__":
    main()
