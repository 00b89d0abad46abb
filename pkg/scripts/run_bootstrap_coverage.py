"""Coverage of DS bootstrap intervals from few samples against a many-sample estimate."""

import argparse

import numpy as np

from mdlmotif.experiments import bootstrap_coverage


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--nodes", type=int, default=20)
    p.add_argument("--p", type=float, default=0.3)
    p.add_argument("--gold", type=int, default=100_000)
    p.add_argument("--trials", type=int, default=300)
    p.add_argument("--samples", type=int, nargs="+", default=[5, 10, 40, 160])
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    for ns in a.samples:
        r = bootstrap_coverage(a.nodes, a.p, a.gold, a.trials, ns, seed=a.seed)
        print(f"samples={ns:4d}  gold {r.gold_bits:.3f} bits  coverage {r.coverage:.3f}  "
              f"median width {np.median(r.widths):.3f}")


if __name__ == "__main__":
    main()
