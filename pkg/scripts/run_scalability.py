"""Full analysis of a large ER graph, in memory and from the disk store."""

import argparse
import tempfile
import time
from pathlib import Path

import numpy as np

from mdlmotif.experiments import er_links, scalability_config, timed_analyze
from mdlmotif.graph import load_edgelist
from mdlmotif.store import bulk_convert, open_binary_store


def main() -> None:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--nodes", type=int, default=200_000)
    p.add_argument("--links", type=int, default=1_000_000)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--threads", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    a = p.parse_args()
    with tempfile.TemporaryDirectory() as tmp:
        path = Path(tmp) / "er.txt"
        np.savetxt(path, er_links(a.nodes, a.links, a.seed), fmt="%d")
        t0 = time.perf_counter()
        with open(path) as fh:
            g = load_edgelist(fh)
        print(f"load {time.perf_counter() - t0:.1f}s  n={g.n} m={g.m}")
        rep1, t1 = timed_analyze(g, scalability_config(a.samples, 1, a.seed))
        print(f"memory, 1 thread: {t1:.1f}s")
        t0 = time.perf_counter()
        bulk_convert(path, Path(tmp) / "er.store")
        disk = open_binary_store(Path(tmp) / "er.store")
        print(f"convert {time.perf_counter() - t0:.1f}s")
        rep2, t2 = timed_analyze(disk, scalability_config(a.samples, a.threads, a.seed))
        print(f"disk, {a.threads} threads: {t2:.1f}s  reports identical: {rep1 == rep2}")
        print(f"significant: {rep1['summary']['significant']}")


if __name__ == "__main__":
    main()
