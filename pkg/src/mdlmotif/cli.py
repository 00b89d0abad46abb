"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 input/output error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from .canon import from_text
from .census import exact_census
from .config import AnalyzeConfig, SamplingConfig, ScoreConfig, SynthConfig
from .graph import EdgeListError, Graph, read_edgelist
from .nullmodels import NullModelKind, null_bound, null_complete
from .pipeline import analyze, report_csv, report_json
from .store import MAGIC, StoreError, bulk_convert, open_binary_store
from .synth import generate_injected

log = logging.getLogger("mdlmotif")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _is_store(path: Path) -> bool:
    with open(path, "rb") as fh:
        return fh.read(len(MAGIC)) == MAGIC


def _in_memory(g: Graph) -> Graph:
    arrs = [None if a is None else np.array(a, dtype=np.int64) for a in
            (g.fwd_offsets, g.fwd_targets, g.bwd_offsets, g.bwd_targets)]
    return Graph(g.directed, g.n, g.m, *arrs)


def load_graph(path: str, directed: bool, store: str, tmpdir: str | None = None) -> Graph:
    p = Path(path)
    if _is_store(p):
        g = open_binary_store(p)
        if g.directed != directed:
            log.warning("store directedness (%s) overrides --directed", g.directed)
        return g if store == "disk" else _in_memory(g)
    if store == "disk":
        out = Path(tmpdir) / "graph.store"
        bulk_convert(p, out, directed)
        return open_binary_store(out)
    with open(p) as fh:
        return read_edgelist(fh, directed)[0]


def _write(text: str, output: str | None) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def cmd_analyze(a) -> int:
    if not 3 <= a.min_size <= a.max_size <= 12:
        raise UsageError("need 3 <= --min-size <= --max-size <= 12")
    if a.threads < 1 or a.samples < 0:
        raise UsageError("--threads must be >= 1 and --samples >= 0")
    if not 0 < a.alpha < 1:
        raise UsageError("--alpha must lie in (0, 1)")
    nulls = tuple(NullModelKind) if a.null == "all" else (NullModelKind(a.null),)
    cfg = AnalyzeConfig(
        sampling=SamplingConfig(a.samples, a.min_size, a.max_size),
        score=ScoreConfig(alpha=a.alpha, min_gain=a.min_gain, search_depth=a.search_depth,
                          max_rewired=a.max_rewired, ds_samples=a.ds_samples, ds_confidence=a.ds_confidence),
        nulls=nulls, top=a.top, seed=a.seed, threads=a.threads)
    with tempfile.TemporaryDirectory() as tmp:
        t0 = time.perf_counter()
        g = load_graph(a.input, a.directed, a.store, tmp)
        load_time = time.perf_counter() - t0
        report = analyze(g, cfg, timings=not a.no_timings, extra_timings={"load": load_time})
    report["config"]["store"] = a.store
    _write(report_json(report) if a.format == "json" else report_csv(report), a.output)
    return 0


def cmd_synth(a) -> int:
    try:
        motif = from_text(a.motif)
    except (IndexError, ValueError):
        raise UsageError(f"cannot parse motif {a.motif!r}") from None
    cfg = SynthConfig(a.nodes, a.links, a.instances, a.degree_cap, a.labels)
    res = generate_injected(motif.to_graph(), a.instances, np.random.default_rng(a.seed), cfg)
    truth = a.truth or str(Path(a.output).with_suffix(".truth.json"))
    res.write(a.output, truth)
    return 0


def cmd_convert(a) -> int:
    stats = bulk_convert(a.input, a.output, a.directed)
    print(json.dumps({"n": stats.n, "m": stats.m, "lines": stats.lines, "self_loops": stats.self_loops,
                      "duplicates": stats.duplicates, "seconds": round(stats.seconds, 4)}))
    return 0


def cmd_census(a) -> int:
    with tempfile.TemporaryDirectory() as tmp:
        g = load_graph(a.input, a.directed, "memory", tmp)
    cen = exact_census(g, a.size)
    rows = sorted(((k.text(), len(v)) for k, v in cen.items()), key=lambda r: (-r[1], r[0]))
    _write(json.dumps({"size": a.size, "classes": [{"motif": t, "count": c} for t, c in rows]}, indent=1) + "\n",
           a.output)
    return 0


def cmd_nullbits(a) -> int:
    with tempfile.TemporaryDirectory() as tmp:
        g = load_graph(a.input, a.directed, "memory", tmp)
    out = {"graph": {"n": g.n, "m": g.m, "directed": g.directed}}
    for kind in NullModelKind:
        rng = np.random.default_rng(a.seed)
        b = null_bound(g, kind, rng, a.ds_samples)
        c = null_complete(g, kind, rng, a.ds_samples)
        out[kind.value] = {
            "bound": {"point": round(b.point, 4), "lower": round(b.lower, 4), "upper": round(b.upper, 4),
                      "exact": b.exact},
            "complete": {"point": round(c.point, 4), "lower": round(c.lower, 4), "upper": round(c.upper, 4),
                         "exact": c.exact},
        }
    _write(json.dumps(out, indent=1) + "\n", a.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mdlmotif", description="Motif detection by compression.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    an = sub.add_parser("analyze", help="sample subgraphs and score candidate motifs")
    an.add_argument("--input", required=True)
    an.add_argument("--directed", action="store_true")
    an.add_argument("--null", choices=["er", "el", "ds", "all"], default="all")
    an.add_argument("--samples", type=int, default=1_000_000)
    an.add_argument("--min-size", type=int, default=3)
    an.add_argument("--max-size", type=int, default=6)
    an.add_argument("--top", type=int, default=100)
    an.add_argument("--alpha", type=float, default=0.001)
    an.add_argument("--min-gain", type=float, default=None, help="threshold in bits; overrides --alpha")
    an.add_argument("--ds-samples", type=int, default=40)
    an.add_argument("--ds-confidence", type=float, default=0.95)
    an.add_argument("--search-depth", type=int, default=0, help="0 = full search")
    an.add_argument("--max-rewired", type=int, default=500_000)
    an.add_argument("--seed", type=int, default=0)
    an.add_argument("--threads", type=int, default=1)
    an.add_argument("--format", choices=["json", "csv"], default="json")
    an.add_argument("--store", choices=["memory", "disk"], default="memory")
    an.add_argument("--output", default=None)
    an.add_argument("--no-timings", action="store_true", help="omit wall times (for reproducible output)")
    an.set_defaults(func=cmd_analyze)

    sy = sub.add_parser("synth", help="generate a graph with injected motif instances")
    sy.add_argument("--motif", required=True, help="graph6 text of a connected undirected motif")
    sy.add_argument("--instances", type=int, default=0)
    sy.add_argument("--nodes", type=int, default=5000)
    sy.add_argument("--links", type=int, default=10000)
    sy.add_argument("--degree-cap", type=int, default=5)
    sy.add_argument("--labels", type=int, default=None)
    sy.add_argument("--seed", type=int, default=0)
    sy.add_argument("--output", required=True)
    sy.add_argument("--truth", default=None)
    sy.set_defaults(func=cmd_synth)

    cv = sub.add_parser("convert", help="edge list to binary adjacency store")
    cv.add_argument("--input", required=True)
    cv.add_argument("--output", required=True)
    cv.add_argument("--directed", action="store_true")
    cv.set_defaults(func=cmd_convert)

    ce = sub.add_parser("census", help="exact census of connected induced subgraphs (small graphs)")
    ce.add_argument("--input", required=True)
    ce.add_argument("--size", type=int, default=3)
    ce.add_argument("--directed", action="store_true")
    ce.add_argument("--output", default=None)
    ce.set_defaults(func=cmd_census)

    nb = sub.add_parser("nullbits", help="bound and complete codelengths of each null model")
    nb.add_argument("--input", required=True)
    nb.add_argument("--directed", action="store_true")
    nb.add_argument("--ds-samples", type=int, default=40)
    nb.add_argument("--seed", type=int, default=0)
    nb.add_argument("--output", default=None)
    nb.set_defaults(func=cmd_nullbits)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:  # usage errors and --help
        return int(e.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as e:
        print(f"mdlmotif: error: {e}", file=sys.stderr)
        return 1
    except (OSError, EdgeListError, StoreError) as e:
        print(f"mdlmotif: I/O error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # noqa: BLE001
        log.exception("internal error")
        print(f"mdlmotif: internal error: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
