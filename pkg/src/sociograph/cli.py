"""Batch command-line front end.

Every output starts with the full parameter set and a hash of the input, and
contains nothing run-dependent (no timestamps), so identical invocations
produce byte-identical output. Exit status: 0 success, 1 data error, 2 usage
error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import centrality as cent
from . import community, ego, generators, io, multilayer, paths, routing
from .errors import SociographError
from .graph import Graph, adjacency_matrix, binarize, connected_components, density, drop_weights, symmetrize

SEED_ENV = "SOCIOGRAPH_SEED"
MEASURE_CHOICES = ["degree", "in", "out", "strength", "eigenvector", "katz", "diffusion",
                   "betweenness", "pagerank"]


@dataclass
class RunConfig:
    subcommand: str
    inputs: dict
    params: dict
    format: str = "csv"
    seed: Optional[int] = None
    out: Optional[str] = None
    input_hash: str = ""

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        skip = {"func", "out", "format", "command"}
        inputs = {k: v for k, v in vars(args).items()
                  if k in ("input", "compare", "geometry") and v is not None}
        params = {k: v for k, v in sorted(vars(args).items()) if k not in skip and k not in inputs}
        digest = hashlib.sha256()
        for key in sorted(inputs):
            digest.update(key.encode() + b"\0" + Path(inputs[key]).read_bytes() + b"\0")
        return cls(args.command, inputs, params, args.format, params.get("seed"), args.out,
                   digest.hexdigest() if inputs else "")


@dataclass
class Output:
    """Result of a subcommand: tabular rows, plus optional exact CSV text."""

    columns: list[str]
    rows: list[list]
    meta: dict = field(default_factory=dict)
    csv_body: Optional[str] = None
    csv_skip: tuple = ()  # meta keys the CSV body already states


# --- helpers ----------------------------------------------------------------------


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def load_graph(args) -> Graph:
    text = _read(args.input)
    fmt = args.input_format
    if fmt == "edgelist":
        g = io.parse_edge_list(text, directed=args.directed, max_out_degree=args.max_choices)
    elif fmt == "adjacency":
        g = io.parse_adjacency(text, directed=args.directed)
    else:
        g = io.parse_roster(io.parse_roster_csv(text), threshold=args.threshold)
    return g


def _cell(x) -> str:
    if x is paths.UNREACHABLE:
        return "unreachable"
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return "inf" if math.isinf(x) else io.format_number(x)
    return str(x)


def _jsonable(x):
    if x is paths.UNREACHABLE:
        return None
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (float, np.floating)):
        return None if not math.isfinite(x) else float(x)
    return x


def render(config: RunConfig, out: Output) -> str:
    if config.format == "json":
        body = {
            "meta": {"command": config.subcommand, "input_sha256": config.input_hash,
                     **{k: _jsonable(v) for k, v in out.meta.items()}},
            "params": config.params,
            "results": [{c: _jsonable(v) for c, v in zip(out.columns, row)} for row in out.rows],
        }
        return json.dumps(body, sort_keys=True, indent=2) + "\n"
    head = [f"# sociograph {config.subcommand}",
            "# params=" + json.dumps(config.params, sort_keys=True, separators=(",", ":"))]
    if config.input_hash:
        head.append(f"# input_sha256={config.input_hash}")
    head += [f"# {k}={_cell(v)}" for k, v in out.meta.items() if k not in out.csv_skip]
    if out.csv_body is not None:
        body = out.csv_body
    else:
        lines = [",".join(out.columns)] + [",".join(_cell(v) for v in row) for row in out.rows]
        body = "\n".join(lines) + "\n"
    return "\n".join(head) + "\n" + body


def _edge_output(g: Graph, meta: Optional[dict] = None) -> Output:
    labels = g.labels
    if g.weighted:
        cols = ["source", "target", "weight"]
        rows = [[labels[e.source], labels[e.target], e.value] for e in g.edges()]
    else:
        cols = ["source", "target"]
        rows = [[labels[e.source], labels[e.target]] for e in g.edges()]
    meta = dict(meta or {})
    meta.update(directed=g.directed)
    return Output(cols, rows, meta, io.write_edge_list(g))


def _scores_output(scores: cent.CentralityScores) -> Output:
    rows = sorted(([lab, float(s)] for lab, s in zip(scores.labels, scores.scores)),
                  key=lambda r: r[0])
    meta = {"measure": scores.measure, **{f"measure_{k}": v for k, v in scores.params.items()}}
    return Output(["node", "score"], rows, meta)


def _analysis_graph(g: Graph, weighted: bool) -> Graph:
    # weights in the file are used only when --weighted is given
    return g if weighted else (drop_weights(g) if g.weighted else g)


# --- subcommands -------------------------------------------------------------------


def cmd_stats(args) -> Output:
    g = load_graph(args)
    deg = cent.degree(g).scores.astype(int)
    if args.distribution:
        values, counts = np.unique(deg, return_counts=True) if g.n else ([], [])
        return Output(["degree", "count"], [[int(v), int(c)] for v, c in zip(values, counts)])
    rows = [["n", g.n], ["edges", g.m], ["density", density(g)],
            ["components", connected_components(g).count if g.n else 0],
            ["directed", g.directed], ["weighted", g.weighted]]
    if g.directed:
        rows.append(["strong_components", connected_components(g, "strong").count if g.n else 0])
    return Output(["metric", "value"], rows)


def cmd_centrality(args) -> Output:
    g = _analysis_graph(load_graph(args), args.weighted)
    m = args.measure
    if m in ("degree", "in", "out"):
        scores = cent.degree(g, "total" if m == "degree" else m, weighted=args.weighted)
    elif m == "strength":
        scores = cent.degree(g, "total", weighted=True)
    elif m == "eigenvector":
        scores = cent.eigenvector_centrality(g, per_component=args.per_component)
    elif m == "katz":
        scores = cent.katz_centrality(g, alpha=args.alpha, beta=args.beta)
    elif m == "diffusion":
        scores = cent.diffusion_centrality(g, q=args.q, T=args.T)
    elif m == "betweenness":
        if args.weighted:
            scores = cent.weighted_betweenness(g, args.cost, normalized=args.normalized)
        else:
            scores = cent.betweenness(g, normalized=args.normalized)
    else:
        scores = cent.pagerank(g, damping=args.damping)
    return _scores_output(scores)


def cmd_distance(args, parser) -> Output:
    g = _analysis_graph(load_graph(args), args.weighted)
    metric = "cost" if args.weighted else "hops"
    if (args.source is None) != (args.target is None):
        parser.error("--from and --to must be given together")
    if args.source is not None:
        s, t = g.id(args.source), g.id(args.target)
        if args.weighted:
            d = paths.weighted_distance(g, s, t, args.cost)
        else:
            d = paths.geodesic_distance(g, s, t)
        route = paths.shortest_path(g, s, t, metric, args.cost)
        shown = ">".join(g.label(u) for u in route) if route else ""
        return Output(["source", "target", "distance", "path"],
                      [[args.source, args.target, d, shown]], {"metric": metric})
    mat = paths.distance_matrix(g, metric, args.cost)
    labels = g.labels
    rows = [[labels[i]] + [float(x) if metric == "cost" else (int(x) if np.isfinite(x) else x)
                           for x in mat[i]] for i in range(g.n)]
    return Output(["node"] + labels, rows, {"metric": metric})


def cmd_ego(args) -> Output:
    g = load_graph(args)
    e = g.id(args.ego)
    net = ego.extract_ego(g, e, args.k, include_ego=args.include_ego)
    if args.compare:
        reported = ego.parse_ego(_read(args.compare), directed=g.directed)
        cmp = ego.compare_ego(reported, net)
        rows = [[k, getattr(cmp, k)] for k in ("edge_precision", "edge_recall", "jaccard",
                                             "unmatched_reported", "unmatched_extracted")]
        return Output(["metric", "value"], rows, {"ego": args.ego})
    if args.local:
        rows = [["alters", len(net.alters)], ["alter_edges", len(net.alter_edges)],
                ["egocentric_betweenness", ego.egocentric_betweenness(g, e)]]
        if not g.directed:
            rows.append(["local_clustering", ego.local_clustering(g, e)])
        if g.neighbors_undirected(e):
            rows.append(["constraint", ego.constraint(g, e)])
        return Output(["metric", "value"], rows, {"ego": args.ego})
    out = _edge_output(net.to_graph(), {"ego": args.ego, "k": args.k})
    out.csv_body = ego.write_ego(net)
    out.csv_skip = ("ego", "k")
    return out


def cmd_community(args) -> Output:
    g = load_graph(args)
    part = community.detect_communities(g, resolution=args.resolution, seed=args.seed)
    labels = g.labels
    rows = sorted(([labels[u], c] for u, c in enumerate(part.assignment)), key=lambda r: r[0])
    return Output(["node", "community"], rows, {"Q": part.modularity, "communities": part.count},
                  community.write_partition(g, part), csv_skip=("Q",))


def cmd_multilayer(args, parser) -> Output:
    chosen = [x for x in (args.per_layer, args.aggregate, args.supra or None) if x]
    if len(chosen) != 1:
        parser.error("choose exactly one of --per-layer, --aggregate, --supra")
    mln = multilayer.parse_multilayer(_read(args.input), directed=args.directed,
                                      multiplex=args.multiplex)
    if args.per_layer:
        params = {}
        if args.per_layer in ("degree", "in", "out") and args.weighted:
            params["weighted"] = True
        results = multilayer.per_layer_measure(mln, args.per_layer, **params)
        rows = []
        for layer, scores in results.items():
            rows += sorted(([layer, lab, float(s)] for lab, s in zip(scores.labels, scores.scores)),
                           key=lambda r: r[1])
        return Output(["layer", "node", "score"], rows, {"measure": args.per_layer})
    if args.aggregate:
        return _edge_output(multilayer.aggregate(mln, args.aggregate), {"rule": args.aggregate})
    s = multilayer.supra_adjacency(mln, omega=args.omega, coupling=args.coupling)
    names = [f"{mln.node_labels[nl.node]}@{mln.layer_labels[nl.layer]}"
             for nl in mln.node_layers()]
    rows = [[names[i]] + [float(x) for x in s[i]] for i in range(len(names))]
    return Output(["node_layer"] + names, rows)


def cmd_generate(args, parser) -> Output:
    model = args.model
    geometry = None
    if model in ("star", "complete", "path", "cycle"):
        g = generators.FIXTURES[model](args.n)
    elif model == "two_cliques":
        g = generators.two_cliques(args.k)
    elif model in ("kite10", "sam_star"):
        g = generators.FIXTURES[model]()
    elif model == "ws":
        g = generators.watts_strogatz(args.n, args.k, args.p, seed=args.seed)
    else:
        g, geometry = generators.kleinberg_grid(args.side, args.r, args.q, seed=args.seed,
                                                torus=not args.bounded)
    if geometry is not None and args.geometry_out:
        Path(args.geometry_out).write_text(geometry.to_csv(g.labels), encoding="utf-8")
    meta = {"rng": generators.RNG_ALGORITHM} if model in ("ws", "kleinberg") else {}
    return _edge_output(g, meta)


def cmd_milgram(args, parser) -> Output:
    if args.input:
        if not args.geometry:
            parser.error("--input needs --geometry")
        g = io.parse_edge_list(_read(args.input), directed=args.directed)
        geo = generators.GridGeometry.from_csv(_read(args.geometry), g)
    else:
        g, geo = generators.kleinberg_grid(args.side, args.r, args.q, seed=args.seed,
                                           torus=not args.bounded)
    summary = routing.milgram_experiment(g, geo, args.trials, args.max_hops, seed=args.seed,
                                         strict=not args.relaxed)
    rows = [[k, getattr(summary, k)] for k in ("trials", "delivered", "completion_rate",
                                               "mean_completed_length",
                                               "median_completed_length")]
    rows = [[k, "none" if v is None else v] for k, v in rows]
    return Output(["metric", "value"], rows, {"rng": generators.RNG_ALGORITHM})


def cmd_convert(args) -> Output:
    g = load_graph(args)
    if args.symmetrize:
        g = symmetrize(g, args.symmetrize)
    if args.binarize is not None:
        g = binarize(g, args.binarize)
    if args.to == "adjacency":
        labels = g.labels
        rows = [[lab] + [float(x) for x in row] for lab, row in zip(labels, adjacency_matrix(g))]
        return Output(["node"] + labels, rows, {"directed": g.directed}, io.write_adjacency(g))
    return _edge_output(g)


# --- parser ---------------------------------------------------------------------------


def _positive(x: str) -> float:
    v = float(x)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def _env_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"sociograph: error: {SEED_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sociograph", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["csv", "json"], default="csv")
    common.add_argument("--out", help="write output here instead of stdout")

    graph_in = argparse.ArgumentParser(add_help=False)
    graph_in.add_argument("--input", required=True)
    graph_in.add_argument("--input-format", choices=["edgelist", "adjacency", "roster"],
                          default="edgelist")
    graph_in.add_argument("--directed", action="store_true")
    graph_in.add_argument("--threshold", type=_positive,
                          help="binarize roster ratings at this value")
    graph_in.add_argument("--max-choices", type=int,
                          help="fixed-choice name generator: cap on alters per respondent")

    weights = argparse.ArgumentParser(add_help=False)
    weights.add_argument("--weighted", action="store_true", help="use edge weights")
    weights.add_argument("--cost", choices=sorted(paths.COST_TRANSFORMS), default="reciprocal")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stats", parents=[common, graph_in], help="size, density, components")
    p.add_argument("--distribution", action="store_true", help="emit degree,count table")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("centrality", parents=[common, graph_in, weights])
    p.add_argument("--measure", choices=MEASURE_CHOICES, required=True)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--q", type=_positive)
    p.add_argument("--T", type=int)
    p.add_argument("--damping", type=float, default=0.85)
    p.add_argument("--normalized", action="store_true")
    p.add_argument("--per-component", action="store_true")
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("distance", parents=[common, graph_in, weights])
    p.add_argument("--from", dest="source")
    p.add_argument("--to", dest="target")
    p.set_defaults(func=cmd_distance, needs_parser=True)

    p = sub.add_parser("ego", parents=[common, graph_in])
    p.add_argument("--ego", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--include-ego", action="store_true")
    p.add_argument("--compare", help="reported ego network to compare against")
    p.add_argument("--local", action="store_true", help="emit local measures for the ego")
    p.set_defaults(func=cmd_ego)

    p = sub.add_parser("community", parents=[common, graph_in])
    p.add_argument("--resolution", type=_positive, default=1.0)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_community)

    p = sub.add_parser("multilayer", parents=[common])
    p.add_argument("--input", required=True)
    p.add_argument("--directed", action="store_true")
    p.add_argument("--multiplex", action="store_true")
    p.add_argument("--weighted", action="store_true")
    p.add_argument("--per-layer", choices=MEASURE_CHOICES)
    p.add_argument("--aggregate", choices=["sum", "union"])
    p.add_argument("--supra", action="store_true")
    p.add_argument("--omega", type=_positive)
    p.add_argument("--coupling", choices=["all_pairs", "chain"], default="all_pairs")
    p.set_defaults(func=cmd_multilayer, needs_parser=True)

    p = sub.add_parser("generate", parents=[common])
    p.add_argument("model", choices=sorted(generators.FIXTURES) + ["ws", "kleinberg"])
    p.add_argument("--n", type=int, default=10)
    p.add_argument("--k", type=int, default=4)
    p.add_argument("--p", type=float, default=0.1)
    p.add_argument("--side", type=int, default=10)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--bounded", action="store_true", help="grid without wraparound")
    p.add_argument("--seed", type=int)
    p.add_argument("--geometry-out", help="write node,row,col CSV for grid models")
    p.set_defaults(func=cmd_generate, needs_parser=True)

    p = sub.add_parser("milgram", parents=[common])
    p.add_argument("--input", help="edge list (directed with --directed)")
    p.add_argument("--geometry", help="node,row,col CSV for --input")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--side", type=int, default=20)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--bounded", action="store_true", help="grid without wraparound")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--max-hops", type=int, default=1000)
    p.add_argument("--relaxed", action="store_true",
                   help="allow forwarding to a contact that is not strictly closer")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_milgram, needs_parser=True)

    p = sub.add_parser("convert", parents=[common, graph_in])
    p.add_argument("--to", choices=["edgelist", "adjacency"], default="edgelist")
    p.add_argument("--symmetrize", choices=["union", "mutual"])
    p.add_argument("--binarize", type=_positive)
    p.set_defaults(func=cmd_convert)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if "seed" in vars(args) and args.seed is None:
        args.seed = _env_seed()
    needs_parser = vars(args).pop("needs_parser", False)
    try:
        config = RunConfig.from_args(args)
        out = args.func(args, parser) if needs_parser else args.func(args)
        text = render(config, out)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (SociographError, OSError) as exc:
        where = getattr(args, "input", None)
        prefix = f"{where}: " if where else ""
        print(f"sociograph: error: {prefix}{exc}", file=sys.stderr)
        return 1
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
