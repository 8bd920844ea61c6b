"""Text formats: edge lists, adjacency matrices, rosters and result documents.

All CSV here is plain comma-separated with no quoting. Labels are restricted
to ``[A-Za-z0-9_-]`` so files are bit-exact and diffable. Lines starting with
``#`` are comments.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import (
    AsymmetricUndirected,
    FixedChoiceViolation,
    GraphError,
    MalformedRow,
    NegativeEntry,
    NegativeRating,
    NonfiniteScore,
    NonSquare,
    NonzeroDiagonal,
    UnknownAlterColumn,
)
from .graph import Graph, adjacency_matrix, binarize

LABEL_RE = re.compile(r"^[A-Za-z0-9_-]+$")


def format_number(x: float) -> str:
    """Shortest text that parses back to exactly ``x``; integers lose the ``.0``."""
    x = float(x)
    if not math.isfinite(x):
        raise NonfiniteScore(f"non-finite value {x}")
    if x.is_integer() and abs(x) < 2**53:
        return str(int(x))
    return repr(x)


def _rows(text: str):
    """Yield (line number, fields) for non-blank, non-comment lines."""
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, [f.strip() for f in line.split(",")]


def _label(s: str, lineno: int) -> str:
    if not LABEL_RE.match(s):
        raise MalformedRow(f"bad node label {s!r}", lineno)
    return s


def _number(s: str, lineno: int) -> float:
    try:
        x = float(s)
    except ValueError:
        raise MalformedRow(f"not a number: {s!r}", lineno) from None
    if not math.isfinite(x):
        raise MalformedRow(f"non-finite number {s!r}", lineno)
    return x


def _reraise(exc: GraphError, lineno: int):
    # graph construction errors keep their class but gain a line number
    exc.args = (f"line {lineno}: {exc}",)
    exc.line = lineno
    return exc


# --- edge lists ---------------------------------------------------------------


def parse_edge_list(text: str, directed: bool = False,
                    max_out_degree: Optional[int] = None) -> Graph:
    """Parse ``source,target[,weight]`` rows.

    Nodes are registered in order of first appearance. ``max_out_degree``
    validates fixed-choice name-generator data, where each respondent (the
    source) may name at most that many alters.
    """
    rows = _rows(text)
    try:
        lineno, header = next(rows)
    except StopIteration:
        raise MalformedRow("missing header line") from None
    if header == ["source", "target"]:
        has_weight = False
    elif header == ["source", "target", "weight"]:
        has_weight = True
    else:
        raise MalformedRow(f"unexpected header {','.join(header)!r}", lineno)
    g = Graph(directed)
    ncols = 3 if has_weight else 2
    for lineno, fields in rows:
        if len(fields) != ncols:
            raise MalformedRow(f"expected {ncols} fields, got {len(fields)}", lineno)
        u = g.node(_label(fields[0], lineno))
        v = g.node(_label(fields[1], lineno))
        w = _number(fields[2], lineno) if has_weight else None
        try:
            g.add_edge(u, v, w)
        except GraphError as exc:
            raise _reraise(exc, lineno)
        if max_out_degree is not None and len(g.successors(u)) > max_out_degree and directed:
            raise FixedChoiceViolation(
                f"{fields[0]} names more than {max_out_degree} alters", lineno)
    return g


def _row_order(graph: Graph) -> list:
    """Edges ordered so that nodes first appear in id order where possible.

    Node k is introduced by a tie to an already-seen node when it has one,
    otherwise by its tie to the lowest new node; every remaining tie between
    seen nodes is flushed right after. Parsing the result back therefore
    reproduces the ids of any graph that was itself read from an edge list.
    """
    incident: list[list] = [[] for _ in range(graph.n)]
    for e in graph.edges():
        incident[e.source].append(e)
        incident[e.target].append(e)
    seen: set[int] = set()
    done: set = set()
    out = []

    def other(e, k):
        return e.target if e.source == k else e.source

    def admit(x):
        seen.add(x)
        ready = [e for e in incident[x] if other(e, x) in seen and e not in done]
        for e in sorted(ready, key=lambda e: (min(e.source, e.target),
                                              max(e.source, e.target), e.source)):
            done.add(e)
            out.append(e)

    for k in range(graph.n):
        if k in seen or not incident[k]:
            continue
        first = min(incident[k], key=lambda e: (other(e, k) not in seen, e.source != k,
                                                 other(e, k), e.source))
        done.add(first)
        out.append(first)
        admit(k)
        if other(first, k) not in seen:
            admit(other(first, k))
    return out


def write_edge_list(graph: Graph, header_lines: tuple = ()) -> str:
    labels = graph.labels
    for lab in labels:
        if not LABEL_RE.match(lab):
            raise ValueError(f"label {lab!r} cannot be written to CSV")
    lines = [f"# {h}" for h in header_lines]
    edges = _row_order(graph)
    if graph.weighted:
        lines.append("source,target,weight")
        lines += [f"{labels[e.source]},{labels[e.target]},{format_number(e.value)}"
                  for e in edges]
    else:
        lines.append("source,target")
        lines += [f"{labels[e.source]},{labels[e.target]}" for e in edges]
    return "\n".join(lines) + "\n"


# --- adjacency matrices ----------------------------------------------------------


def parse_adjacency(text: str, directed: bool = False) -> Graph:
    """Square matrix with a header row and a leading label column.

    The top-left header cell is ignored. Positive entries become edges;
    if every entry is 0 or 1 the graph is unweighted.
    """
    rows = list(_rows(text))
    if not rows:
        raise MalformedRow("empty adjacency file")
    hline, header = rows[0]
    labels = [_label(s, hline) for s in header[1:]]
    n = len(labels)
    body = rows[1:]
    if len(body) != n:
        raise NonSquare(f"{len(body)} rows for {n} columns")
    a = np.zeros((n, n))
    for i, (lineno, fields) in enumerate(body):
        if len(fields) != n + 1:
            raise NonSquare(f"expected {n + 1} fields, got {len(fields)}", lineno)
        if fields[0] != labels[i]:
            raise MalformedRow(f"row label {fields[0]!r} does not match column {labels[i]!r}",
                               lineno)
        for j, s in enumerate(fields[1:]):
            x = _number(s, lineno)
            if x < 0:
                raise NegativeEntry(f"negative entry {s}", lineno)
            if i == j and x != 0:
                raise NonzeroDiagonal(f"nonzero diagonal for {labels[i]}", lineno)
            a[i, j] = x
    if not directed and not np.array_equal(a, a.T):
        i, j = np.argwhere(a != a.T)[0]
        raise AsymmetricUndirected(
            f"A[{labels[i]},{labels[j]}] != A[{labels[j]},{labels[i]}] in undirected matrix")
    binary = bool(np.all((a == 0) | (a == 1)))
    g = Graph(directed)
    for lab in labels:
        try:
            g.add_node(lab)
        except GraphError as exc:
            raise _reraise(exc, hline)
    for i in range(n):
        for j in range(n) if directed else range(i + 1, n):
            if a[i, j] > 0:
                g.add_edge(i, j, None if binary else a[i, j])
    return g


def write_adjacency(graph: Graph) -> str:
    a = adjacency_matrix(graph)
    labels = graph.labels
    lines = ["node," + ",".join(labels)]
    for i, lab in enumerate(labels):
        lines.append(lab + "," + ",".join(format_number(x) for x in a[i]))
    return "\n".join(lines) + "\n"


# --- rosters --------------------------------------------------------------------


@dataclass
class RosterTable:
    """Roster survey: each respondent rates (some of) the listed alters.

    ``cells[(respondent, alter)]`` holds a rating; missing keys mean the cell
    was left blank, which is different from a rating of 0.
    """

    respondents: list[str]
    alters: list[str]
    cells: dict[tuple[str, str], float] = field(default_factory=dict)


def parse_roster_csv(text: str) -> RosterTable:
    """``respondent,<alter>,<alter>,...`` header then one row per respondent."""
    rows = list(_rows(text))
    if not rows:
        raise MalformedRow("empty roster file")
    hline, header = rows[0]
    alters = [_label(s, hline) for s in header[1:]]
    table = RosterTable([], alters)
    for lineno, fields in rows[1:]:
        if len(fields) != len(alters) + 1:
            raise MalformedRow(f"expected {len(alters) + 1} fields, got {len(fields)}", lineno)
        who = _label(fields[0], lineno)
        table.respondents.append(who)
        for alter, s in zip(alters, fields[1:]):
            if s == "":
                continue
            table.cells[(who, alter)] = _number(s, lineno)
    return table


def parse_roster(table: RosterTable, threshold: Optional[float] = None) -> Graph:
    """Directed graph with respondent -> alter ties for every positive rating.

    Self-ratings are ignored. With ``threshold`` the ratings are binarized.
    """
    alters = set(table.alters)
    for (who, alter), x in table.cells.items():
        if alter not in alters:
            raise UnknownAlterColumn(f"rating for unlisted alter {alter!r}")
        if x < 0:
            raise NegativeRating(f"{who} rates {alter} negatively ({x})")
    g = Graph(directed=True)
    for lab in list(table.respondents) + list(table.alters):
        g.node(lab)
    ratings = []
    for (who, alter), x in sorted(table.cells.items(), key=lambda kv: (g.id(kv[0][0]), g.id(kv[0][1]))):
        if who == alter or x == 0:
            continue
        ratings.append((g.id(who), g.id(alter), x))
    binary = all(x == 1 for _, _, x in ratings)
    for u, v, x in ratings:
        g.add_edge(u, v, None if binary else x)
    if threshold is not None:
        g = binarize(g, threshold)
    return g


# --- results ----------------------------------------------------------------------


@dataclass
class ResultDocument:
    """Per-node scores for one measure, with the parameters that produced them."""

    measure: str
    params: dict
    records: list[tuple[str, float]]
    graph: dict = field(default_factory=dict)  # n, m, directed, weighted

    def sorted_records(self):
        return sorted(self.records, key=lambda r: r[0])

    def __eq__(self, other):
        if not isinstance(other, ResultDocument):
            return NotImplemented
        return (self.measure == other.measure and self.params == other.params
                and self.sorted_records() == other.sorted_records()
                and self.graph == other.graph)


def fingerprint(graph: Graph) -> dict:
    return {"n": graph.n, "m": graph.m, "directed": graph.directed,
            "weighted": graph.weighted}


def write_results(doc: ResultDocument, format: str = "csv", header: bool = True) -> str:
    records = doc.sorted_records()
    for label, score in records:
        if not math.isfinite(score):
            raise NonfiniteScore(f"score for {label} is {score}")
    if format == "json":
        body = {
            "meta": {"measure": doc.measure, "graph": doc.graph},
            "params": doc.params,
            "results": [{"node": lab, "score": float(s)} for lab, s in records],
        }
        return json.dumps(body, sort_keys=True, indent=2) + "\n"
    if format != "csv":
        raise ValueError(f"unknown format {format!r}")
    lines = []
    if header:
        lines.append(f"# measure={doc.measure}")
        lines.append("# params=" + json.dumps(doc.params, sort_keys=True, separators=(",", ":")))
        lines.append("# graph=" + json.dumps(doc.graph, sort_keys=True, separators=(",", ":")))
    lines.append("node,score")
    lines += [f"{lab},{format_number(s)}" for lab, s in records]
    return "\n".join(lines) + "\n"


def read_results(text: str, format: str = "csv") -> ResultDocument:
    if format == "json":
        body = json.loads(text)
        return ResultDocument(body["meta"]["measure"], body["params"],
                              [(r["node"], float(r["score"])) for r in body["results"]],
                              body["meta"]["graph"])
    meta = {"measure": "", "params": {}, "graph": {}}
    records = []
    seen_header = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if raw.startswith("# "):
            key, _, value = raw[2:].partition("=")
            meta[key] = value if key == "measure" else json.loads(value)
            continue
        if not raw.strip():
            continue
        if not seen_header:
            if raw != "node,score":
                raise MalformedRow(f"unexpected header {raw!r}", lineno)
            seen_header = True
            continue
        fields = raw.split(",")
        if len(fields) != 2:
            raise MalformedRow("expected node,score", lineno)
        records.append((fields[0], _number(fields[1], lineno)))
    return ResultDocument(meta["measure"], meta["params"], records, meta["graph"])
