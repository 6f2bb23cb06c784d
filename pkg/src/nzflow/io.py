"""Reading job, graph and flow documents; DOT rendering; matplotlib figures.

A job document names a group and a connection multiset::

    {"group": {"kind": "dihedral", "n": 5},
     "connection": [{"element": "r", "multiplicity": 1}, "r^-1", "r^2", "r^3", "s"]}

Elements are indices or words over the generator names of the family
constructors (``"r^2 s"`` multiplies left to right). Explicit tables accept
indices only. A graph document is ``{vertex_count, edges: [{id, u, v}]}``;
``{"ladder": {"kind": "Circular", "n": 3}}`` stands for a standard ladder.
"""

from __future__ import annotations

import json
import re
import sys
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Mapping

from .cayley import CayleyGraph, ConnectionMultiset, validate_connection
from .errors import FlowError, GroupError, NZFlowError, ParseError
from .flows import FlowAssignment, MultiGraph
from .groups import FiniteGroup, build_group
from .ladders import LadderKind, build_ladder

__all__ = [
    "JobSpec",
    "load_document",
    "parse_job",
    "parse_element",
    "parse_graph",
    "parse_flow",
    "to_dot",
    "render_figure",
]


@dataclass
class JobSpec:
    group: FiniteGroup
    connection: ConnectionMultiset
    source: Any = None


def load_document(path: str | Path) -> Any:
    text = sys.stdin.read() if str(path) == "-" else Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z_0-9']*)(?:\s*\^\s*(-?\d+))?\s*")


def parse_element(G: FiniteGroup, word: Any) -> int:
    """Resolve an element index or a generator word such as ``"r^2 s"``."""
    if isinstance(word, bool):
        raise ParseError(f"element {word!r} is not an index or word")
    if isinstance(word, int):
        if not 0 <= word < G.order:
            raise ParseError(f"element index {word} out of range 0..{G.order - 1}")
        return word
    if not isinstance(word, str):
        raise ParseError(f"element {word!r} is not an index or word")
    w = word.strip()
    if re.fullmatch(r"-?\d+", w):
        return parse_element(G, int(w))
    if w in ("e", "1", ""):
        return G.identity
    if not G.generators:
        raise ParseError(f"group {G.name or '(table)'} has no generator names; use indices")
    g, pos = G.identity, 0
    while pos < len(w):
        m = _TOKEN.match(w, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse element word {word!r} at position {pos}")
        name, exp = m.group(1), int(m.group(2) or 1)
        if name not in G.generators:
            known = ", ".join(sorted(G.generators))
            raise ParseError(f"unknown generator {name!r} at position {m.start(1)} in {word!r} (known: {known})")
        g = G.mul(g, G.power(G.generators[name], exp))
        pos = m.end()
    return g


def parse_job(doc: Any) -> JobSpec:
    if not isinstance(doc, Mapping) or "group" not in doc or "connection" not in doc:
        raise ParseError("job document needs 'group' and 'connection'")
    try:
        G = build_group(doc["group"])
    except GroupError as exc:
        raise ParseError(f"group: {exc}") from None
    raw = doc["connection"]
    if not isinstance(raw, list):
        raise ParseError("'connection' must be a list")
    mult: Counter[int] = Counter()
    for i, item in enumerate(raw):
        if isinstance(item, Mapping):
            if "element" not in item:
                raise ParseError(f"connection entry {i} lacks 'element'")
            m = item.get("multiplicity", 1)
            if not isinstance(m, int) or m <= 0:
                raise ParseError(f"connection entry {i} has invalid multiplicity {m!r}")
            x = item["element"]
        else:
            x, m = item, 1
        try:
            mult[parse_element(G, x)] += m
        except ParseError as exc:
            raise ParseError(f"connection entry {i}: {exc}") from None
    try:
        X = validate_connection(G, mult)
    except GroupError as exc:
        raise ParseError(f"connection: {exc}") from None
    return JobSpec(G, X, doc)


def parse_graph(doc: Any) -> MultiGraph:
    """A graph document, a certificate (its ``graph``) or a ladder descriptor."""
    if isinstance(doc, Mapping) and "ladder" in doc:
        spec = doc["ladder"]
        try:
            kind = LadderKind(spec["kind"], int(spec["n"]), int(spec.get("m", 0)))
        except (KeyError, TypeError, ValueError, NZFlowError) as exc:
            raise ParseError(f"ladder descriptor: {exc}") from None
        return build_ladder(kind)[0]
    if isinstance(doc, Mapping) and "graph" in doc:
        doc = doc["graph"]
    try:
        return MultiGraph.from_json(doc)
    except (FlowError, NZFlowError, TypeError) as exc:
        raise ParseError(f"graph: {exc}") from None


def parse_flow(doc: Any) -> FlowAssignment:
    if isinstance(doc, Mapping) and "flow" in doc:
        doc = doc["flow"]
    if not isinstance(doc, list):
        raise ParseError("flow document must be a list of arcs")
    try:
        return FlowAssignment.from_json(doc)
    except (FlowError, ValueError) as exc:
        raise ParseError(f"flow: {exc}") from None


_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


def to_dot(g: MultiGraph, flow: FlowAssignment | None = None, cay: CayleyGraph | None = None, rungs=()) -> str:
    """DOT text; rung edges are bold red, rails follow the slot palette, arcs carry flow values."""
    rungs = set(rungs)
    lines = ["digraph G {" if flow is not None else "graph G {", "  node [shape=circle, fontsize=10];"]
    arrow = "->" if flow is not None else "--"
    for v in range(g.vertex_count):
        lines.append(f"  {v};")
    for e in sorted(g.edges):
        u, v = g.edges[e]
        attrs = []
        if flow is not None and e in flow:
            t, h, x = flow[e]
            if x < 0:
                t, h, x = h, t, -x
            u, v = t, h
            attrs.append(f'label="{x}"')
        else:
            attrs.append(f'label="e{e}"')
        if e in rungs:
            attrs += ['color="red"', "penwidth=2.5", 'style="bold"']
        elif cay is not None:
            attrs.append(f'color="{_PALETTE[cay.slot_of[e] % len(_PALETTE)]}"')
        lines.append(f"  {u} {arrow} {v} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def rung_edges(cert) -> set[int]:
    """Edges of the rung involution named at the top of a certificate trace, if any."""
    z = cert.trace.data.get("z")
    cay = cert.cayley
    if z is None:
        return set()
    return {e for s in cay.slots_of(z) if cay.slots[s].involution for e in cay.slot_edges[s]}


def render_figure(g: MultiGraph, flow: FlowAssignment | None, path: str | Path, title: str = "", rungs=()) -> None:
    """Circular-layout drawing of ``g`` with flow values, written to ``path``."""
    import math

    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    n = max(g.vertex_count, 1)
    pos = {v: (math.cos(2 * math.pi * v / n), math.sin(2 * math.pi * v / n)) for v in range(g.vertex_count)}
    rungs = set(rungs)
    fig, ax = plt.subplots(figsize=(6, 6))
    seen: Counter[frozenset] = Counter()
    for e in sorted(g.edges):
        u, v = g.edges[e]
        key = frozenset((u, v))
        k = seen[key]
        seen[key] += 1
        (x1, y1), (x2, y2) = pos[u], pos[v]
        bend = 0.15 * k * (1 if k % 2 else -1)
        mx, my = (x1 + x2) / 2 - bend * (y2 - y1), (y1 + y2) / 2 + bend * (x2 - x1)
        color = "red" if e in rungs else "0.35"
        ax.plot([x1, mx, x2], [y1, my, y2], color=color, lw=2.0 if e in rungs else 1.0, zorder=1)
        if flow is not None and e in flow:
            t, h, x = flow[e]
            ax.annotate(str(abs(x)), (mx, my), fontsize=7, ha="center", va="center", color="navy")
    xs = [pos[v][0] for v in range(g.vertex_count)]
    ys = [pos[v][1] for v in range(g.vertex_count)]
    ax.scatter(xs, ys, s=120, color="white", edgecolors="black", zorder=2)
    for v in range(g.vertex_count):
        ax.annotate(str(v), pos[v], fontsize=7, ha="center", va="center", zorder=3)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.savefig(str(path), dpi=120, bbox_inches="tight", metadata={"Software": None} if str(path).endswith(".png") else None)
    plt.close(fig)
