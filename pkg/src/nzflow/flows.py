"""Loopless multigraphs, integer flows and the basic flow constructions.

Every flow built here is checked with :func:`verify_flow` before it is
returned; a failed check raises :class:`InternalAssertion`.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import FlowError, InternalAssertion, PreconditionError

__all__ = [
    "MultiGraph",
    "Subgraph",
    "FlowAssignment",
    "FlowReport",
    "Suppression",
    "verify_flow",
    "reorient",
    "glue",
    "union_disjoint",
    "even_2_flow",
    "suppress",
    "transfer_across_subdivision",
    "extend_odd_regular",
    "cubic_bipartite_3flow",
    "perfect_matching",
    "subcubic_3flow",
    "two_coloring",
]


class MultiGraph:
    """Undirected loopless multigraph with stable integer edge ids."""

    def __init__(self, vertex_count: int, edges: Iterable[Sequence[int]] = ()):
        self.vertex_count = int(vertex_count)
        self.edges: dict[int, tuple[int, int]] = {}
        for i, e in enumerate(edges):
            if len(e) == 3:
                eid, u, v = e
            else:
                eid, (u, v) = i, e
            self.add_edge(u, v, eid)

    def add_edge(self, u: int, v: int, eid: int | None = None) -> int:
        if eid is None:
            eid = max(self.edges, default=-1) + 1
        if eid in self.edges:
            raise FlowError(f"duplicate edge id {eid}")
        if u == v:
            raise FlowError(f"loop at vertex {u}")
        if not (0 <= u < self.vertex_count and 0 <= v < self.vertex_count):
            raise FlowError(f"edge {eid} has an endpoint out of range")
        self.edges[eid] = (u, v)
        self.__dict__.pop("incidence", None)
        return eid

    def __repr__(self) -> str:
        return f"MultiGraph(vertices={self.vertex_count}, edges={len(self.edges)})"

    @property
    def edge_ids(self) -> list[int]:
        return list(self.edges)

    def endpoints(self, eid: int) -> tuple[int, int]:
        return self.edges[eid]

    def other(self, eid: int, v: int) -> int:
        a, b = self.edges[eid]
        return b if v == a else a

    @cached_property
    def incidence(self) -> dict[int, list[int]]:
        inc: dict[int, list[int]] = defaultdict(list)
        for eid, (u, v) in self.edges.items():
            inc[u].append(eid)
            inc[v].append(eid)
        return inc

    def degree(self, v: int) -> int:
        return len(self.incidence.get(v, ()))

    def whole(self) -> "Subgraph":
        return Subgraph(self, frozenset(self.edges), frozenset(range(self.vertex_count)))

    def sub(self, edges: Iterable[int]) -> "Subgraph":
        return Subgraph(self, frozenset(edges))

    def to_json(self) -> dict:
        return {
            "vertex_count": self.vertex_count,
            "edges": [{"id": e, "u": u, "v": v} for e, (u, v) in self.edges.items()],
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "MultiGraph":
        try:
            return cls(doc["vertex_count"], [(e["id"], e["u"], e["v"]) for e in doc["edges"]])
        except (KeyError, TypeError) as exc:
            raise FlowError(f"malformed graph document: {exc}") from None


@dataclass(frozen=True)
class Subgraph:
    """A set of host edges (plus optional isolated vertices)."""

    host: MultiGraph = field(compare=False, repr=False)
    edges: frozenset[int]
    extra_vertices: frozenset[int] = frozenset()

    def __post_init__(self):
        missing = [e for e in self.edges if e not in self.host.edges]
        if missing:
            raise FlowError(f"edges {sorted(missing)[:5]} are not in the host")

    @cached_property
    def vertices(self) -> frozenset[int]:
        vs = set(self.extra_vertices)
        for e in self.edges:
            vs.update(self.host.edges[e])
        return frozenset(vs)

    @cached_property
    def incidence(self) -> dict[int, list[int]]:
        inc: dict[int, list[int]] = defaultdict(list)
        for e in sorted(self.edges):
            u, v = self.host.edges[e]
            inc[u].append(e)
            inc[v].append(e)
        return inc

    def degree(self, v: int) -> int:
        return len(self.incidence.get(v, ()))

    def __or__(self, other: "Subgraph") -> "Subgraph":
        return Subgraph(self.host, self.edges | other.edges, self.extra_vertices | other.extra_vertices)

    def minus(self, edges: Iterable[int]) -> "Subgraph":
        return Subgraph(self.host, self.edges - frozenset(edges))


def _as_sub(g: MultiGraph | Subgraph) -> Subgraph:
    return g.whole() if isinstance(g, MultiGraph) else g


class FlowAssignment(Mapping[int, tuple[int, int, int]]):
    """An orientation plus an integer value per edge: ``eid -> (tail, head, value)``."""

    def __init__(self, arcs: Mapping[int, tuple[int, int, int]] | Iterable[tuple[int, tuple[int, int, int]]] = ()):
        self._arcs = dict(sorted(dict(arcs).items()))

    @classmethod
    def from_values(cls, host: MultiGraph, values: Mapping[int, int]) -> "FlowAssignment":
        """Values given in the host's own ``u -> v`` orientation."""
        return cls({e: (*host.edges[e], int(x)) for e, x in values.items()})

    def __getitem__(self, eid: int) -> tuple[int, int, int]:
        return self._arcs[eid]

    def __iter__(self) -> Iterator[int]:
        return iter(self._arcs)

    def __len__(self) -> int:
        return len(self._arcs)

    def __eq__(self, other) -> bool:
        if isinstance(other, FlowAssignment):
            return self._arcs == other._arcs
        return NotImplemented

    def __repr__(self) -> str:
        return f"FlowAssignment({len(self)} arcs)"

    def values_on(self, host: MultiGraph) -> dict[int, int]:
        """Values re-expressed in the host's ``u -> v`` orientation."""
        out = {}
        for e, (t, h, x) in self._arcs.items():
            u, v = host.edges[e]
            if (t, h) == (u, v):
                out[e] = x
            elif (t, h) == (v, u):
                out[e] = -x
            else:
                raise FlowError(f"arc {e} = ({t}, {h}) does not match edge endpoints ({u}, {v})")
        return out

    def restrict(self, edges: Iterable[int]) -> "FlowAssignment":
        return FlowAssignment({e: self._arcs[e] for e in edges})

    def to_json(self) -> list[dict]:
        return [{"edge_id": e, "tail": t, "head": h, "value": x} for e, (t, h, x) in self._arcs.items()]

    @classmethod
    def from_json(cls, doc: Iterable[Mapping]) -> "FlowAssignment":
        try:
            return cls({int(a["edge_id"]): (int(a["tail"]), int(a["head"]), int(a["value"])) for a in doc})
        except (KeyError, TypeError) as exc:
            raise FlowError(f"malformed flow document: {exc}") from None


@dataclass
class FlowReport:
    ok: bool
    violations: list[str]

    def __bool__(self) -> bool:
        return self.ok


def verify_flow(g: MultiGraph | Subgraph, f: FlowAssignment, k: int) -> FlowReport:
    """Check that ``f`` is a nowhere-zero ``k``-flow on ``g``."""
    s = _as_sub(g)
    if set(f) != set(s.edges):
        extra = sorted(set(f) - s.edges)[:5]
        missing = sorted(s.edges - set(f))[:5]
        raise FlowError(f"flow does not cover the graph (extra {extra}, missing {missing})")
    host = s.host
    violations = []
    net: dict[int, int] = defaultdict(int)
    for e, (t, h, x) in f.items():
        if {t, h} != set(host.edges[e]) or t == h:
            raise FlowError(f"arc {e} = ({t}, {h}) does not match its edge {host.edges[e]}")
        if x == 0:
            violations.append(f"edge {e}: zero value")
        elif abs(x) >= k:
            violations.append(f"edge {e}: |{x}| >= {k}")
        net[t] += x
        net[h] -= x
    for v in sorted(net):
        if net[v]:
            violations.append(f"vertex {v}: out - in = {net[v]}")
    return FlowReport(not violations, violations)


def _checked(g: MultiGraph | Subgraph, f: FlowAssignment, k: int, what: str) -> FlowAssignment:
    rep = verify_flow(g, f, k)
    if not rep.ok:
        raise InternalAssertion(f"{what} produced an invalid flow: {rep.violations[:3]}")
    return f


def reorient(f: FlowAssignment, target: Mapping[int, tuple[int, int]]) -> FlowAssignment:
    """Express ``f`` in the orientation ``target`` (``eid -> (tail, head)``)."""
    out = {}
    for e, (t, h, x) in f.items():
        tt, th = target[e]
        if (tt, th) == (t, h):
            out[e] = (t, h, x)
        elif (tt, th) == (h, t):
            out[e] = (h, t, -x)
        else:
            raise FlowError(f"target orientation of edge {e} uses different endpoints")
    return FlowAssignment(out)


def union_disjoint(host: MultiGraph, *flows: FlowAssignment) -> FlowAssignment:
    vals: dict[int, int] = {}
    for f in flows:
        fv = f.values_on(host)
        if vals.keys() & fv.keys():
            raise FlowError("flows share edges")
        vals.update(fv)
    return FlowAssignment.from_values(host, vals)


def glue(host: MultiGraph, g1: Subgraph, f1: FlowAssignment, g2: Subgraph, f2: FlowAssignment) -> FlowAssignment:
    """Combine nowhere-zero 3-flows on two subgraphs sharing at most one edge."""
    shared = g1.edges & g2.edges
    if len(shared) > 1:
        raise PreconditionError(f"subgraphs share {len(shared)} edges")
    for g, f, tag in ((g1, f1, "first"), (g2, f2, "second")):
        rep = verify_flow(g, f, 3)
        if not rep.ok:
            raise PreconditionError(f"{tag} flow is not a nowhere-zero 3-flow: {rep.violations[:3]}")
    v1, v2 = f1.values_on(host), f2.values_on(host)
    out = dict(v1)
    if not shared:
        out.update(v2)
    else:
        (e0,) = shared
        a, b = v1[e0], v2[e0]
        sign = 1 if (a - b) % 3 == 0 else -1
        for e, x in v2.items():
            out[e] = sign * x
        out[e0] = a + sign * b
    both = g1 | g2
    if any(abs(x) >= 3 for x in out.values()):
        # the sum is a Z3-flow; lift it back to an integer 3-flow
        from .oracle import Z3Flow, z3_to_integer

        z = Z3Flow({e: (*host.edges[e], x % 3) for e, x in out.items()})
        return _checked(both, z3_to_integer(both, z), 3, "glue")
    return _checked(both, FlowAssignment.from_values(host, out), 3, "glue")


def even_2_flow(g: MultiGraph | Subgraph) -> FlowAssignment:
    """All-ones flow from a decomposition into closed trails."""
    s = _as_sub(g)
    host = s.host
    for v, es in s.incidence.items():
        if len(es) % 2:
            raise PreconditionError(f"vertex {v} has odd degree {len(es)}")
    unused = {v: list(es) for v, es in s.incidence.items()}
    used: set[int] = set()
    arcs: dict[int, tuple[int, int, int]] = {}

    def next_edge(v: int) -> int | None:
        lst = unused[v]
        while lst and lst[0] in used:
            lst.pop(0)
        return lst[0] if lst else None

    for start in sorted(unused):
        while next_edge(start) is not None:
            v = start
            while True:
                e = next_edge(v)
                if e is None:
                    break
                used.add(e)
                w = host.other(e, v)
                arcs[e] = (v, w, 1)
                v = w
            if v != start:
                raise InternalAssertion("trail did not close in an even graph")
    return _checked(s, FlowAssignment(arcs), 2, "even_2_flow")


@dataclass
class Suppression:
    """Result of suppressing every degree-2 vertex of a subgraph.

    ``core`` keeps the branch vertices (renumbered ``0..k-1``); each core edge
    corresponds to a host path listed in ``paths`` as ``(edge ids, start
    vertex)``. Chains that close up on one branch vertex go to ``loops``;
    components without branch vertices go to ``cycles``.
    """

    core: MultiGraph
    core_to_host: list[int]
    paths: dict[int, tuple[list[int], int]]
    loops: list[list[int]]
    cycles: list[list[int]]


def suppress(g: MultiGraph | Subgraph) -> Suppression:
    s = _as_sub(g)
    host = s.host
    deg = {v: len(es) for v, es in s.incidence.items()}
    if any(d < 2 for d in deg.values()):
        raise PreconditionError("suppression needs minimum degree 2")
    branch = sorted(v for v, d in deg.items() if d != 2)
    index = {v: i for i, v in enumerate(branch)}
    core = MultiGraph(len(branch))
    paths: dict[int, tuple[list[int], int]] = {}
    loops: list[list[int]] = []
    cycles: list[list[int]] = []
    seen: set[int] = set()

    def walk(v: int, e: int) -> tuple[list[int], int]:
        chain = [e]
        w = host.other(e, v)
        while deg[w] == 2:
            a, b = s.incidence[w]
            e = b if a == e else a
            if e in seen or e == chain[0]:
                break
            chain.append(e)
            seen.add(e)
            w = host.other(e, w)
        return chain, w

    for v in branch:
        for e in s.incidence[v]:
            if e in seen:
                continue
            seen.add(e)
            chain, w = walk(v, e)
            if w == v:
                loops.append(chain)
            else:
                ce = core.add_edge(index[v], index[w])
                paths[ce] = (chain, v)
    for v in sorted(deg):
        for e in s.incidence[v]:
            if e not in seen:
                seen.add(e)
                chain, _ = walk(v, e)
                cycles.append(chain)
    return Suppression(core, branch, paths, loops, cycles)


def transfer_across_subdivision(
    g: MultiGraph,
    f: FlowAssignment,
    subdivided: MultiGraph,
    correspondence: Mapping[int, Sequence[int]],
    vertex_map: Sequence[int] | Mapping[int, int] | None = None,
) -> FlowAssignment:
    """Carry a flow on ``g`` to a subdivision of it.

    ``correspondence`` maps each edge of ``g`` to the ordered edge ids of the
    path that replaces it in ``subdivided``; ``vertex_map`` sends vertices of
    ``g`` to vertices of ``subdivided`` (identity by default).
    """
    vm = (lambda v: v) if vertex_map is None else (lambda v: vertex_map[v])
    arcs = {}
    for e, (t, h, x) in f.items():
        path = list(correspondence[e])
        cur = vm(t)
        if path and cur not in subdivided.edges[path[0]]:
            path.reverse()
        for pe in path:
            a, b = subdivided.edges[pe]
            if cur == a:
                arcs[pe] = (a, b, x)
                cur = b
            elif cur == b:
                arcs[pe] = (b, a, x)
                cur = a
            else:
                raise FlowError(f"path for edge {e} is not contiguous")
        if cur != vm(h):
            raise FlowError(f"path for edge {e} does not end at the mapped endpoint")
    out = FlowAssignment(arcs)
    if set(out) != set(subdivided.edges):
        raise FlowError("correspondence does not cover the subdivision")
    return out


def two_coloring(g: MultiGraph | Subgraph) -> dict[int, int] | None:
    """Proper 2-colouring of the vertices, or ``None`` if there is an odd cycle."""
    s = _as_sub(g)
    host = s.host
    color: dict[int, int] = {}
    for start in sorted(s.vertices):
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for e in s.incidence.get(v, ()):
                w = host.other(e, v)
                if w not in color:
                    color[w] = 1 - color[v]
                    stack.append(w)
                elif color[w] == color[v]:
                    return None
    return color


def perfect_matching(g: MultiGraph | Subgraph, left: Iterable[int]) -> dict[int, int]:
    """Left vertex -> matched edge id, by augmenting paths; raises if none is perfect."""
    s = _as_sub(g)
    host = s.host
    match_edge_of: dict[int, int] = {}  # right vertex -> edge
    left = sorted(left)

    def augment(u: int, visited: set[int]) -> bool:
        for e in s.incidence.get(u, ()):
            w = host.other(e, u)
            if w in visited:
                continue
            visited.add(w)
            if w not in match_edge_of or augment(host.other(match_edge_of[w], w), visited):
                match_edge_of[w] = e
                return True
        return False

    for u in left:
        if not augment(u, set()):
            raise InternalAssertion(f"no perfect matching covers vertex {u}")
    return {host.other(e, w): e for w, e in match_edge_of.items()}


def cubic_bipartite_3flow(g: MultiGraph | Subgraph, bipartition: tuple[Iterable[int], Iterable[int]]) -> FlowAssignment:
    """Matching edges carry -2 from A to B, all other edges carry 1 from A to B."""
    s = _as_sub(g)
    host = s.host
    A, B = frozenset(bipartition[0]), frozenset(bipartition[1])
    if A & B or (A | B) != s.vertices:
        raise PreconditionError("bipartition does not partition the vertex set")
    for v in s.vertices:
        if s.degree(v) != 3:
            raise PreconditionError(f"vertex {v} has degree {s.degree(v)}, expected 3")
    for e in s.edges:
        u, v = host.edges[e]
        if (u in A) == (v in A):
            raise PreconditionError(f"edge {e} does not cross the bipartition")
    matched = set(perfect_matching(s, A).values())
    arcs = {}
    for e in s.edges:
        u, v = host.edges[e]
        a, b = (u, v) if u in A else (v, u)
        arcs[e] = (a, b, -2 if e in matched else 1)
    return _checked(s, FlowAssignment(arcs), 3, "cubic_bipartite_3flow")


def extend_odd_regular(host: MultiGraph | Subgraph, sub: Subgraph, f: FlowAssignment) -> FlowAssignment:
    """Extend a 3-flow on an odd-regular spanning subgraph to an odd-regular host."""
    H = _as_sub(host)
    if not sub.edges <= H.edges:
        raise PreconditionError("sub is not contained in host")
    degs = {H.degree(v) for v in H.vertices}
    if len(degs) != 1 or next(iter(degs)) % 2 == 0:
        raise PreconditionError(f"host is not regular of odd valency (degrees {sorted(degs)})")
    sdegs = {sub.degree(v) for v in H.vertices}
    if len(sdegs) != 1 or next(iter(sdegs)) % 2 == 0:
        raise PreconditionError("sub is not a spanning regular subgraph of odd valency")
    rep = verify_flow(sub, f, 3)
    if not rep.ok:
        raise PreconditionError(f"flow on sub is not a nowhere-zero 3-flow: {rep.violations[:3]}")
    rest = H.minus(sub.edges)
    if not rest.edges:
        return f
    f2 = even_2_flow(rest)
    return _checked(H, union_disjoint(H.host, f, f2), 3, "extend_odd_regular")


def subcubic_3flow(g: MultiGraph | Subgraph) -> FlowAssignment | None:
    """Decide and build a nowhere-zero 3-flow on a graph with degrees in {2, 3}.

    Suppressing the degree-2 vertices leaves a cubic multigraph (plus bare
    cycles); a cubic graph has a nowhere-zero 3-flow exactly when it is
    bipartite, and then the matching construction produces one. Returns
    ``None`` when no flow exists. Generalised ladders and the pieces cut from
    them are all of this shape.
    """
    s = _as_sub(g)
    host = s.host
    if not s.edges:
        return FlowAssignment()
    for v, es in s.incidence.items():
        if len(es) < 2:
            return None
        if len(es) > 3:
            raise PreconditionError(f"vertex {v} has degree {len(es)} > 3")
    sup = suppress(s)
    if sup.loops:
        return None
    vals: dict[int, int] = {}
    for cyc in sup.cycles:
        f = even_2_flow(s.host.sub(cyc))
        vals.update(f.values_on(host))
    if sup.core.edges:
        color = two_coloring(sup.core)
        if color is None:
            return None
        A = [v for v, c in color.items() if c == 0]
        B = [v for v, c in color.items() if c == 1]
        fc = cubic_bipartite_3flow(sup.core, (A, B))
        corr = {ce: chain for ce, (chain, _) in sup.paths.items()}
        sub_host = _SubView(host, [e for ch in corr.values() for e in ch])
        fh = transfer_across_subdivision(sup.core, fc, sub_host, corr, sup.core_to_host)
        vals.update(fh.values_on(host))
    return _checked(s, FlowAssignment.from_values(host, vals), 3, "subcubic_3flow")


class _SubView(MultiGraph):
    """A host restricted to some edge ids, sharing vertex numbering."""

    def __init__(self, host: MultiGraph, edges: Iterable[int]):
        self.vertex_count = host.vertex_count
        self.edges = {e: host.edges[e] for e in sorted(edges)}
