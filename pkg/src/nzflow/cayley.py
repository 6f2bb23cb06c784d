"""Cayley multigraphs on connection multisets, quotients and covering lifts.

Edges are materialised by *slots*. A slot is one multiplicity unit of a
non-involution pair ``{x, x^-1}`` (``x`` the lesser index) or one unit of an
involution ``z``. A pair slot contributes the edges ``g -- gx`` for every
``g``; an involution slot contributes ``g -- gz`` for ``g < gz``. Edge ids run
through the slots in order and, within a slot, through ``g`` in order. Every
edge is stored with host orientation ``g -> gx`` and carries the label
``(lesser endpoint, element leading away from it, copy)``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

from .errors import DisconnectedError, FlowError, GroupError, InternalAssertion, PreconditionError
from .flows import FlowAssignment, MultiGraph, Subgraph, perfect_matching, verify_flow
from .groups import FiniteGroup, Subgroup, generated_subgroup, is_normal, quotient_group

__all__ = [
    "ConnectionMultiset",
    "CayleyGraph",
    "Covering",
    "validate_connection",
    "build_cayley",
    "quotient_cayley",
    "lift_flow",
    "subgroup_components",
]


@dataclass(frozen=True)
class ConnectionMultiset:
    parent: FiniteGroup = field(repr=False, compare=False)
    multiplicity: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, G: FiniteGroup, elements: Iterable[int]) -> "ConnectionMultiset":
        return validate_connection(G, sorted(Counter(elements).items()))

    @cached_property
    def counts(self) -> dict[int, int]:
        return dict(self.multiplicity)

    @property
    def cardinality(self) -> int:
        return sum(m for _, m in self.multiplicity)

    def __len__(self) -> int:
        return self.cardinality

    @property
    def support(self) -> list[int]:
        return [x for x, _ in self.multiplicity]

    def elements(self) -> list[int]:
        return [x for x, m in self.multiplicity for _ in range(m)]

    def __add__(self, other: "ConnectionMultiset") -> "ConnectionMultiset":
        return ConnectionMultiset.of(self.parent, self.elements() + other.elements())

    def __sub__(self, other: "ConnectionMultiset") -> "ConnectionMultiset":
        c = Counter(self.elements())
        c.subtract(other.elements())
        if any(v < 0 for v in c.values()):
            raise PreconditionError("multiset difference is not contained")
        return ConnectionMultiset.of(self.parent, c.elements())

    def to_json(self) -> list[dict]:
        return [{"element": x, "multiplicity": m} for x, m in self.multiplicity]


def validate_connection(G: FiniteGroup, raw: Iterable[tuple[int, int]] | Mapping[int, int]) -> ConnectionMultiset:
    """Check ``1 not in X`` and equal multiplicities of ``x`` and ``x^-1``."""
    items = raw.items() if isinstance(raw, Mapping) else raw
    mult: Counter[int] = Counter()
    problems = []
    for x, m in items:
        x, m = int(x), int(m)
        if not 0 <= x < G.order:
            problems.append(f"element {x} out of range")
            continue
        if m <= 0:
            problems.append(f"element {x} has non-positive multiplicity {m}")
            continue
        mult[x] += m
    if G.identity in mult:
        problems.append("identity is in the connection multiset")
    for x, m in sorted(mult.items()):
        xi = G.inv(x)
        if mult.get(xi, 0) != m:
            problems.append(f"inverse-multiplicity mismatch: {x} has {m}, its inverse {xi} has {mult.get(xi, 0)}")
    if problems:
        raise GroupError("; ".join(problems))
    return ConnectionMultiset(G, tuple(sorted(mult.items())))


@dataclass(frozen=True)
class Slot:
    element: int
    copy: int
    involution: bool


class CayleyGraph:
    """``Cay(G, X)`` with slot bookkeeping; see the module docstring."""

    def __init__(self, group: FiniteGroup, connection: ConnectionMultiset):
        self.group = group
        self.connection = connection
        G = group
        slots: list[Slot] = []
        for x, m in connection.multiplicity:
            xi = G.inv(x)
            if xi == x:
                slots.extend(Slot(x, c, True) for c in range(m))
            elif x < xi:
                slots.extend(Slot(x, c, False) for c in range(m))
        self.slots = slots
        self.graph = MultiGraph(G.order)
        self.labels: dict[int, tuple[int, int, int]] = {}
        self.slot_of: dict[int, int] = {}
        self.slot_edges: list[list[int]] = []
        self._from: list[dict[int, int]] = []
        for si, s in enumerate(slots):
            ids, frm = [], {}
            xi = G.inv(s.element)
            for g in range(G.order):
                h = G.mul(g, s.element)
                if s.involution and h < g:
                    frm[g] = frm[h]
                    continue
                e = self.graph.add_edge(g, h)
                self.labels[e] = (g, s.element, s.copy) if g < h else (h, xi, s.copy)
                self.slot_of[e] = si
                ids.append(e)
                frm[g] = e
            self.slot_edges.append(ids)
            self._from.append(frm)
        for v in range(G.order):
            if self.graph.degree(v) != connection.cardinality:
                raise InternalAssertion(f"vertex {v} has degree {self.graph.degree(v)} != |X|")

    def __repr__(self) -> str:
        return f"CayleyGraph({self.group.name or self.group.order}, |X|={self.connection.cardinality})"

    def edge(self, g: int, slot: int) -> int:
        """The slot's edge joining ``g`` and ``g x`` (``x`` the slot element)."""
        return self._from[slot][g]

    def edge_via(self, g: int, slot: int, inverse: bool = False) -> int:
        """Edge joining ``g`` and ``g x`` or, with ``inverse``, ``g x^-1``."""
        if not inverse or self.slots[slot].involution:
            return self._from[slot][g]
        return self._from[slot][self.group.mul(g, self.group.inv(self.slots[slot].element))]

    def edge_between(self, v: int, x: int, slots: Iterable[int] | None = None) -> int:
        """An edge joining ``v`` and ``v x`` from the given slots (least slot first)."""
        G = self.group
        cand = self.slots_of(x) if slots is None else [s for s in sorted(slots) if s in self.slots_of(x)]
        if not cand:
            raise PreconditionError(f"no slot carries element {x}")
        s = cand[0]
        sl = self.slots[s]
        if sl.involution or sl.element == x:
            return self._from[s][v]
        return self._from[s][G.mul(v, x)]

    def sub(self, slots: Iterable[int]) -> Subgraph:
        return Subgraph(self.graph, frozenset(e for s in slots for e in self.slot_edges[s]), frozenset(range(self.group.order)))

    def whole(self) -> Subgraph:
        return self.graph.whole()

    def slot_multiset(self, slots: Iterable[int]) -> ConnectionMultiset:
        els = []
        for s in slots:
            sl = self.slots[s]
            els.append(sl.element)
            if not sl.involution:
                els.append(self.group.inv(sl.element))
        return ConnectionMultiset.of(self.group, els)

    def slots_of(self, x: int) -> list[int]:
        """Slots carrying ``x`` (as either member of its pair)."""
        r = min(x, self.group.inv(x))
        return [i for i, s in enumerate(self.slots) if s.element == r]

    def choose_slots(self, elements: Sequence[int], used: Iterable[int] = ()) -> list[int]:
        """Slots for an inverse-closed sub-multiset, avoiding ``used``; least copies first."""
        taken = set(used)
        need = Counter(elements)
        out = []
        for x in sorted(need):
            xi = self.group.inv(x)
            if xi != x and x > xi:
                continue
            if xi != x and need[x] != need[xi]:
                raise PreconditionError(f"sub-multiset is not inverse-closed at {x}")
            k = need[x]
            free = [s for s in self.slots_of(x) if s not in taken]
            if len(free) < k:
                raise PreconditionError(f"element {x} is not available {k} more times")
            out.extend(free[:k])
            taken.update(free[:k])
        return sorted(out)

    def component_cosets(self, slots: Sequence[int]) -> list[tuple[Subgraph, int]]:
        """Components of the slot subgraph with their least element, in order."""
        H = generated_subgroup(self.group, [self.slots[s].element for s in slots])
        seen: set[int] = set()
        out = []
        edges_by_v: dict[int, list[int]] = {}
        for s in slots:
            for e in self.slot_edges[s]:
                u, v = self.graph.edges[e]
                edges_by_v.setdefault(u, []).append(e)
        for g in range(self.group.order):
            if g in seen:
                continue
            coset = H.left_coset(g)
            seen.update(coset)
            es = frozenset(e for v in coset for e in edges_by_v.get(v, ()))
            out.append((Subgraph(self.graph, es, frozenset(coset)), g))
        return out

    def is_connected(self) -> bool:
        return generated_subgroup(self.group, self.connection.support).order == self.group.order


def build_cayley(G: FiniteGroup, X: ConnectionMultiset) -> CayleyGraph:
    if X.parent is not G and X.parent.table != G.table:
        raise GroupError("connection multiset belongs to a different group")
    return CayleyGraph(G, X)


@dataclass
class Covering:
    """Vertex projection and explicit edge map from ``Cay(G,X)`` onto ``Cay(G/N, X/N)``."""

    upstairs: CayleyGraph
    quotient: CayleyGraph
    projection: list[int]
    edge_map: dict[int, int]
    normal: Subgroup
    edges: frozenset[int] = frozenset()

    @property
    def subgraph(self) -> Subgraph:
        return Subgraph(self.upstairs.graph, self.edges, frozenset(range(self.upstairs.group.order)))


def quotient_cayley(cay: CayleyGraph, N: Subgroup, slots: Sequence[int] | None = None) -> Covering:
    """Quotient Cayley graph together with a locally bijective covering map.

    With ``slots`` only the spanning subgraph on those slots is covered; the
    edge map then uses the host's edge ids for that subgraph.
    """
    G = cay.group
    slots = list(range(len(cay.slots))) if slots is None else sorted(slots)
    X = cay.slot_multiset(slots)
    if not is_normal(G, N):
        raise GroupError("N is not normal")
    bad = [x for x in X.support if x in N]
    if bad:
        raise PreconditionError(f"connection elements {bad} lie in N")
    Q, proj = quotient_group(G, N)
    XQ = ConnectionMultiset.of(Q, [proj[x] for x in X.elements()])
    qc = CayleyGraph(Q, XQ)
    up, dn = cay.graph, qc.graph
    sub_edges = [e for s in slots for e in cay.slot_edges[s]]
    by_pair_up: dict[tuple[int, int], list[int]] = {}
    for e in sub_edges:
        u, v = up.edges[e]
        a, b = proj[u], proj[v]
        by_pair_up.setdefault((min(a, b), max(a, b)), []).append(e)
    by_pair_dn: dict[tuple[int, int], list[int]] = {}
    for e, (a, b) in dn.edges.items():
        by_pair_dn.setdefault((min(a, b), max(a, b)), []).append(e)
    if by_pair_up.keys() != by_pair_dn.keys():
        raise InternalAssertion("block adjacency differs between graph and quotient")
    edge_map: dict[int, int] = {}
    for key in sorted(by_pair_up):
        remaining = set(by_pair_up[key])
        left = [g for g in range(G.order) if proj[g] == key[0]]
        for qe in by_pair_dn[key]:
            m = perfect_matching(Subgraph(up, frozenset(remaining)), left)
            for e in m.values():
                edge_map[e] = qe
                remaining.discard(e)
        if remaining:
            raise InternalAssertion("upstairs edges left over after matching decomposition")
    cov = Covering(cay, qc, list(proj), edge_map, N, frozenset(sub_edges))
    _check_local_bijection(cov)
    return cov


def _check_local_bijection(cov: Covering) -> None:
    up, dn, proj = cov.upstairs.graph, cov.quotient.graph, cov.projection
    for g in range(cov.upstairs.group.order):
        images = [cov.edge_map[e] for e in up.incidence[g] if e in cov.edges]
        if sorted(images) != sorted(dn.incidence[proj[g]]) or len(set(images)) != len(images):
            raise InternalAssertion(f"covering is not locally bijective at {g}")
    for e, qe in cov.edge_map.items():
        u, v = up.edges[e]
        if {proj[u], proj[v]} != set(dn.edges[qe]):
            raise InternalAssertion(f"edge {e} maps to a non-incident quotient edge")


def lift_flow(cov: Covering, fq: FlowAssignment, k: int = 3) -> FlowAssignment:
    """Pull a flow on the quotient back through the covering."""
    if set(fq) != set(cov.quotient.graph.edges):
        raise FlowError("quotient flow does not cover the quotient graph")
    up, proj = cov.upstairs.graph, cov.projection
    arcs = {}
    for e, qe in cov.edge_map.items():
        t, h, x = fq[qe]
        u, v = up.edges[e]
        if (proj[u], proj[v]) == (t, h):
            arcs[e] = (u, v, x)
        elif (proj[v], proj[u]) == (t, h):
            arcs[e] = (v, u, x)
        else:
            raise FlowError(f"covering is invalid at edge {e}")
    f = FlowAssignment(arcs)
    if verify_flow(cov.quotient.graph, fq, k).ok and not verify_flow(cov.subgraph, f, k).ok:
        raise InternalAssertion("lifted flow fails verification")
    return f


def subgroup_components(G: FiniteGroup, Xsub: ConnectionMultiset) -> list[tuple[Subgraph, int]]:
    """Components of ``Cay(G, Xsub)``, each with its least element as left translator."""
    cay = build_cayley(G, Xsub)
    return cay.component_cosets(range(len(cay.slots)))


def require_connected(cay: CayleyGraph) -> None:
    if not cay.is_connected():
        raise DisconnectedError("connection multiset does not generate the group")
