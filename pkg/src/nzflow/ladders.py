"""Closed and generalized closed ladders, and the ladder composition engines.

Flow construction for every ladder-like piece goes through
:func:`subcubic_3flow`: suppressing the degree-2 vertices leaves a cubic
multigraph, which carries a nowhere-zero 3-flow exactly when it is
bipartite. That one rule covers the parity table of circular and Möbius
ladders, their subdivisions and the graphs left after deleting rungs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cayley import CayleyGraph, ConnectionMultiset, build_cayley
from .errors import InternalAssertion, PreconditionError
from .flows import (
    FlowAssignment,
    MultiGraph,
    Subgraph,
    _as_sub,
    extend_odd_regular,
    glue,
    subcubic_3flow,
    verify_flow,
)
from .groups import FiniteGroup, generated_subgroup

__all__ = [
    "LadderKind",
    "GeneralizedLadder",
    "CubicClass",
    "build_ladder",
    "ladder_flow",
    "resolve_rung_deletion",
    "ladder_with_rung",
    "classify_cubic",
    "cup_compose",
    "cladder_compose",
    "two_ladder_3flow",
    "two_ladder_on",
]

KINDS = ("Path", "Circular", "Mobius", "TwoCycles", "BridgedCycles", "Cycle", "ChordedCycle")


@dataclass(frozen=True)
class LadderKind:
    name: str
    n: int
    m: int = 0

    def __post_init__(self):
        if self.name not in KINDS:
            raise PreconditionError(f"unknown ladder kind {self.name!r}")
        lo = {"Path": 1, "Circular": 2, "Mobius": 2, "Cycle": 2, "ChordedCycle": 2}.get(self.name, 2)
        if self.n < lo or (self.name in ("TwoCycles", "BridgedCycles") and self.m < 2):
            raise PreconditionError(f"invalid parameters for {self}")

    def __str__(self) -> str:
        if self.name in ("TwoCycles", "BridgedCycles"):
            return f"{self.name}({self.m},{self.n})"
        return f"{self.name}({self.n})"

    @classmethod
    def Path(cls, n):
        return cls("Path", n)

    @classmethod
    def Circular(cls, n):
        return cls("Circular", n)

    @classmethod
    def Mobius(cls, n):
        return cls("Mobius", n)

    @classmethod
    def Cycle(cls, n):
        return cls("Cycle", n)

    @classmethod
    def ChordedCycle(cls, n):
        return cls("ChordedCycle", n)

    @classmethod
    def TwoCycles(cls, m, n):
        return cls("TwoCycles", n, m)

    @classmethod
    def BridgedCycles(cls, m, n):
        return cls("BridgedCycles", n, m)


@dataclass(frozen=True)
class GeneralizedLadder:
    """A ladder-shaped subgraph with its rung edges singled out.

    ``kind`` is the closed-ladder type of the core when known; pieces cut out
    of Cayley graphs may leave it ``None``.
    """

    host: Subgraph
    rungs: frozenset[int]
    kind: LadderKind | None = None
    rails: tuple[tuple[int, ...], ...] = field(default=(), compare=False)

    def __post_init__(self):
        if not self.rungs <= self.host.edges:
            raise PreconditionError("rungs are not edges of the ladder")
        rail = self.host.minus(self.rungs)
        for v in self.host.vertices:
            if rail.degree(v) != 2:
                raise PreconditionError(f"vertex {v} has rail degree {rail.degree(v)}, expected 2")

    @property
    def edges(self) -> frozenset[int]:
        return self.host.edges

    def minus(self, edges: Iterable[int]) -> "GeneralizedLadder":
        edges = frozenset(edges)
        if not edges <= self.rungs:
            raise PreconditionError("only rungs may be deleted from a ladder")
        return GeneralizedLadder(Subgraph(self.host.host, self.host.edges - edges, self.host.vertices), self.rungs - edges)

    def to_json(self) -> dict:
        k = self.kind
        return {"kind": k.name if k else None, "n": k.n if k else None, "rungs": sorted(self.rungs)}


def build_ladder(kind: LadderKind) -> tuple[MultiGraph, GeneralizedLadder]:
    """Canonical numbering: ``(i, j) -> i + n j`` for ladders on ``Z_n x Z_2``, ``i`` on ``Z_2n`` for Möbius."""
    n, m = kind.n, kind.m
    rails: list[tuple[int, int]] = []
    rungs: list[tuple[int, int]] = []
    if kind.name == "Path":
        V = 2 * n
        rails = [(i + n * j, i + 1 + n * j) for j in (0, 1) for i in range(n - 1)]
        rungs = [(i, i + n) for i in range(n)]
    elif kind.name == "Circular":
        V = 2 * n
        rails = [(i + n * j, (i + 1) % n + n * j) for j in (0, 1) for i in range(n)]
        rungs = [(i, i + n) for i in range(n)]
    elif kind.name == "Mobius":
        V = 2 * n
        rails = [(i, (i + 1) % V) for i in range(V)]
        rungs = [(i, i + n) for i in range(n)]
    elif kind.name == "Cycle":
        V = n
        rails = [(i, (i + 1) % n) for i in range(n)]
    elif kind.name == "ChordedCycle":
        V = n
        rails = [(i, (i + 1) % n) for i in range(n)]
        rungs = [(0, n // 2)]
    else:
        V = m + n
        rails = [(i, (i + 1) % m) for i in range(m)] + [(m + i, m + (i + 1) % n) for i in range(n)]
        if kind.name == "BridgedCycles":
            rungs = [(0, m)]
    g = MultiGraph(V, rails + rungs)
    rung_ids = frozenset(range(len(rails), len(rails) + len(rungs)))
    sub = g.whole()
    if kind.name == "Path":
        return g, _PathLadder(sub, rung_ids, kind)
    return g, GeneralizedLadder(sub, rung_ids, kind, _rail_paths(sub, rung_ids))


class _PathLadder(GeneralizedLadder):
    """``L_n`` is not closed: its corner vertices have rail degree 1."""

    def __post_init__(self):
        pass


def _rail_paths(sub: Subgraph, rungs: frozenset[int]) -> tuple[tuple[int, ...], ...]:
    rail = sub.minus(rungs)
    host = sub.host
    seen: set[int] = set()
    out = []
    for e in sorted(rail.edges):
        if e in seen:
            continue
        cyc = [e]
        seen.add(e)
        start, v = host.edges[e]
        while v != start:
            nxt = [f for f in rail.incidence[v] if f not in seen]
            if not nxt:
                break
            f = nxt[0]
            seen.add(f)
            cyc.append(f)
            v = host.other(f, v)
        out.append(tuple(cyc))
    return tuple(out)


def ladder_flow(lad: GeneralizedLadder) -> FlowAssignment | None:
    """Verified nowhere-zero 3-flow on the ladder, or ``None`` if it has none."""
    return subcubic_3flow(lad.host)


def _kind_minus_rung(kind: LadderKind | None) -> LadderKind | None:
    if kind is None:
        return None
    n = kind.n
    if kind.name == "Circular":
        return LadderKind.Circular(n - 1) if n > 2 else None
    if kind.name == "Mobius":
        return LadderKind.Mobius(n - 1) if n > 2 else LadderKind.ChordedCycle(4)
    if kind.name == "BridgedCycles":
        return LadderKind.TwoCycles(kind.m, n)
    if kind.name == "ChordedCycle":
        return LadderKind.Cycle(n)
    return None


def resolve_rung_deletion(lad: GeneralizedLadder, e: int) -> tuple[GeneralizedLadder, FlowAssignment]:
    """Return whichever of ``lad`` and ``lad - e`` carries a nowhere-zero 3-flow."""
    if e not in lad.rungs:
        raise PreconditionError(f"edge {e} is not a rung")
    if lad.kind is not None and lad.kind.name in ("Cycle", "TwoCycles", "Path"):
        raise PreconditionError(f"{lad.kind} is outside the rung-deletion dichotomy")
    f = ladder_flow(lad)
    if f is not None:
        return lad, f
    smaller = lad.minus([e])
    f2 = ladder_flow(smaller)
    if f2 is None:
        raise InternalAssertion("neither the ladder nor the ladder minus a rung has a 3-flow")
    # The minus-rung graph is described by the core kind one step down
    # (circular ladder with one rung left becomes two bridged cycles).
    k = lad.kind
    if k is not None and k.name == "Circular" and k.n == 2:
        rail_lens = sorted(len(p) for p in _rail_paths(smaller.host, smaller.rungs))
        kind2 = LadderKind.BridgedCycles(*rail_lens) if len(rail_lens) == 2 else None
    else:
        kind2 = _kind_minus_rung(k)
    smaller = GeneralizedLadder(smaller.host, smaller.rungs, kind2)
    return smaller, f2


@dataclass(frozen=True)
class CubicClass:
    """A cubic Cayley graph recognised as a closed ladder with rung involution ``z``."""

    kind: LadderKind
    z: int
    rails: tuple[int, ...]
    rung_edges: frozenset[int] = frozenset()
    bullet: str = ""


def ladder_with_rung(G: FiniteGroup, rails: Sequence[int], z: int) -> LadderKind | None:
    """Decide whether ``Cay(<rails, z>, rails + [z])`` is a closed ladder with rung involution ``z``.

    ``rails`` is an inverse-closed pair: ``[x, x^-1]`` or two involutions
    (possibly equal). The rails form 2-regular cycles; right multiplication by
    ``z`` must map rails to rails, either swapping two rail cycles (circular)
    or rotating a single one half way round (Möbius). ``Mobius(1)``, three
    parallel edges, is reported for the degenerate ``{z, z, z}``.
    """
    if len(rails) != 2 or G.power(z, 2) != G.identity or z == G.identity:
        return None
    a, b = rails
    if G.inv(a) != b and not (G.power(a, 2) == G.identity and G.power(b, 2) == G.identity):
        return None
    rs = sorted(rails)
    if sorted(G.conj(r, z) for r in rails) != rs:
        return None
    H = generated_subgroup(G, [a, b, z])
    # walk the rail cycles: alternate a, b (for x, x^-1 that is just powers of x)
    inv_pair = G.inv(a) == b and a != b
    pos: dict[int, tuple[int, int]] = {}
    cycles = []
    for h0 in H.elements:
        if h0 in pos:
            continue
        cyc = [h0]
        pos[h0] = (len(cycles), 0)
        h, step = h0, 0
        while True:
            r = a if (inv_pair or step % 2 == 0) else b
            h = G.mul(h, r)
            step += 1
            if h == h0 and (inv_pair or step % 2 == 0):
                break
            if h in pos:
                return None
            pos[h] = (len(cycles), len(cyc))
            cyc.append(h)
        cycles.append(cyc)
    if len(cycles) == 2:
        c0, c1 = cycles
        if any(pos[G.mul(h, z)][0] != 1 for h in c0):
            return None
        n = len(c0)
        if n < 2:
            return None
        return LadderKind.Circular(n)
    if len(cycles) == 1:
        L = len(cycles[0])
        if L % 2:
            return None
        n = L // 2
        for h in cycles[0]:
            _, i = pos[h]
            _, j = pos[G.mul(h, z)]
            if (j - i) % L != n:
                return None
        if n == 1:
            return LadderKind.ChordedCycle(2)
        return LadderKind.Mobius(n)
    return None


def _satisfies_cubic_hypothesis(G: FiniteGroup, els: Sequence[int]) -> bool:
    H = generated_subgroup(G, els)
    for x in set(els):
        if G.orders[x] == 2 and all(G.mul(x, h) == G.mul(h, x) for h in H.elements):
            return True
    if H.order < 4:
        return False
    for x in set(els):
        o = G.orders[x]
        if o > 1 and all(o % p for p in range(2, o)):
            cyc = generated_subgroup(G, [x]).members
            if all(G.conj(c, h) in cyc for c in cyc for h in H.elements):
                return True
    return False


def classify_cubic(G: FiniteGroup, X3: ConnectionMultiset) -> CubicClass | None:
    """Closed-ladder shape of ``Cay(<X3>, X3)`` under the cubic recognition hypotheses.

    Returns ``None`` (not applicable) when neither a central involution of
    ``<X3>`` lies in ``X3`` nor a prime-order element of ``X3`` generates a
    normal subgroup of ``<X3>`` of order at least 4.
    """
    els = X3.elements()
    if len(els) != 3:
        raise PreconditionError(f"classify_cubic needs |X3| = 3, got {len(els)}")
    if not _satisfies_cubic_hypothesis(G, els):
        return None
    H = generated_subgroup(G, els)
    central = [x for x in els if G.orders[x] == 2 and all(G.mul(x, h) == G.mul(h, x) for h in H.elements)]
    cands = sorted({x for x in els if G.orders[x] == 2}, key=lambda x: (x not in central, x))
    for z in cands:
        rails = list(els)
        rails.remove(z)
        kind = ladder_with_rung(G, rails, z)
        if kind is None or kind.name == "ChordedCycle":
            continue
        cay = build_cayley(G, X3)
        rung_slots = [i for i, s in enumerate(cay.slots) if s.element == z][:1]
        if rails.count(z):
            rung_slots = [i for i, s in enumerate(cay.slots) if s.element == z][-1:]
        comp = H.elements
        rungs = frozenset(e for s in rung_slots for e in cay.slot_edges[s] if cay.graph.edges[e][0] in comp)
        return CubicClass(kind, z, tuple(sorted(rails)), rungs, _bullet(G, els, z, kind, central))
    return None


def _bullet(G, els, z, kind: LadderKind, central) -> str:
    if z not in central:
        return "dihedral_prime"
    others = list(els)
    others.remove(z)
    if others[0] == others[1]:
        return "two_parallel_rails"
    if G.orders[others[0]] == 2 and G.orders[others[1]] == 2:
        return "involution_rails_mobius" if kind.name == "Mobius" else "involution_rails_circular"
    return "cyclic_rails_mobius" if kind.name == "Mobius" else "cyclic_rails_circular"


def _piece_flow(g: Subgraph) -> FlowAssignment | None:
    return subcubic_3flow(g)


def cup_compose(
    host: MultiGraph,
    lam: Subgraph,
    f_lam: FlowAssignment,
    sigma: Sequence[GeneralizedLadder],
) -> FlowAssignment:
    """Extend a flow on ``lam`` over ladder components that meet it only in rungs."""
    rep = verify_flow(lam, f_lam, 3)
    if not rep.ok:
        raise PreconditionError(f"flow on the base graph is invalid: {rep.violations[:3]}")
    acc, f = lam, f_lam
    for idx, theta in enumerate(sigma):
        shared = theta.edges & acc.edges
        if not shared:
            ft = _piece_flow(theta.host)
            if ft is None:
                raise PreconditionError(f"component {idx} shares no edge and admits no 3-flow")
            f = glue(host, acc, f, theta.host, ft)
            acc = acc | theta.host
            continue
        if not shared <= theta.rungs:
            raise PreconditionError(f"component {idx} shares non-rung edges {sorted(shared - theta.rungs)[:5]}")
        e = min(shared)
        prime = theta.host.minus(shared - {e})
        fp = _piece_flow(prime)
        if fp is not None:
            f = glue(host, acc, f, prime, fp)
        else:
            less = prime.minus([e])
            fl = _piece_flow(less)
            if fl is None:
                raise InternalAssertion(f"component {idx}: neither piece nor piece minus a rung has a 3-flow")
            f = glue(host, acc, f, less, fl)
        acc = acc | theta.host
    return f


def cladder_compose(host: MultiGraph | Subgraph, F: Sequence[GeneralizedLadder], E: Iterable[int]) -> FlowAssignment:
    """Flow on a union of generalized closed ladders glued along shared rungs ``E``."""
    H = _as_sub(host)
    E = frozenset(E)
    _check_cladder(H, F, E)
    base = H.host
    n = len(F)
    valid = [ladder_flow(s) is not None for s in F]
    order: list[int] = []
    pending: int | None = None
    acc: Subgraph | None = None
    f: FlowAssignment | None = None
    union_edges: frozenset[int] = frozenset()
    for step in range(n):
        remaining = [i for i in range(n) if i not in order]
        if pending is None:
            i = remaining[0]
        else:
            cands = [j for j in remaining if pending in F[j].edges]
            if not cands:
                raise InternalAssertion(f"no unused member contains the pending rung {pending}")
            i = cands[0]
        order.append(i)
        sig = F[i]
        new_pending = None
        if acc is None:
            if valid[i]:
                acc, f = sig.host, ladder_flow(sig)
            else:
                e1 = min(sig.rungs & E)
                acc = sig.host.minus([e1])
                f = _piece_flow(acc)
                if f is None:
                    raise InternalAssertion("first member minus an E-rung admits no 3-flow")
                new_pending = e1
        else:
            shared = sig.edges & acc.edges
            if shared:
                f = cup_compose(base, acc, f, [sig])
                acc = acc | sig.host
            elif valid[i]:
                f = glue(base, acc, f, sig.host, ladder_flow(sig))
                acc = acc | sig.host
            else:
                choices = sorted((sig.rungs & E) - {pending})
                if not choices:
                    raise InternalAssertion(f"invalid member {i} has no spare E-rung")
                ei = choices[0]
                piece = sig.host.minus([ei])
                fp = _piece_flow(piece)
                if fp is None:
                    raise InternalAssertion(f"member {i} minus an E-rung admits no 3-flow")
                f = glue(base, acc, f, piece, fp)
                acc = acc | piece
                new_pending = ei
        union_edges = union_edges | sig.edges
        pending = new_pending
        expect = union_edges - ({pending} if pending is not None else set())
        if acc.edges != expect:
            raise InternalAssertion(f"composition invariant fails after step {step + 1}")
    if pending is not None or acc is None or acc.edges != H.edges:
        raise InternalAssertion("composition ended with a rung still missing")
    rep = verify_flow(H, f, 3)
    if not rep.ok:
        raise InternalAssertion(f"cladder_compose produced an invalid flow: {rep.violations[:3]}")
    return f


def _check_cladder(H: Subgraph, F: Sequence[GeneralizedLadder], E: frozenset[int]) -> None:
    union: set[int] = set()
    count: dict[int, int] = {}
    for s in F:
        union |= s.edges
        for e in s.edges:
            count[e] = count.get(e, 0) + 1
    if union != H.edges:
        raise PreconditionError("condition (i) fails: the members do not cover the host exactly")
    for i, s in enumerate(F):
        if not (s.edges & E) <= s.rungs:
            raise PreconditionError(f"condition (ii) fails: member {i} has E-edges that are not rungs")
        if len(s.edges & E) < 2 and ladder_flow(s) is None:
            raise PreconditionError(f"condition (ii) fails: invalid member {i} has fewer than two E-rungs")
    for e in E:
        holders = [s for s in F if e in s.rungs]
        if len(holders) < 2:
            raise PreconditionError(f"condition (iii) fails: E-edge {e} is a rung of fewer than two members")
    for e, c in count.items():
        if e not in E and c != 1:
            raise PreconditionError(f"condition (iii) fails: edge {e} lies in {c} members")


def _ladder_components(cay: CayleyGraph, rail_slots: Sequence[int], rung_slot: int) -> list[GeneralizedLadder]:
    rung_edges = frozenset(cay.slot_edges[rung_slot])
    out = []
    for sub, _g in cay.component_cosets(list(rail_slots) + [rung_slot]):
        out.append(GeneralizedLadder(sub, sub.edges & rung_edges))
    return out


def _pair_elements(cay: CayleyGraph, slots: Sequence[int]) -> list[int]:
    G = cay.group
    if len(slots) == 1:
        x = cay.slots[slots[0]].element
        return [x, G.inv(x)]
    if len(slots) == 2 and all(cay.slots[s].involution for s in slots):
        return [cay.slots[s].element for s in slots]
    raise PreconditionError("a pair is one non-involution slot or two involution slots")


def two_ladder_on(cay: CayleyGraph, u_slots: Sequence[int], v_slots: Sequence[int], z_slot: int) -> FlowAssignment:
    """Two-ladder construction on an existing Cayley graph, by slot indices."""
    G = cay.group
    z = cay.slots[z_slot].element
    if not cay.slots[z_slot].involution:
        raise PreconditionError("rung slot is not an involution")
    used = list(u_slots) + list(v_slots) + [z_slot]
    if len(set(used)) != len(used):
        raise PreconditionError("pairs and rung must use distinct slots")
    for tag, ps in (("U", u_slots), ("V", v_slots)):
        kind = ladder_with_rung(G, _pair_elements(cay, ps), z)
        if kind is None:
            raise PreconditionError(f"pair {tag} with {z} is not a closed ladder with rung involution {z}")
    F = _ladder_components(cay, u_slots, z_slot) + _ladder_components(cay, v_slots, z_slot)
    Y = cay.sub(used)
    f = cladder_compose(Y, F, cay.slot_edges[z_slot])
    if cay.connection.cardinality % 2 == 0:
        raise PreconditionError("two-ladder construction expects odd valency")
    return extend_odd_regular(cay.whole(), Y, f)


def two_ladder_3flow(G: FiniteGroup, X: ConnectionMultiset, pairU: Sequence[int], pairV: Sequence[int], z: int) -> FlowAssignment:
    """Nowhere-zero 3-flow on ``Cay(G, X)`` from two ladders sharing rung involution ``z``."""
    cay = build_cayley(G, X)
    zs = cay.choose_slots([z])
    us = cay.choose_slots(list(pairU), zs)
    vs = cay.choose_slots(list(pairV), zs + us)
    return two_ladder_on(cay, us, vs, zs[0])
