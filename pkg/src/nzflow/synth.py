"""Inductive construction of nowhere-zero 3-flows on Cayley graphs of supersolvable groups.

:func:`synthesize` walks the case analysis on ``(G, X)`` and returns a
:class:`Certificate`: the flow together with a trace tree naming each
construction used. No branch falls back to search; a branch whose
preconditions fail raises :class:`InternalAssertion` with a diagnostic.

Trace step ids:

* ``even_valency``: 2-flow from a closed-trail decomposition.
* ``central_involution``: ``X`` holds a central involution ``z``.
* ``minimal_normal_involution``: as above, with ``<z>`` the chosen minimal normal subgroup.
* ``quotient_by_minimal_normal``: at least five generators outside ``N``; recurse on ``G/N``.
* ``dihedral_2p``: one generator outside ``N``; ``|G| = 2p``.
* ``second_minimal_normal``: three generators outside ``N`` and a second minimal normal ``L``.
* ``unique_minimal_normal_large``: ``N`` unique and ``|X| >= 7``.
* ``three_involutions``: ``|X| = 5``, three involutions outside ``N``.
* ``cyclic_pair``: ``|X| = 5``, ``{y, y^-1, z}`` outside ``N``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import permutations
from typing import Any, Sequence

from .cayley import CayleyGraph, ConnectionMultiset, build_cayley, lift_flow, quotient_cayley
from .errors import DisconnectedError, HypothesisError, InternalAssertion, PreconditionError
from .flows import (
    FlowAssignment,
    Subgraph,
    cubic_bipartite_3flow,
    even_2_flow,
    extend_odd_regular,
    glue,
    subcubic_3flow,
    two_coloring,
    union_disjoint,
    verify_flow,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    centralizer,
    derived_subgroup,
    generated_subgroup,
    has_noncyclic_sylow2,
    has_squarefree_derived,
    is_nilpotent,
    is_normal,
    is_supersolvable,
    left_transversal,
    minimal_normal_in,
    prime_factors,
    quotient_group,
)
from .ladders import GeneralizedLadder, classify_cubic, cup_compose, ladder_with_rung, two_ladder_on

__all__ = [
    "HypothesisReport",
    "TraceNode",
    "Certificate",
    "hypothesis_report",
    "synthesize",
    "synthesize_on",
    "central_involution_3flow",
    "index_construction",
    "subcase52_construction",
    "IndexPieces",
]


@dataclass(frozen=True)
class HypothesisReport:
    nilpotent: bool
    supersolvable: bool
    noncyclic_sylow2: bool
    squarefree_derived: bool

    @property
    def applicable(self) -> bool:
        return self.supersolvable and (self.nilpotent or self.noncyclic_sylow2 or self.squarefree_derived)

    def to_json(self) -> dict:
        return {
            "nilpotent": self.nilpotent,
            "supersolvable": self.supersolvable,
            "noncyclic_sylow2": self.noncyclic_sylow2,
            "squarefree_derived": self.squarefree_derived,
            "applicable": self.applicable,
        }


def hypothesis_report(G: FiniteGroup) -> HypothesisReport:
    ss = is_supersolvable(G)
    sq = has_squarefree_derived(G)
    if sq and not ss:
        raise InternalAssertion("square-free derived subgroup but not supersolvable")
    nil = is_nilpotent(G)
    if nil and not ss:
        raise InternalAssertion("nilpotent but not supersolvable")
    return HypothesisReport(nil, ss, has_noncyclic_sylow2(G), sq)


@dataclass
class TraceNode:
    step: str
    rule: str
    data: dict[str, Any] = field(default_factory=dict)
    children: list["TraceNode"] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"step": self.step, "rule": self.rule, "data": self.data, "children": [c.to_json() for c in self.children]}

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()

    def steps(self) -> list[str]:
        return [n.step for n in self.walk()]


@dataclass
class Certificate:
    flow: FlowAssignment
    trace: TraceNode
    cayley: CayleyGraph = field(repr=False)

    def to_json(self) -> dict:
        G, X = self.cayley.group, self.cayley.connection
        return {
            "group": {"name": G.name, "order": G.order},
            "connection": X.to_json(),
            "graph": self.cayley.graph.to_json(),
            "flow": self.flow.to_json(),
            "trace": self.trace.to_json(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise InternalAssertion(msg)


def _checked(sub, f: FlowAssignment, what: str) -> FlowAssignment:
    rep = verify_flow(sub, f, 3)
    _require(rep.ok, f"{what}: invalid flow {rep.violations[:3]}")
    return f


def _ms(cay: CayleyGraph, slots: Sequence[int]) -> list[int]:
    return cay.slot_multiset(slots).elements() if slots else []


def _slots_where(cay: CayleyGraph, pred) -> list[int]:
    return [i for i, s in enumerate(cay.slots) if pred(s.element)]


def _is_central(G: FiniteGroup, z: int) -> bool:
    return all(G.mul(z, g) == G.mul(g, z) for g in range(G.order))


# ---------------------------------------------------------------- entry points


def synthesize(G: FiniteGroup, X: ConnectionMultiset) -> Certificate:
    """Verified nowhere-zero 3-flow on ``Cay(G, X)`` with its derivation trace."""
    return synthesize_on(build_cayley(G, X))


def synthesize_on(cay: CayleyGraph) -> Certificate:
    if not cay.is_connected():
        raise DisconnectedError("connection multiset does not generate the group")
    if cay.connection.cardinality < 4:
        raise HypothesisError(f"valency {cay.connection.cardinality} < 4")
    rep = hypothesis_report(cay.group)
    if not rep.applicable:
        raise HypothesisError(f"group hypotheses fail: {rep.to_json()}")
    f, node = _synth(cay, rep)
    _checked(cay.whole(), f, "synthesize")
    return Certificate(f, node, cay)


def _synth(cay: CayleyGraph, rep: HypothesisReport) -> tuple[FlowAssignment, TraceNode]:
    G = cay.group
    X = cay.connection
    k = X.cardinality
    base = {"order": G.order, "valency": k}
    if k % 2 == 0:
        return even_2_flow(cay.whole()), TraceNode("even_valency", "closed-trail 2-flow", base)
    N = None
    if not G.is_abelian:
        mins = minimal_normal_in(G, derived_subgroup(G))
        _require(bool(mins), "nonabelian group without a minimal normal subgroup in G'")
        N = mins[0]
        _require(N.order in prime_factors(G.order) and len(prime_factors(N.order)) == 1, "minimal normal subgroup is not of prime order")
    central = [x for x in X.support if G.orders[x] == 2 and _is_central(G, x)]
    if central:
        if N is not None and N.order == 2 and N.elements[1] in central:
            z, step = N.elements[1], "minimal_normal_involution"
        else:
            z, step = central[0], "central_involution"
        f, node = central_involution_3flow_on(cay, z)
        node.step = step
        node.data.update(base)
        return f, node
    _require(N is not None, "abelian group with odd valency and no central involution")
    Y = _slots_where(cay, lambda x: x not in N)
    W = _slots_where(cay, lambda x: x in N)
    ny = len(_ms(cay, Y))
    data = dict(base, N=list(N.elements), Y=_ms(cay, Y), W=_ms(cay, W))
    _require(ny % 2 == 1, "even number of generators outside N without a central involution")
    if ny >= 5:
        return _quotient_case(cay, rep, N, Y, "quotient_by_minimal_normal", data)
    if ny == 1:
        return _dihedral_2p(cay, N, Y, W, data)
    others = [L for L in minimal_normal_in(G, derived_subgroup(G)) if L != N]
    if others:
        return _second_minimal_normal(cay, rep, others[0], Y, W, data)
    if k >= 7:
        return _unique_minimal_large(cay, N, Y, W, data)
    _require(N.order != 2, "p = 2 with |X| = 5 should have a central involution")
    ys = _ms(cay, Y)
    if all(G.orders[y] == 2 for y in ys):
        return _three_involutions(cay, N, Y, W, data)
    return _cyclic_pair(cay, rep, N, Y, W, data)


def _transfer_check(G: FiniteGroup, rep: HypothesisReport, N: Subgroup, Q: FiniteGroup, in_derived: bool) -> HypothesisReport:
    qrep = hypothesis_report(Q)
    _require(qrep.supersolvable, "quotient is not supersolvable")
    if rep.nilpotent:
        _require(qrep.nilpotent, "quotient of a nilpotent group is not nilpotent")
    if rep.squarefree_derived:
        _require(qrep.squarefree_derived, "quotient lost the square-free derived subgroup")
    if rep.noncyclic_sylow2 and rep.supersolvable and in_derived:
        _require(qrep.noncyclic_sylow2, "quotient by a subgroup of G' has a cyclic Sylow 2-subgroup")
    _require(qrep.applicable, "hypotheses do not pass to the quotient")
    return qrep


def _quotient_case(cay, rep, N, Y, step, data) -> tuple[FlowAssignment, TraceNode]:
    G = cay.group
    cov = quotient_cayley(cay, N, Y)
    Q = cov.quotient.group
    _require(Q.order < G.order, "recursion does not decrease the group order")
    in_derived = set(N.elements) <= set(derived_subgroup(G).elements)
    qrep = _transfer_check(G, rep, N, Q, in_derived)
    _require(cov.quotient.is_connected(), "quotient Cayley graph is disconnected")
    fq, child = _synth(cov.quotient, qrep)
    f = lift_flow(cov, fq)
    ysub = cay.sub(Y)
    f = extend_odd_regular(cay.whole(), ysub, f)
    node = TraceNode(step, "quotient lift then odd-regular extension", dict(data, quotient_order=Q.order), [child])
    return f, node


def _nonInvolutionPairs(cay: CayleyGraph, slots: Sequence[int]) -> list[list[int]]:
    return [[s] for s in slots if not cay.slots[s].involution]


def _dihedral_2p(cay, N, Y, W, data):
    G = cay.group
    _require(G.order == 2 * N.order, "single generator outside N but |G| != 2p")
    pairs = _nonInvolutionPairs(cay, W)
    _require(len(pairs) >= 2, "fewer than two inverse pairs inside N")
    (zs,) = Y
    f = two_ladder_on(cay, pairs[0], pairs[1], zs)
    return f, TraceNode("dihedral_2p", "two ladders with rung y", dict(data, z=cay.slots[zs].element))


def _second_minimal_normal(cay, rep, L, Y, W, data):
    G = cay.group
    data = dict(data, L=list(L.elements))
    if not any(x in L for x in cay.connection.support):
        node_f, node = _quotient_case(cay, rep, L, list(range(len(cay.slots))), "second_minimal_normal", data)
        node.rule = "quotient by the second minimal normal subgroup"
        return node_f, node
    cls = classify_cubic(G, cay.slot_multiset(Y))
    _require(cls is not None, "cubic part outside N is not recognised as a closed ladder")
    z = cls.z
    zs = [s for s in Y if cay.slots[s].element == z and cay.slots[s].involution][-1]
    us = [s for s in Y if s != zs]
    pairs = _nonInvolutionPairs(cay, W)
    _require(bool(pairs), "no inverse pair inside N")
    f = two_ladder_on(cay, us, pairs[0], zs)
    node = TraceNode("second_minimal_normal", "two ladders with rung from the cubic classifier", dict(data, z=z, ladder=str(cls.kind)))
    return f, node


def _unique_minimal_large(cay, N, Y, W, data):
    pairs = _nonInvolutionPairs(cay, W)
    _require(len(pairs) >= 2, "fewer than two inverse pairs inside N")
    G = cay.group
    for zs in Y:
        if not cay.slots[zs].involution:
            continue
        z = cay.slots[zs].element
        if all(ladder_with_rung(G, cay.slot_multiset(p).elements(), z) for p in pairs[:2]):
            f = two_ladder_on(cay, pairs[0], pairs[1], zs)
            return f, TraceNode("unique_minimal_normal_large", "two ladders inside N with rung z", dict(data, z=z))
    raise InternalAssertion("no rung involution in Y makes ladders with the pairs in N")


def _three_involutions(cay, N, Y, W, data):
    G = cay.group
    cub = cay.sub(Y)
    col = two_coloring(cub)
    if col is not None:
        A = [v for v in range(G.order) if col[v] == 0]
        B = [v for v in range(G.order) if col[v] == 1]
        f = extend_odd_regular(cay.whole(), cub, cubic_bipartite_3flow(cub, (A, B)))
        return f, TraceNode("three_involutions", "bipartite cubic spanning subgraph", dict(data, branch="bipartite"))
    (bs,) = W
    tried = []
    for perm in permutations(Y):
        u_slots, zs = list(perm[:2]), perm[2]
        try:
            _index_preconditions(cay, u_slots, bs, zs)
        except PreconditionError as exc:
            tried.append(str(exc))
            continue
        f, child = index_construction_on(cay, u_slots, bs, zs)
        labels = [cay.slots[s].element for s in perm]
        node = TraceNode("three_involutions", "index construction", dict(data, branch="index", labels=labels), [child])
        return f, node
    raise InternalAssertion(f"no labelling of the three involutions meets the index-construction hypotheses: {tried[:3]}")


def _cyclic_pair(cay, rep, N, Y, W, data):
    G = cay.group
    ys = [s for s in Y if not cay.slots[s].involution]
    zs = [s for s in Y if cay.slots[s].involution]
    _require(len(ys) == 1 and len(zs) == 1, "shape of Y is not {y, y^-1, z}")
    (bs,) = W
    f, child = subcase52_construction_on(cay, ys[0], zs[0], bs, rep)
    return f, TraceNode("cyclic_pair", "order>2 generator with an involution", data, [child])


# ----------------------------------------------------------- central involution


def _good_pair(cay: CayleyGraph, slots: Sequence[int], z: int) -> bool:
    G = cay.group
    try:
        els = cay.slot_multiset(slots).elements()
    except Exception:
        return False
    if len(els) != 2:
        return False
    return ladder_with_rung(G, els, z) is not None


def central_involution_3flow(G: FiniteGroup, X: ConnectionMultiset, z: int) -> FlowAssignment:
    """Nowhere-zero 3-flow when ``X`` contains the central involution ``z``."""
    return central_involution_3flow_on(build_cayley(G, X), z)[0]


def central_involution_3flow_on(cay: CayleyGraph, z: int) -> tuple[FlowAssignment, TraceNode]:
    G = cay.group
    k = cay.connection.cardinality
    if k % 2 == 0 or k < 5:
        raise PreconditionError(f"central involution route needs odd |X| >= 5, got {k}")
    if cay.connection.counts.get(z, 0) == 0 or G.orders[z] != 2 or not _is_central(G, z):
        raise PreconditionError(f"{z} is not a central involution in X")
    z_slots = cay.slots_of(z)
    zs = z_slots[-1]
    rest = [s for s in range(len(cay.slots)) if s != zs]
    singles = [[s] for s in rest if not cay.slots[s].involution]
    inv = [s for s in rest if cay.slots[s].involution]
    doubles = [[a, b] for i, a in enumerate(inv) for b in inv[i + 1 :]]
    cands = [p for p in singles + doubles if _good_pair(cay, p, z)]
    for i, p in enumerate(cands):
        for q in cands[i + 1 :]:
            if not set(p) & set(q):
                f = two_ladder_on(cay, p, q, zs)
                data = {"z": z, "pairs": [_ms(cay, p), _ms(cay, q)]}
                return f, TraceNode("central_involution", "two ladders with central rung z", data)
    # Only one good pair: X holds z twice and another involution y, and
    # Cay(G, {z, z, y}) is a spanning cubic bipartite subgraph.
    ys = [s for s in inv if cay.slots[s].element != z]
    _require(len(z_slots) >= 2 and bool(ys), "no two disjoint ladder pairs and no {z, z, y} fallback")
    y = cay.slots[ys[0]].element
    sub_slots = [z_slots[0], zs, ys[0]]
    cub = cay.sub(sub_slots)
    yz = G.mul(y, z)
    side: dict[int, int] = {}
    for g in range(G.order):
        if g in side:
            continue
        for h, s in ((g, 0), (G.mul(g, yz), 0), (G.mul(g, z), 1), (G.mul(g, y), 1)):
            side[h] = s
    A = [v for v in range(G.order) if side[v] == 0]
    B = [v for v in range(G.order) if side[v] == 1]
    f = extend_odd_regular(cay.whole(), cub, cubic_bipartite_3flow(cub, (A, B)))
    return f, TraceNode("central_involution", "bipartite {z, z, y} spanning subgraph", {"z": z, "y": y})


# ------------------------------------------------------------ index construction


@dataclass
class IndexPieces:
    """Intermediate objects of the prime-order index construction."""

    transversal: list[int]
    mu: dict[int, int]
    lam: dict[int, int]
    T: list[int]
    lambda_pieces: dict[int, Subgraph]
    theta: list[GeneralizedLadder]
    inverting: bool


def _index_preconditions(cay: CayleyGraph, u_slots: Sequence[int], b_slot: int, z_slot: int) -> None:
    G = cay.group
    X = cay.connection
    if X.cardinality != 5 or any(m > 1 for m in X.counts.values()):
        raise PreconditionError("Cayley graph is not simple of valency 5")
    if sorted([*u_slots, b_slot, z_slot]) != list(range(len(cay.slots))):
        raise PreconditionError("U, b, z do not exhaust X")
    if not cay.is_connected():
        raise PreconditionError("Cayley graph is disconnected")
    U = cay.slot_multiset(u_slots).elements()
    if len(U) != 2 or any(G.orders[u] % 2 for u in U):
        raise PreconditionError("U is not two elements of even order")
    z = cay.slots[z_slot].element
    if G.orders[z] != 2:
        raise PreconditionError("z is not an involution")
    b = cay.slots[b_slot].element
    if cay.slots[b_slot].involution:
        raise PreconditionError("b is an involution")
    B = generated_subgroup(G, [b])
    if not is_normal(G, B):
        raise PreconditionError("<b> is not normal")
    if B.order <= 2:
        raise PreconditionError("|<b>| <= 2")
    if set(generated_subgroup(G, U).elements) & set(B.elements) != {G.identity}:
        raise PreconditionError("<U> meets <b> nontrivially")
    if G.order // centralizer(G, B).order > 2:
        raise PreconditionError("centralizer of <b> has index > 2")


def index_construction(
    G: FiniteGroup, X: ConnectionMultiset, U: Sequence[int], b: int, z: int, transversal: Sequence[int] | None = None
) -> FlowAssignment:
    """Nowhere-zero 3-flow on ``Cay(G, U + {b, b^-1, z})`` under the index-2 centralizer hypotheses."""
    cay = build_cayley(G, X)
    zs = cay.choose_slots([z])
    bs = cay.choose_slots([b, G.inv(b)], zs)
    us = cay.choose_slots(list(U), zs + bs)
    return index_construction_on(cay, us, bs[0], zs[0], transversal)[0]


def index_construction_on(
    cay: CayleyGraph, u_slots: Sequence[int], b_slot: int, z_slot: int, transversal: Sequence[int] | None = None
) -> tuple[FlowAssignment, TraceNode]:
    _index_preconditions(cay, u_slots, b_slot, z_slot)
    G = cay.group
    b = cay.slots[b_slot].element
    z = cay.slots[z_slot].element
    B = generated_subgroup(G, [b])
    ob = B.order
    if ob % 2 == 0:
        if z in B:
            _require(_is_central(G, z), "involution of a normal cyclic subgroup is not central")
            f, child = central_involution_3flow_on(cay, z)
            return f, TraceNode("index_even_central", "z in <b>: central involution", {"b": b, "z": z}, [child])
        b2 = set(generated_subgroup(G, [G.mul(b, b)]).elements)
        P = b2 | {G.mul(h, G.mul(b, z)) for h in b2}
        Q = {G.mul(h, z) for h in b2} | {G.mul(h, b) for h in b2}
        BZ = set(generated_subgroup(G, [b, z]).elements)
        _require(not P & Q and P | Q == BZ, "proposed bipartition of <b, z> is not a partition")
        side: dict[int, int] = {}
        for sub, g in cay.component_cosets([b_slot, z_slot]):
            for h in P:
                side[G.mul(g, h)] = 0
            for h in Q:
                side[G.mul(g, h)] = 1
        cub = cay.sub([b_slot, z_slot])
        A = [v for v in range(G.order) if side[v] == 0]
        Bs = [v for v in range(G.order) if side[v] == 1]
        f = extend_odd_regular(cay.whole(), cub, cubic_bipartite_3flow(cub, (A, Bs)))
        return f, TraceNode("index_even_bipartite", "bipartite spanning Cay(G, {b, b^-1, z})", {"b": b, "z": z})
    primes = prime_factors(ob)
    if len(primes) > 1 or ob != primes[0]:
        q = primes[0]
        Nsub = generated_subgroup(G, [G.power(b, ob // q)])
        cov = quotient_cayley(cay, Nsub)
        qc = cov.quotient
        Q, proj = qc.group, cov.projection
        zq = qc.choose_slots([proj[z]])
        bq = qc.choose_slots([proj[b], Q.inv(proj[b])], zq)
        uq = qc.choose_slots([proj[u] for u in cay.slot_multiset(u_slots).elements()], zq + bq)
        try:
            _index_preconditions(qc, uq, bq[0], zq[0])
        except PreconditionError as exc:
            raise InternalAssertion(f"index-construction hypotheses fail in the quotient by <b^{ob // q}>: {exc}") from None
        fq, child = index_construction_on(qc, uq, bq[0], zq[0])
        f = lift_flow(cov, fq)
        return f, TraceNode("index_odd_composite", "quotient by a subgroup of <b>", {"b": b, "order": ob, "quotient_order": Q.order}, [child])
    pieces = index_pieces(cay, u_slots, b_slot, z_slot, transversal)
    host = cay.graph
    lam_sub = None
    f_lam = None
    for g in pieces.T:
        piece = pieces.lambda_pieces[g]
        fp = subcubic_3flow(piece)
        _require(fp is not None, f"pruned ladder at {g} (lambda = {pieces.lam[g]}) has no 3-flow")
        if lam_sub is None:
            lam_sub, f_lam = piece, fp
        else:
            f_lam = union_disjoint(host, f_lam, fp)
            lam_sub = lam_sub | piece
    f = cup_compose(host, lam_sub, f_lam, pieces.theta)
    covered = set(lam_sub.edges).union(*(t.edges for t in pieces.theta))
    _require(covered == set(host.edges), "Sigma and Lambda do not cover the Cayley graph")
    f = _checked(cay.whole(), f, "index construction")
    data = {
        "b": b,
        "z": z,
        "p": ob,
        "transversal": pieces.transversal,
        "lambda": {str(g): pieces.lam[g] for g in pieces.T},
        "inverting": pieces.inverting,
    }
    return f, TraceNode("index_prime", "Sigma/Lambda composition over rungs", data)


def index_pieces(
    cay: CayleyGraph, u_slots: Sequence[int], b_slot: int, z_slot: int, transversal: Sequence[int] | None = None
) -> IndexPieces:
    """Build the ladder family, the map ``mu``, ``lambda`` and the pruned pieces for prime ``|b|``."""
    G = cay.group
    b = cay.slots[b_slot].element
    z = cay.slots[z_slot].element
    p = G.orders[b]
    n = (p - 1) // 2
    U = cay.slot_multiset(u_slots).elements()
    HU = generated_subgroup(G, U)
    UB = generated_subgroup(G, U + [b])
    A = list(transversal) if transversal is not None else left_transversal(G, UB)
    _require(len(A) == G.order // UB.order and len({frozenset(UB.left_coset(a)) for a in A}) == len(A), "not a left transversal of <U, b>")
    bp = [G.power(b, k) for k in range(p)]

    def bedge(v: int, k: int) -> int:
        # the b-edge {v b^k, v b^(k+1)}
        return cay.edge_between(G.mul(v, bp[k % p]), b, [b_slot])

    u_edges = set(e for s in u_slots for e in cay.slot_edges[s])
    theta: list[GeneralizedLadder] = []
    R: set[int] = set()
    for a in A:
        for i in range(n + 1):
            if i == 0:
                verts = {G.mul(a, h) for h in HU.elements}
            else:
                verts = {G.mul(G.mul(a, bp[2 * i - 1]), h) for h in HU.elements} | {
                    G.mul(G.mul(a, bp[2 * i]), h) for h in HU.elements
                }
            es = {e for v in verts for e in cay.graph.incidence[v] if e in u_edges}
            rungs = set()
            if i:
                for h in HU.elements:
                    v = G.mul(G.mul(a, bp[2 * i - 1]), h)
                    w = G.mul(G.mul(a, bp[2 * i]), h)
                    x = G.mul(G.inv(v), w)
                    _require(x in (b, G.inv(b)), "conjugate of b is not b^{+-1}")
                    rungs.add(cay.edge_between(v, x, [b_slot]))
            R |= rungs
            theta.append(GeneralizedLadder(Subgraph(cay.graph, frozenset(es | rungs), frozenset(verts)), frozenset(rungs)))
    S = sorted({G.mul(a, h) for a in A for h in HU.elements})
    _require(len(S) == G.order // p, "A<U> is not a transversal of <b>")
    R2 = {bedge(g, 2 * i - 1) for g in S for i in range(1, n + 1)}
    _require(R == R2, "rung set differs from its transversal description")
    Sset = set(S)
    mu: dict[int, int] = {}
    lam: dict[int, int] = {}
    for g in S:
        gz = G.mul(g, z)
        for j in range(p):
            s = G.mul(gz, G.inv(bp[j]))
            if s in Sset:
                mu[g], lam[g] = s, j
                break
    _require(all(mu[g] != g and mu[mu[g]] == g for g in S), "mu is not a fixed-point-free involution")
    T = [g for g in S if g < mu[g]]
    zbz = G.conj(b, z)
    inverting = zbz == G.inv(b)
    _require(inverting or zbz == b, "z neither centralizes nor inverts b")
    bz_edges = set(cay.slot_edges[b_slot]) | set(cay.slot_edges[z_slot])
    pieces: dict[int, Subgraph] = {}
    for g in T:
        m, L = mu[g], lam[g]
        verts = {G.mul(g, x) for x in bp} | {G.mul(m, x) for x in bp}
        es = {e for v in verts for e in cay.graph.incidence[v] if e in bz_edges}
        if (L % 2 == 1 and L == 1) or (L % 2 == 0 and L == 2 * n):
            removed = {bedge(g, 2 * i - 1) for i in range(1, n + 1)} | {bedge(m, 2 * i - 1) for i in range(1, n + 1)}
        elif L % 2 == 1 and not inverting:
            removed = {bedge(g, 2 * n + 2 - L), bedge(m, 1)}
        elif L % 2 == 1:
            removed = {bedge(g, 1), bedge(m, L - 2)}
        elif not inverting:
            removed = {bedge(g, 1), bedge(m, L + 1)}
        else:
            removed = {bedge(g, 2 * n - 1), bedge(m, L + 1)}
        _require(removed <= es and removed <= R, f"pruned edges at {g} are not rungs of the ladder family")
        pieces[g] = Subgraph(cay.graph, frozenset(es - removed), frozenset(verts))
    return IndexPieces(A, mu, lam, T, pieces, theta, inverting)


# ------------------------------------------------------------- cyclic pair case


def subcase52_construction(G: FiniteGroup, X: ConnectionMultiset, y: int, z: int, b: int) -> FlowAssignment:
    """Nowhere-zero 3-flow on ``Cay(G, {y, y^-1, z, b, b^-1})``."""
    cay = build_cayley(G, X)
    zs = cay.choose_slots([z])
    ys = cay.choose_slots([y, G.inv(y)], zs)
    bs = cay.choose_slots([b, G.inv(b)], zs + ys)
    return subcase52_construction_on(cay, ys[0], zs[0], bs[0], hypothesis_report(G))[0]


def subcase52_construction_on(
    cay: CayleyGraph, y_slot: int, z_slot: int, b_slot: int, rep: HypothesisReport
) -> tuple[FlowAssignment, TraceNode]:
    G = cay.group
    y = cay.slots[y_slot].element
    z = cay.slots[z_slot].element
    b = cay.slots[b_slot].element
    _require(cay.connection.cardinality == 5, "cyclic-pair construction needs |X| = 5")
    _require(G.orders[z] == 2 and G.orders[y] > 2, "shape is not {y, y^-1, z} with y of order > 2")
    D = derived_subgroup(G)
    if rep.noncyclic_sylow2:
        y2 = generated_subgroup(G, [G.mul(y, y)])
        K = generated_subgroup(G, list(y2.elements) + list(D.elements))
        Kyz = {G.mul(k, G.mul(y, z)) for k in K.elements}
        Ky = {G.mul(k, y) for k in K.elements}
        Kz = {G.mul(k, z) for k in K.elements}
        P = set(K.elements) | Kyz
        Q = Ky | Kz
        _require(not P & Q and len(P | Q) == G.order, "proposed bipartition is not a partition")
        cub = cay.sub([y_slot, z_slot])
        f = extend_odd_regular(cay.whole(), cub, cubic_bipartite_3flow(cub, (sorted(P), sorted(Q))))
        return f, TraceNode("cyclic_pair_bipartite", "bipartite spanning Cay(G, {y, y^-1, z})", {"y": y, "z": z})
    if rep.nilpotent:
        _require(_is_central(G, z), "unique involution of a nilpotent group is not central")
        f, child = central_involution_3flow_on(cay, z)
        return f, TraceNode("cyclic_pair_nilpotent", "unique involution is central", {"z": z}, [child])
    B = generated_subgroup(G, [b])
    _require(D == B and G.orders[b] in prime_factors(G.order), "G' is not <b> of prime order")
    c = G.mul(y, z)
    C = generated_subgroup(G, [c])
    twom = C.order
    if twom % 2:
        # yz of odd order forces zG' into <yG'> with zG' an odd power of yG';
        # then <y^2>G' has index 2 and avoids y and z
        K = generated_subgroup(G, [G.mul(y, y), b])
        _require(2 * K.order == G.order and y not in K and z not in K, "yz has odd order but <y^2>G' is not an index-2 subgroup avoiding y, z")
        cub = cay.sub([y_slot, z_slot])
        rest = sorted(set(range(G.order)) - K.members)
        f = extend_odd_regular(cay.whole(), cub, cubic_bipartite_3flow(cub, (list(K.elements), rest)))
        return f, TraceNode("cyclic_pair_odd_c", "yz of odd order: bipartite spanning Cay(G, {y, y^-1, z})", {"y": y, "z": z, "c": c})
    m = twom // 2
    if y in C:
        f = two_ladder_on(cay, [y_slot], [b_slot], z_slot)
        return f, TraceNode("cyclic_pair_two_ladders", "two ladders with rung z", {"y": y, "z": z, "c": c})
    Yg = generated_subgroup(G, [y])
    L = Subgroup(G, tuple(sorted(set(Yg.elements) & set(C.elements))))
    if L.order > 1:
        _require(is_normal(G, L), "<y> meets <yz> in a non-normal subgroup")
        _require(not any(x in L for x in cay.connection.support), "X meets L")
        cov = quotient_cayley(cay, L)
        Q = cov.quotient.group
        _require(Q.order < G.order, "recursion does not decrease the group order")
        qrep = _transfer_check(G, rep, L, Q, set(L.elements) <= set(D.elements))
        fq, child = _synth(cov.quotient, qrep)
        f = lift_flow(cov, fq)
        data = {"y": y, "z": z, "c": c, "L": list(L.elements), "quotient_order": Q.order}
        return f, TraceNode("cyclic_pair_quotient", "quotient by <y> meet <yz>", data, [child])
    # final construction
    cp = [G.power(c, i) for i in range(twom)]
    rest = [a for a in left_transversal(G, Yg, C) if a not in set(cp)]
    A = cp + rest
    _require(len(A) == G.order // Yg.order, "transversal of <y> has the wrong size")
    host = cay.graph
    z_edges = set(cay.slot_edges[z_slot])
    theta = []
    comps = {min(sub.vertices): sub for sub, _ in cay.component_cosets([b_slot, z_slot])}
    seen_reps = set()
    for i in range(m):
        ai = G.inv(A[i])
        sub = next(s for s in comps.values() if ai in s.vertices)
        _require(min(sub.vertices) not in seen_reps, "translates of <b, z> by a_i^-1 are not distinct")
        seen_reps.add(min(sub.vertices))
        theta.append(GeneralizedLadder(sub, frozenset(sub.edges & z_edges)))
    _require(len(seen_reps) == len(comps), "translates do not exhaust Cay(G, {b, b^-1, z})")
    delta_edges = []
    delta_verts = []
    for i in range(twom):
        v = cp[i]
        vy = G.mul(v, y)
        delta_verts += [v, vy]
        delta_edges.append(cay.edge_between(v, y, [y_slot]))
        delta_edges.append(cay.edge_between(vy, z, [z_slot]))
    _require(len(set(delta_verts)) == 2 * twom, "Delta is not a cycle")
    delta = Subgraph(host, frozenset(delta_edges))
    shared_rungs = []
    for i, th in enumerate(theta):
        # Delta meets Theta_i in the rungs at c^(-i) and at c^(m-i); composing over
        # ladders only needs the common edges to be rungs
        common = delta.edges & th.edges
        ai = G.inv(A[i])
        expect = {cay.edge_between(G.mul(ai, G.power(c, k)), z, [z_slot]) for k in (0, m)}
        _require(common == expect and common <= th.rungs, f"Delta meets ladder {i} outside its rungs {{c^-i, c^(m-i)}}")
        shared_rungs.append(len(common))
    f = cup_compose(host, delta, even_2_flow(delta), theta)
    acc = delta
    for t in theta:
        acc = acc | t.host
    y_edges = set(cay.slot_edges[y_slot])
    for j, a in enumerate(A):
        cyc = Subgraph(host, frozenset(e for v in Yg.left_coset(a) for e in host.incidence[v] if e in y_edges))
        common = acc.edges & cyc.edges
        if j < twom:
            _require(common == {cay.edge_between(a, y, [y_slot])}, f"y-cycle {j} meets the glued part in the wrong edges")
        else:
            _require(not common, f"y-cycle {j} meets the glued part in the wrong edges")
        f = glue(host, acc, f, cyc, even_2_flow(cyc))
        acc = acc | cyc
    f = _checked(cay.whole(), f, "cyclic-pair final construction")
    return f, TraceNode("cyclic_pair_final", "alternating cycle with ladders and y-cycles", {"y": y, "z": z, "c": c, "m": m, "shared_rungs": shared_rungs})
