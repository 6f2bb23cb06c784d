"""Independent existence oracle for nowhere-zero Z3-flows, and Z3 -> integer lifting.

The oracle fixes a spanning forest, enumerates the values {1, 2} on the
co-tree edges and reads off every tree value from the fundamental cycles.
It refuses (rather than guesses) when the cycle rank exceeds its cap.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .errors import FlowError, InternalAssertion, OracleRefusal
from .flows import FlowAssignment, MultiGraph, Subgraph, _as_sub, verify_flow

__all__ = ["Z3Flow", "DEFAULT_RANK_CAP", "cycle_rank", "z3_oracle", "verify_z3", "z3_to_integer"]

DEFAULT_RANK_CAP = 22
_CHUNK = 1 << 16


@dataclass
class Z3Flow:
    """``eid -> (tail, head, residue)`` with residues in {1, 2}."""

    arcs: dict[int, tuple[int, int, int]]

    def to_json(self) -> list[dict]:
        return [{"edge_id": e, "tail": t, "head": h, "residue": r} for e, (t, h, r) in sorted(self.arcs.items())]


def _forest(s: Subgraph) -> tuple[dict[int, tuple[int, int]], list[int], dict[int, int]]:
    """BFS spanning forest: ``parent[v] = (parent vertex, edge)``, co-tree edges, depth."""
    host = s.host
    parent: dict[int, tuple[int, int]] = {}
    depth: dict[int, int] = {}
    tree: set[int] = set()
    for root in sorted(s.vertices):
        if root in depth:
            continue
        depth[root] = 0
        q = deque([root])
        while q:
            v = q.popleft()
            for e in s.incidence.get(v, ()):
                w = host.other(e, v)
                if w not in depth:
                    depth[w] = depth[v] + 1
                    parent[w] = (v, e)
                    tree.add(e)
                    q.append(w)
    cotree = sorted(s.edges - tree)
    return parent, cotree, depth


def cycle_rank(g: MultiGraph | Subgraph) -> int:
    s = _as_sub(g)
    return len(_forest(s)[1])


def _tree_path(parent, depth, a: int, b: int) -> list[tuple[int, int, int]]:
    """Edges on the forest path from ``a`` to ``b`` as ``(edge, from, to)``."""
    up_a, up_b = [], []
    while depth[a] > depth[b]:
        p, e = parent[a]
        up_a.append((e, a, p))
        a = p
    while depth[b] > depth[a]:
        p, e = parent[b]
        up_b.append((e, p, b))
        b = p
    while a != b:
        pa, ea = parent[a]
        pb, eb = parent[b]
        up_a.append((ea, a, pa))
        up_b.append((eb, pb, b))
        a, b = pa, pb
    return up_a + up_b[::-1]


def z3_oracle(g: MultiGraph | Subgraph, rank_cap: int = DEFAULT_RANK_CAP) -> Z3Flow | None:
    """Return a nowhere-zero Z3-flow, or ``None`` if none exists."""
    s = _as_sub(g)
    host = s.host
    parent, cotree, depth = _forest(s)
    r = len(cotree)
    if r > rank_cap:
        raise OracleRefusal(f"cycle rank {r} exceeds the cap {rank_cap}")
    tree = sorted(s.edges - set(cotree))
    tindex = {e: i for i, e in enumerate(tree)}
    # M[t, c]: coefficient of co-tree value c on tree edge t (host orientation)
    M = np.zeros((len(tree), r), dtype=np.int64)
    for j, c in enumerate(cotree):
        u, v = host.edges[c]
        for e, a, b in _tree_path(parent, depth, v, u):
            M[tindex[e], j] += 1 if host.edges[e] == (a, b) else -1
    if not tree:
        if r == 0:
            return Z3Flow({})
    witness = None
    total = 1 << r
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(total, start + _CHUNK), dtype=np.int64)
        bits = (idx[:, None] >> np.arange(r, dtype=np.int64)[None, :]) & 1
        vals = 1 + bits
        tv = (vals @ M.T) % 3
        ok = np.all(tv != 0, axis=1)
        hit = np.flatnonzero(ok)
        if hit.size:
            witness = vals[hit[0]]
            break
    if witness is None:
        return None
    values = {c: int(witness[j]) for j, c in enumerate(cotree)}
    tv = (M @ witness) % 3 if tree else []
    for e in tree:
        values[e] = int(tv[tindex[e]])
    z = Z3Flow({e: (*host.edges[e], values[e]) for e in sorted(values)})
    if not verify_z3(s, z):
        raise InternalAssertion("oracle witness fails verification")
    return z


def verify_z3(g: MultiGraph | Subgraph, z: Z3Flow) -> bool:
    s = _as_sub(g)
    if set(z.arcs) != set(s.edges):
        raise FlowError("Z3 flow does not cover the graph")
    net: dict[int, int] = {}
    for e, (t, h, x) in z.arcs.items():
        if {t, h} != set(s.host.edges[e]):
            raise FlowError(f"arc {e} does not match its edge")
        if x % 3 == 0:
            return False
        net[t] = net.get(t, 0) + x
        net[h] = net.get(h, 0) - x
    return all(v % 3 == 0 for v in net.values())


def z3_to_integer(g: MultiGraph | Subgraph, z: Z3Flow) -> FlowAssignment:
    """Lift a nowhere-zero Z3-flow to a nowhere-zero integer 3-flow with the same residues.

    Start from value 1 on every arc oriented to residue 1; each vertex then has
    excess divisible by 3. Repeatedly push 3 units along a residual path from a
    vertex of positive excess to one of negative excess, flipping arc values
    between 1 and -2. Such a path always exists by a cut argument.
    """
    s = _as_sub(g)
    if not verify_z3(s, z):
        raise FlowError("input is not a nowhere-zero Z3-flow")
    as_int = FlowAssignment({e: (t, h, r) for e, (t, h, r) in z.arcs.items()})
    if verify_flow(s, as_int, 3).ok:
        return as_int
    arcs: dict[int, list[int]] = {}
    for e, (t, h, r) in z.arcs.items():
        arcs[e] = [t, h, 1] if r % 3 == 1 else [h, t, 1]
    excess: dict[int, int] = {v: 0 for v in s.vertices}
    for t, h, x in arcs.values():
        excess[t] += x
        excess[h] -= x
    inc = s.incidence
    while True:
        sources = sorted(v for v, x in excess.items() if x > 0)
        if not sources:
            break
        src = sources[0]
        prev: dict[int, tuple[int, int]] = {src: (-1, -1)}
        q = deque([src])
        sink = None
        while q and sink is None:
            v = q.popleft()
            for e in inc.get(v, ()):
                t, h, x = arcs[e]
                # value 1 lets excess move tail -> head, value -2 lets it move head -> tail
                if x == 1 and t == v:
                    w = h
                elif x == -2 and h == v:
                    w = t
                else:
                    continue
                if w not in prev:
                    prev[w] = (v, e)
                    if excess[w] < 0:
                        sink = w
                        break
                    q.append(w)
        if sink is None:
            raise InternalAssertion("no residual path while lifting a Z3-flow")
        w = sink
        while w != src:
            v, e = prev[w]
            arcs[e][2] = -2 if arcs[e][2] == 1 else 1
            w = v
        excess[src] -= 3
        excess[sink] += 3
    out = FlowAssignment({e: tuple(a) for e, a in arcs.items()})
    rep = verify_flow(s, out, 3)
    if not rep.ok:
        raise InternalAssertion(f"lifted flow is invalid: {rep.violations[:3]}")
    return out
