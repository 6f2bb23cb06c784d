"""Random instance generators shared by the property tests and the acceptance suite."""

import random

from nzflow.flows import FlowAssignment, MultiGraph, Subgraph
from nzflow.ladders import LadderKind, build_ladder


def add_cycle(g, verts, rng, arcs, value=None, through=None):
    """Add a cycle on ``verts`` (new edges) carrying a constant value; optionally close it through an existing edge."""
    x = value if value is not None else rng.choice([1, 2, -1, -2])
    ids = []
    seq = list(verts)
    if through is not None:
        e, (u, v) = through
        seq = [v] + [w for w in seq if w not in (u, v)] + [u]
        for a, b in zip(seq, seq[1:]):
            eid = g.add_edge(a, b)
            arcs[eid] = (a, b, x)
            ids.append(eid)
        return ids, (u, v, x)
    for a, b in zip(seq, seq[1:] + seq[:1]):
        eid = g.add_edge(a, b)
        arcs[eid] = (a, b, x)
        ids.append(eid)
    return ids, None


def random_glue_case(rng: random.Random, shared: bool):
    """Two edge-sets in one host with valid flows, sharing one edge when ``shared``."""
    n = rng.randint(4, 9)
    g = MultiGraph(n)
    a1: dict = {}
    e1 = []
    for _ in range(rng.randint(1, 3)):
        k = rng.randint(2, n)
        ids, _ = add_cycle(g, rng.sample(range(n), k), rng, a1)
        e1 += ids
    a2: dict = {}
    e2 = []
    for i in range(rng.randint(1, 3)):
        k = rng.randint(2, n)
        verts = rng.sample(range(n), k)
        if shared and i == 0:
            e0 = rng.choice(e1)
            ids, arc = add_cycle(g, verts, rng, a2, through=(e0, g.edges[e0]))
            a2[e0] = arc
            e2 += ids + [e0]
        else:
            ids, _ = add_cycle(g, verts, rng, a2)
            e2 += ids
    s1, s2 = Subgraph(g, frozenset(e1)), Subgraph(g, frozenset(e2))
    return g, s1, FlowAssignment(a1), s2, FlowAssignment(a2)


def random_cubic_bipartite(rng: random.Random, half: int, extra_matchings: int = 0):
    """Union of ``3 + extra`` random perfect matchings between ``A = 0..half-1`` and ``B``."""
    g = MultiGraph(2 * half)
    cubic = []
    for m in range(3 + extra_matchings):
        perm = list(range(half))
        rng.shuffle(perm)
        ids = [g.add_edge(a, half + perm[a]) for a in range(half)]
        if m < 3:
            cubic += ids
    A, B = list(range(half)), list(range(half, 2 * half))
    return g, Subgraph(g, frozenset(cubic)), (A, B)


def subdivide(g: MultiGraph, lengths: dict[int, int]):
    """Replace each edge ``e`` by a path of ``lengths.get(e, 1)`` edges."""
    out = MultiGraph(g.vertex_count)
    corr = {}
    for e in sorted(g.edges):
        u, v = g.edges[e]
        k = lengths.get(e, 1)
        prev = u
        path = []
        for _ in range(k - 1):
            w = out.vertex_count
            out.vertex_count += 1
            path.append(out.add_edge(prev, w))
            prev = w
        path.append(out.add_edge(prev, v))
        corr[e] = path
    return out, corr


def random_ladder(rng: random.Random, max_n: int = 6):
    name = rng.choice(["Circular", "Mobius", "Path"])
    n = rng.randint(2, max_n)
    return build_ladder(LadderKind(name, n))
