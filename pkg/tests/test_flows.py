import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import random_cubic_bipartite, random_glue_case, random_ladder, subdivide
from nzflow.cayley import ConnectionMultiset, build_cayley
from nzflow.errors import FlowError, PreconditionError
from nzflow.flows import (
    FlowAssignment,
    MultiGraph,
    Subgraph,
    cubic_bipartite_3flow,
    even_2_flow,
    extend_odd_regular,
    glue,
    reorient,
    subcubic_3flow,
    suppress,
    transfer_across_subdivision,
    verify_flow,
)
from nzflow.groups import cyclic
from nzflow.ladders import LadderKind, build_ladder, ladder_flow
from nzflow.oracle import z3_oracle


def triangle(values=(1, 1, 1)):
    g = MultiGraph(3, [(0, 1), (1, 2), (2, 0)])
    return g, FlowAssignment.from_values(g, dict(enumerate(values)))


def test_verify_cyclic_triangle_is_2flow():
    g, f = triangle()
    assert verify_flow(g, f, 2).ok


def test_verify_zero_edge_is_violation():
    g, f = triangle((1, 0, 1))
    rep = verify_flow(g, f, 3)
    assert not rep.ok and any("zero" in v for v in rep.violations)


def test_verify_single_edge_violates_conservation_twice():
    g = MultiGraph(2, [(0, 1)])
    rep = verify_flow(g, FlowAssignment.from_values(g, {0: 1}), 3)
    assert not rep.ok and sum("vertex" in v for v in rep.violations) == 2


def test_verify_rejects_mismatched_cover():
    g, f = triangle()
    with pytest.raises(FlowError):
        verify_flow(g, f.restrict([0, 1]), 3)


def test_reorient():
    g, f = triangle((1, 1, 1))
    assert reorient(f, {0: (0, 1), 1: (1, 2), 2: (2, 0)}) == f
    r = reorient(f, {0: (1, 0), 1: (1, 2), 2: (2, 0)})
    assert r[0] == (1, 0, -1) and verify_flow(g, r, 3).ok
    rr = reorient(f, {0: (1, 0), 1: (2, 1), 2: (0, 2)})
    assert [rr[e][2] for e in range(3)] == [-1, -1, -1] and verify_flow(g, rr, 3).ok


def test_glue_disjoint_triangles():
    g = MultiGraph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    s1, s2 = g.sub([0, 1, 2]), g.sub([3, 4, 5])
    f1 = FlowAssignment.from_values(g, {0: 1, 1: 1, 2: 1})
    f2 = FlowAssignment.from_values(g, {3: 1, 4: 1, 5: 1})
    f = glue(g, s1, f1, s2, f2)
    assert all(f[e][2] == 1 for e in range(6))


def two_triangles():
    # triangles 0-1-2 and 0-1-3 sharing edge 0 = (0, 1)
    return MultiGraph(4, [(0, 1), (1, 2), (2, 0), (1, 3), (3, 0)])


def test_glue_two_triangles_agreeing():
    g = two_triangles()
    f1 = FlowAssignment.from_values(g, {0: 1, 1: 1, 2: 1})
    f2 = FlowAssignment.from_values(g, {0: 1, 3: 1, 4: 1})
    f = glue(g, g.sub([0, 1, 2]), f1, g.sub([0, 3, 4]), f2)
    assert f.values_on(g) == {0: 2, 1: 1, 2: 1, 3: 1, 4: 1}
    assert verify_flow(g, f, 3).ok


def test_glue_two_triangles_reversed():
    g = two_triangles()
    f1 = FlowAssignment.from_values(g, {0: 1, 1: 1, 2: 1})
    f2 = FlowAssignment.from_values(g, {0: -1, 3: -1, 4: -1})
    f = glue(g, g.sub([0, 1, 2]), f1, g.sub([0, 3, 4]), f2)
    assert verify_flow(g, f, 3).ok and f.values_on(g)[0] != 0


def test_glue_rejects_two_shared_edges():
    g = MultiGraph(2, [(0, 1), (0, 1), (0, 1)])
    f = FlowAssignment.from_values(g, {0: 1, 1: -1})
    f2 = FlowAssignment.from_values(g, {1: 1, 0: -1})
    with pytest.raises(PreconditionError):
        glue(g, g.sub([0, 1]), f, g.sub([0, 1]), f2)


def test_even_2_flow_examples():
    c6 = MultiGraph(6, [(i, (i + 1) % 6) for i in range(6)])
    f = even_2_flow(c6)
    assert verify_flow(c6, f, 2).ok and all(abs(x) == 1 for _, _, x in f.values())
    dig = MultiGraph(2, [(0, 1), (0, 1)])
    f = even_2_flow(dig)
    assert sorted(f.values_on(dig).values()) == [-1, 1]
    G = cyclic(5)
    cay = build_cayley(G, ConnectionMultiset.of(G, [1, 4, 2, 3]))
    assert verify_flow(cay.graph, even_2_flow(cay.graph), 2).ok


def test_even_2_flow_rejects_odd_degree():
    with pytest.raises(PreconditionError):
        even_2_flow(MultiGraph(2, [(0, 1)]))


def test_transfer_identity_and_triangle_split():
    g, f = triangle()
    same = transfer_across_subdivision(g, f, g, {e: [e] for e in g.edges})
    assert same == f
    sg, corr = subdivide(g, {1: 2})
    tf = transfer_across_subdivision(g, f, sg, corr)
    assert len(sg.edges) == 4 and verify_flow(sg, tf, 3).ok
    assert all(x == 1 for _, _, x in tf.values())


def test_transfer_cl4_doubled_rails():
    g, lad = build_ladder(LadderKind.Circular(4))
    f = ladder_flow(lad)
    rails = g.whole().edges - lad.rungs
    sg, corr = subdivide(g, {e: 2 for e in rails})
    assert verify_flow(sg, transfer_across_subdivision(g, f, sg, corr), 3).ok


def test_extend_odd_regular_examples():
    G = cyclic(6)
    cay = build_cayley(G, ConnectionMultiset.of(G, [3, 1, 5, 2, 4]))
    slots = cay.choose_slots([3, 1, 5])
    sub = cay.sub(slots)
    fsub = cubic_bipartite_3flow(sub, ([0, 2, 4], [1, 3, 5]))
    f = extend_odd_regular(cay.whole(), sub, fsub)
    assert verify_flow(cay.graph, f, 3).ok
    assert extend_odd_regular(sub, sub, fsub) == fsub


def test_extend_odd_regular_rejects_even_host():
    g, lad = build_ladder(LadderKind.Circular(4))
    for i in range(4):
        g.add_edge(i, (i + 2) % 4 + 4)
    f = ladder_flow(lad)
    with pytest.raises(PreconditionError):
        extend_odd_regular(g.whole(), lad.host, f)


def test_cubic_bipartite_examples():
    theta = MultiGraph(2, [(0, 1)] * 3)
    f = cubic_bipartite_3flow(theta, ([0], [1]))
    assert sorted(f.values_on(theta).values()) == [-2, 1, 1]
    k33 = MultiGraph(6, [(a, b) for a in range(3) for b in range(3, 6)])
    assert verify_flow(k33, cubic_bipartite_3flow(k33, ([0, 1, 2], [3, 4, 5])), 3).ok
    g, lad = build_ladder(LadderKind.Circular(4))
    A = [0, 2, 5, 7]
    B = [1, 3, 4, 6]
    assert verify_flow(g, cubic_bipartite_3flow(g, (A, B)), 3).ok


def test_subcubic_flow_agrees_with_oracle_on_small_graphs():
    rng = random.Random(7)
    for _ in range(60):
        g, lad = random_ladder(rng, 5)
        rails = sorted(g.whole().edges - lad.rungs)
        sg, _ = subdivide(g, {e: rng.randint(1, 3) for e in rails})
        f = subcubic_3flow(sg)
        exists = z3_oracle(sg) is not None
        assert (f is not None) == exists
        if f is not None:
            assert verify_flow(sg, f, 3).ok


def test_suppress_cycle_and_paths():
    c5 = MultiGraph(5, [(i, (i + 1) % 5) for i in range(5)])
    s = suppress(c5)
    assert len(s.cycles) == 1 and not s.core.edges


# property suites


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_glue_property(seed, shared):
    g, s1, f1, s2, f2 = random_glue_case(random.Random(seed), shared)
    f = glue(g, s1, f1, s2, f2)
    assert verify_flow(s1 | s2, f, 3).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6))
def test_cubic_bipartite_property(seed, half):
    g, sub, parts = random_cubic_bipartite(random.Random(seed), half)
    f = cubic_bipartite_3flow(sub, parts)
    assert verify_flow(sub, f, 3).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 6), st.integers(0, 2))
def test_extend_odd_regular_property(seed, half, extra):
    g, sub, parts = random_cubic_bipartite(random.Random(seed), half, 2 * extra)
    f = extend_odd_regular(g.whole(), sub, cubic_bipartite_3flow(sub, parts))
    assert verify_flow(g, f, 3).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_transfer_property(seed):
    rng = random.Random(seed)
    g, lad = random_ladder(rng, 6)
    f = ladder_flow(lad)
    if f is None:
        return
    sg, corr = subdivide(g, {e: rng.randint(1, 4) for e in g.edges})
    assert verify_flow(sg, transfer_across_subdivision(g, f, sg, corr), 3).ok


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_json_round_trip(seed):
    g, s1, f1, s2, f2 = random_glue_case(random.Random(seed), False)
    assert MultiGraph.from_json(g.to_json()).edges == g.edges
    assert FlowAssignment.from_json(f1.to_json()) == f1


def test_subgraph_minus_and_union():
    g, _ = triangle()
    s = g.whole()
    assert s.minus([0]).edges == {1, 2}
    assert (g.sub([0]) | g.sub([1])).edges == {0, 1}
    assert Subgraph(g, frozenset([0])).vertices == {0, 1}
