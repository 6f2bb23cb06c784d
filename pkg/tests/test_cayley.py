import random

import networkx as nx
import pytest

from nzflow.cayley import (
    ConnectionMultiset,
    build_cayley,
    lift_flow,
    quotient_cayley,
    subgroup_components,
    validate_connection,
)
from nzflow.errors import GroupError
from nzflow.flows import even_2_flow, verify_flow
from nzflow.groups import cyclic, dicyclic, dihedral, direct_product, generated_subgroup, is_normal, all_subgroups
from nzflow.ladders import LadderKind, build_ladder
from nzflow.oracle import z3_oracle, z3_to_integer


def to_nx(g):
    h = nx.MultiGraph()
    h.add_nodes_from(range(g.vertex_count))
    h.add_edges_from(g.edges.values())
    return h


def test_validate_connection():
    G = cyclic(5)
    assert validate_connection(G, [(1, 1), (4, 1)]).cardinality == 2
    with pytest.raises(GroupError, match="inverse-multiplicity"):
        validate_connection(G, [(1, 2), (4, 1)])
    with pytest.raises(GroupError, match="identity"):
        validate_connection(G, [(0, 1)])


def test_cayley_c4_is_cycle():
    G = cyclic(4)
    cay = build_cayley(G, ConnectionMultiset.of(G, [1, 3]))
    assert nx.is_isomorphic(to_nx(cay.graph), nx.cycle_graph(4))


def test_klein_aaz_is_cl2():
    G = direct_product(cyclic(2), cyclic(2))
    a, z = 2, 1
    cay = build_cayley(G, ConnectionMultiset.of(G, [a, a, z]))
    ref, _ = build_ladder(LadderKind.Circular(2))
    assert nx.is_isomorphic(to_nx(cay.graph), to_nx(ref))


def test_c6_153_is_m3():
    G = cyclic(6)
    cay = build_cayley(G, ConnectionMultiset.of(G, [1, 5, 3]))
    ref, _ = build_ladder(LadderKind.Mobius(3))
    assert nx.is_isomorphic(to_nx(cay.graph), to_nx(ref))


def test_cayley_edge_multiplicity_matches_definition():
    G = dihedral(4)
    X = ConnectionMultiset.of(G, [1, 3, 1, 3, 4, 2])
    cay = build_cayley(G, X)
    mult = X.counts
    for g in range(G.order):
        for h in range(G.order):
            if g == h:
                continue
            k = sum(1 for u, v in cay.graph.edges.values() if {u, v} == {g, h})
            assert k == mult.get(G.mul(G.inv(g), h), 0)


def test_quotient_d4_by_center():
    G = dihedral(4)
    N = generated_subgroup(G, [2])
    cay = build_cayley(G, ConnectionMultiset.of(G, [1, 3, 4]))
    cov = quotient_cayley(cay, N)
    Q = cov.quotient.group
    assert Q.order == 4
    rN, sN = cov.projection[1], cov.projection[4]
    assert dict(cov.quotient.connection.multiplicity) == {rN: 2, sN: 1}
    z = z3_oracle(cov.quotient.graph)
    fq = z3_to_integer(cov.quotient.graph, z)
    assert verify_flow(cay.graph, lift_flow(cov, fq), 3).ok


def test_quotient_c6_digon_and_lift():
    G = cyclic(6)
    cay = build_cayley(G, ConnectionMultiset.of(G, [1, 5]))
    cov = quotient_cayley(cay, generated_subgroup(G, [2]))
    assert cov.quotient.group.order == 2 and len(cov.quotient.graph.edges) == 2
    f = lift_flow(cov, even_2_flow(cov.quotient.graph), k=2)
    assert verify_flow(cay.graph, f, 2).ok


def test_quotient_trivial_is_isomorphic():
    G = dihedral(3)
    cay = build_cayley(G, ConnectionMultiset.of(G, [1, 2, 3]))
    cov = quotient_cayley(cay, G.trivial())
    assert nx.is_isomorphic(to_nx(cay.graph), to_nx(cov.quotient.graph))


def test_subgroup_components():
    G = cyclic(6)
    comps = subgroup_components(G, ConnectionMultiset.of(G, [2, 4]))
    assert [g for _, g in comps] == [0, 1]
    assert all(len(s.edges) == 3 for s, _ in comps)
    D5 = dihedral(5)
    comps = subgroup_components(D5, ConnectionMultiset.of(D5, [1, 4, 5]))
    assert len(comps) == 1 and comps[0][1] == 0


def test_covering_is_locally_bijective_random():
    rng = random.Random(3)
    groups = [dihedral(6), dicyclic(3), direct_product(cyclic(2), cyclic(4)), cyclic(12)]
    for G in groups:
        normals = [N for N in all_subgroups(G) if 1 < N.order < G.order and is_normal(G, N)]
        for _ in range(10):
            N = rng.choice(normals)
            outside = [x for x in range(1, G.order) if x not in N]
            x = rng.choice(outside)
            X = ConnectionMultiset.of(G, [x, G.inv(x)] if G.inv(x) != x else [x])
            cay = build_cayley(G, X)
            cov = quotient_cayley(cay, N)
            for v in range(G.order):
                imgs = sorted(cov.edge_map[e] for e in cay.graph.incidence[v])
                down = sorted(cov.quotient.graph.incidence[cov.projection[v]])
                assert imgs == down
