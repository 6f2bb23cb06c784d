import json
from collections import Counter

import networkx as nx
import pytest

from nzflow.cayley import ConnectionMultiset, build_cayley
from nzflow.catalog import extended_catalog
from nzflow.errors import DisconnectedError, HypothesisError, PreconditionError
from nzflow.flows import verify_flow
from nzflow.groups import (
    alternating4,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    semidirect_product,
    symmetric4,
)
from nzflow.synth import (
    central_involution_3flow,
    hypothesis_report,
    index_construction,
    subcase52_construction,
    synthesize,
)
from nzflow.synth import index_construction_on, index_pieces


def metacyclic(p, m, k):
    """``Z_p : Z_m`` with the generator of ``Z_m`` acting as ``x -> kx``."""
    return semidirect_product(cyclic(p), cyclic(m), [(k * i) % p for i in range(p)])


def run(G, xs):
    cert = synthesize(G, ConnectionMultiset.of(G, xs))
    assert verify_flow(cert.cayley.graph, cert.flow, 3).ok
    return cert


def test_even_valency_c5():
    cert = run(cyclic(5), [1, 4, 2, 3])
    assert cert.trace.step == "even_valency"
    assert verify_flow(cert.cayley.graph, cert.flow, 2).ok


def test_d5_routed():
    cert = run(dihedral(5), [1, 4, 2, 3, 5])
    assert cert.trace.step != "even_valency"


def test_q8_central_route():
    Q8 = dicyclic(2)
    cert = run(Q8, [1, 3, 4, 6, 2])
    # -1 generates the minimal normal subgroup, so the route is labelled by that fact
    assert cert.trace.step in ("central_involution", "minimal_normal_involution")
    assert cert.trace.data["z"] == 2


# (group, X, step that must appear in the trace)
ROUTES = [
    (lambda: cyclic(2), [1] * 5, "central_involution"),
    (lambda: dihedral(3), [1, 1, 2, 2, 3], "dihedral_2p"),
    (lambda: dihedral(3), [1, 2, 3, 3, 3], "three_involutions"),
    (lambda: dihedral(3), [3, 3, 3, 3, 4], "quotient_by_minimal_normal"),
    (lambda: dihedral(4), [1, 2, 2, 3, 4], "minimal_normal_involution"),
    (lambda: dihedral(6), [1, 2, 4, 5, 8], "cyclic_pair_bipartite"),
    (lambda: dihedral(15), [4, 5, 10, 11, 27], "second_minimal_normal"),
    (lambda: metacyclic(3, 10, 2), [1, 2, 7, 15, 26], "cyclic_pair_quotient"),
    (lambda: metacyclic(3, 6, 2), [1, 2, 7, 9, 14], "cyclic_pair_final"),
    (lambda: metacyclic(5, 4, 2), [1, 4, 5, 11, 15], "cyclic_pair_final"),
    (lambda: metacyclic(3, 6, 2), [1, 2, 3, 9, 15], "cyclic_pair_odd_c"),
    (lambda: metacyclic(3, 6, 2), [1, 2, 6, 9, 12], "cyclic_pair_two_ladders"),
]


@pytest.mark.parametrize("make,xs,step", ROUTES, ids=[r[2] for r in ROUTES])
def test_route(make, xs, step):
    cert = run(make(), xs)
    assert step in cert.trace.steps()


def test_final_branch_records_shared_rungs():
    cert = run(metacyclic(3, 6, 2), [1, 2, 7, 9, 14])
    node = next(n for n in cert.trace.walk() if n.step == "cyclic_pair_final")
    assert node.data["shared_rungs"]


def test_central_involution_examples():
    V = direct_product(cyclic(2), direct_product(cyclic(2), cyclic(2)))
    X = ConnectionMultiset.of(V, [1, 2, 3, 4, 5])
    assert verify_flow(build_cayley(V, X).graph, central_involution_3flow(V, X, 1), 3).ok
    C6 = cyclic(6)
    X = ConnectionMultiset.of(C6, [1, 5, 2, 4, 3])
    assert verify_flow(build_cayley(C6, X).graph, central_involution_3flow(C6, X, 3), 3).ok


def test_order_two_five_parallel_edges():
    Z2 = cyclic(2)
    X = ConnectionMultiset.of(Z2, [1] * 5)
    g = build_cayley(Z2, X).graph
    f = central_involution_3flow(Z2, X, 1)
    assert verify_flow(g, f, 3).ok
    # hand check: all five edges join the same two vertices, so conservation is a zero sum
    vals = list(f.values_on(g).values())
    assert sum(vals) == 0 and len(vals) == 5 and all(0 < abs(x) < 3 for x in vals)


def test_subcase52_nilpotent_and_bipartite():
    G = direct_product(cyclic(4), cyclic(3))
    X = ConnectionMultiset.of(G, [3, 9, 6, 1, 2])
    f = subcase52_construction(G, X, 3, 6, 1)
    assert verify_flow(build_cayley(G, X).graph, f, 3).ok
    D6 = dihedral(6)
    X = ConnectionMultiset.of(D6, [1, 5, 6, 2, 4])
    f = subcase52_construction(D6, X, 1, 6, 2)
    assert verify_flow(build_cayley(D6, X).graph, f, 3).ok


def test_index_even_bipartite():
    # Z4 x Z2 x Z2, b = (1,0,0), z = (0,1,0), U = {(0,0,1), (0,1,1)}
    G = direct_product(cyclic(4), direct_product(cyclic(2), cyclic(2)))
    X = ConnectionMultiset.of(G, [1, 3, 4, 12, 2])
    cay = build_cayley(G, X)
    zs = cay.choose_slots([2])
    bs = cay.choose_slots([4, 12], zs)
    us = cay.choose_slots([1, 3], zs + bs)
    f, node = index_construction_on(cay, us, bs[0], zs[0])
    assert node.step == "index_even_bipartite" and verify_flow(cay.graph, f, 3).ok


def test_index_odd_composite():
    # D9 x Z4 with u the Z4 generator, b = r of order 9, z = s
    G = direct_product(dihedral(9), cyclic(4))
    u, r, s = 1, 4, 36
    X = ConnectionMultiset.of(G, [u, G.inv(u), r, G.inv(r), s])
    cay = build_cayley(G, X)
    zs = cay.choose_slots([s])
    bs = cay.choose_slots([r, G.inv(r)], zs)
    us = cay.choose_slots([u, G.inv(u)], zs + bs)
    f, node = index_construction_on(cay, us, bs[0], zs[0])
    assert node.step == "index_odd_composite" and verify_flow(cay.graph, f, 3).ok


def d7z4():
    G = direct_product(dihedral(7), cyclic(4))
    u, r, s = 1, 4, 28
    X = ConnectionMultiset.of(G, [u, G.inv(u), r, G.inv(r), s])
    cay = build_cayley(G, X)
    zs = cay.choose_slots([s])
    bs = cay.choose_slots([r, G.inv(r)], zs)
    us = cay.choose_slots([u, G.inv(u)], zs + bs)
    return G, cay, us, bs[0], zs[0], r, s


@pytest.mark.parametrize("j", range(7))
def test_index_prime_over_transversals(j):
    G, cay, us, bs, zs, r, s = d7z4()
    T = [G.identity, G.mul(s, G.power(r, j))] if j else None
    f, node = index_construction_on(cay, us, bs, zs, T)
    assert node.step == "index_prime" and verify_flow(cay.graph, f, 3).ok


def test_index_construction_wrapper():
    G, cay, us, bs, zs, r, s = d7z4()
    f = index_construction(G, cay.connection, [1, G.inv(1)], r, s)
    assert verify_flow(cay.graph, f, 3).ok


def piece_shape(j):
    G, cay, us, bs, zs, r, s = d7z4()
    p = index_pieces(cay, us, bs, zs, [G.identity, G.mul(s, G.power(r, j))])
    lam = set(p.lam.values())
    g = next(iter(p.lambda_pieces))
    sub = p.lambda_pieces[g]
    h = nx.MultiGraph()
    h.add_edges_from(cay.graph.edges[e] for e in sub.edges)
    return lam, h


def test_lambda_five_piece_is_l7():
    lam, h = piece_shape(2)
    assert lam == {5}
    ref = nx.ladder_graph(7)
    assert nx.is_isomorphic(h, nx.MultiGraph(ref))


def test_lambda_six_piece_has_unique_rung():
    lam, h = piece_shape(1)
    assert lam == {6}
    assert sum(1 for _, d in h.degree() if d == 3) == 2


def test_index_preconditions_named():
    G = cyclic(12)
    X = ConnectionMultiset.of(G, [3, 9, 1, 11, 6])
    with pytest.raises(PreconditionError):
        index_construction(G, X, [3, 9], 1, 6)


def test_hypothesis_report():
    assert hypothesis_report(dihedral(5)).applicable
    assert hypothesis_report(cyclic(8)).nilpotent
    assert not hypothesis_report(alternating4()).applicable
    assert not hypothesis_report(symmetric4()).supersolvable


def test_errors():
    G = cyclic(6)
    with pytest.raises(DisconnectedError):
        synthesize(G, ConnectionMultiset.of(G, [2, 4, 2, 4]))
    with pytest.raises(HypothesisError):
        synthesize(G, ConnectionMultiset.of(G, [1, 5, 3]))
    A4 = alternating4()
    invs = [g for g in range(A4.order) if A4.orders[g] == 2]
    threes = [g for g in range(A4.order) if A4.orders[g] == 3]
    t = threes[0]
    with pytest.raises(HypothesisError):
        synthesize(A4, ConnectionMultiset.of(A4, [t, A4.inv(t), *invs[:3]]))


def test_certificate_deterministic_and_serializable():
    G = metacyclic(3, 6, 2)
    X = ConnectionMultiset.of(G, [1, 2, 7, 9, 14])
    a, b = synthesize(G, X).dumps(), synthesize(G, X).dumps()
    assert a == b
    doc = json.loads(a)
    assert set(doc) >= {"flow", "trace", "graph"} and "rule" in doc["trace"]


def test_extended_catalog_smoke():
    names = Counter(e.name for e in extended_catalog())
    assert {"D15", "Z3:Z6", "Z5:Z4", "D7xZ4"} <= set(names)
