import itertools

import pytest
from hypothesis import given, settings, strategies as st

from nzflow.errors import GroupError
from nzflow.groups import (
    FiniteGroup,
    Subgroup,
    all_subgroups,
    alternating4,
    build_group,
    centralizer,
    cyclic,
    dicyclic,
    dihedral,
    direct_product,
    derived_subgroup,
    element_order,
    generated_subgroup,
    has_noncyclic_sylow2,
    has_squarefree_derived,
    is_nilpotent,
    is_normal,
    is_supersolvable,
    isomorphic,
    left_transversal,
    minimal_normal_in,
    quotient_group,
    semidirect_product,
    symmetric3,
    symmetric4,
)


def brute_commutator_closure(G):
    comms = {G.mul(G.mul(G.inv(x), G.inv(y)), G.mul(x, y)) for x in range(G.order) for y in range(G.order)}
    return set(generated_subgroup(G, comms).elements)


def test_cyclic_one_is_trivial():
    G = cyclic(1)
    assert G.order == 1 and G.mul(0, 0) == 0 and G.trivial() == G.whole()


def test_dihedral3_has_three_reflections_outside_rotations():
    G = dihedral(3)
    rotations = set(generated_subgroup(G, [1]).elements)
    invols = [g for g in range(6) if G.orders[g] == 2]
    assert len(invols) == 3 and not set(invols) & rotations


def test_semidirect_inversion_is_dihedral():
    inv7 = [(-i) % 7 for i in range(7)]
    G = semidirect_product(cyclic(7), cyclic(2), inv7)
    assert G.order == 14 and isomorphic(G, dihedral(7))


def test_table_validation_rejects_nonassociative():
    # a Latin square that is not a group table
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(GroupError):
        FiniteGroup(bad)


def test_build_group_kinds():
    assert build_group({"kind": "cyclic", "n": 6}).order == 6
    assert build_group({"kind": "dihedral", "n": 5}).order == 10
    g = build_group({"kind": "product", "left": {"kind": "cyclic", "n": 2}, "right": {"kind": "cyclic", "n": 3}})
    assert g.order == 6 and g.is_abelian
    with pytest.raises(GroupError):
        build_group({"kind": "free"})


@pytest.mark.parametrize("g,expected", [(0, 1), (5, 2), (1, 5)])
def test_element_orders_dihedral5(g, expected):
    assert element_order(dihedral(5), g) == expected


def test_generated_subgroup_examples():
    D3 = dihedral(3)
    assert generated_subgroup(D3, []).elements == (0,)
    assert generated_subgroup(D3, [1]).order == 3
    assert generated_subgroup(D3, [3, 4]).order == 6


def test_derived_subgroups():
    assert derived_subgroup(cyclic(8)).order == 1
    assert derived_subgroup(symmetric3()).order == 3
    D4 = dihedral(4)
    assert derived_subgroup(D4).elements == (0, 2)
    Q8 = dicyclic(2)
    center = [g for g in range(8) if all(Q8.mul(g, h) == Q8.mul(h, g) for h in range(8))]
    assert list(derived_subgroup(Q8).elements) == center == [0, 2]


@pytest.mark.parametrize("n", range(3, 9))
def test_dihedral_derived_is_rotation_squares(n):
    G = dihedral(n)
    squares = {(2 * k) % n for k in range(n)}
    assert set(derived_subgroup(G).elements) == squares == brute_commutator_closure(G)


def test_normality_and_centralizer():
    D5 = dihedral(5)
    rot = generated_subgroup(D5, [1])
    assert is_normal(D5, D5.whole())
    assert is_normal(D5, rot)
    assert not is_normal(D5, generated_subgroup(D5, [5]))
    assert centralizer(D5, D5.trivial()).order == 10
    assert centralizer(D5, rot) == rot
    assert centralizer(cyclic(6), generated_subgroup(cyclic(6), [2])).order == 6


def test_quotients():
    G = cyclic(6)
    Q, proj = quotient_group(G, G.trivial())
    assert Q.order == 6 and len(set(proj)) == 6
    Q, _ = quotient_group(G, generated_subgroup(G, [2]))
    assert Q.order == 2
    D4 = dihedral(4)
    Q, proj = quotient_group(D4, generated_subgroup(D4, [2]))
    assert Q.order == 4 and all(Q.orders[q] == 2 for q in range(1, 4))
    for a in range(8):
        for b in range(8):
            assert proj[D4.mul(a, b)] == Q.mul(proj[a], proj[b])


def test_minimal_normal_examples():
    assert minimal_normal_in(cyclic(5), cyclic(5).trivial()) == []
    D3 = dihedral(3)
    mins = minimal_normal_in(D3, derived_subgroup(D3))
    assert [m.order for m in mins] == [3]
    V = direct_product(cyclic(2), cyclic(2))
    assert sorted(m.order for m in minimal_normal_in(V, V.whole())) == [2, 2, 2]


def test_minimal_normal_matches_subgroup_lattice():
    for G in (dihedral(6), dicyclic(3), direct_product(cyclic(2), dihedral(3)), alternating4()):
        subs = [H for H in all_subgroups(G) if H.order > 1 and is_normal(G, H)]
        brute = [H for H in subs if not any(K.members < H.members for K in subs)]
        got = minimal_normal_in(G, G.whole())
        assert sorted(h.elements for h in got) == sorted(h.elements for h in brute)


def test_supersolvable_known_answers():
    assert all(is_supersolvable(dihedral(n)) for n in range(3, 9))
    assert is_supersolvable(cyclic(12)) and is_supersolvable(dicyclic(2))
    assert not is_supersolvable(alternating4())
    assert not is_supersolvable(symmetric4())


def test_sylow2_and_squarefree():
    assert not has_noncyclic_sylow2(cyclic(15))
    assert has_noncyclic_sylow2(dihedral(4))
    assert not has_noncyclic_sylow2(cyclic(8))
    assert has_squarefree_derived(cyclic(9))
    assert has_squarefree_derived(dihedral(6))
    assert has_squarefree_derived(dihedral(4))
    assert not has_squarefree_derived(dihedral(9))
    assert is_nilpotent(dicyclic(2)) and not is_nilpotent(dihedral(3))


def test_left_transversal_examples():
    G = cyclic(6)
    assert left_transversal(G, G.whole(), G.trivial()) == [0]
    H3 = generated_subgroup(G, [2])
    assert left_transversal(G, H3, generated_subgroup(G, [3])) == [0, 3]
    D5 = dihedral(5)
    reps = left_transversal(D5, generated_subgroup(D5, [5]), generated_subgroup(D5, [1]))
    assert reps[:5] == [0, 1, 2, 3, 4] and len(reps) == 5


def test_left_transversal_rejects_overlapping_c():
    G = cyclic(6)
    with pytest.raises(GroupError):
        left_transversal(G, generated_subgroup(G, [2]), generated_subgroup(G, [2]))


SMALL = [cyclic(6), dihedral(4), dihedral(5), dicyclic(2), direct_product(cyclic(2), cyclic(4)), alternating4()]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_generated_subgroup_is_closed(G, data):
    S = data.draw(st.lists(st.integers(0, G.order - 1), max_size=3))
    H = generated_subgroup(G, S)
    assert set(S) <= H.members
    assert all(G.mul(a, b) in H for a, b in itertools.product(H.elements, repeat=2))
    assert G.order % H.order == 0


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_transversal_partitions_group(G, data):
    S = data.draw(st.lists(st.integers(0, G.order - 1), max_size=2))
    H = generated_subgroup(G, S)
    reps = left_transversal(G, H)
    cosets = [H.left_coset(a) for a in reps]
    assert sum(len(c) for c in cosets) == G.order
    assert set().union(*cosets) == set(range(G.order))


def test_subgroup_rejects_non_subgroup():
    with pytest.raises(GroupError):
        Subgroup(dihedral(3), (0, 1))
