from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from eqop.grp import (
    FiniteGroup,
    GSet,
    Permutation,
    Subgroup,
    cyclic_group,
    enumerate_subgroups,
    fixed_points_gset,
    group_from_json,
    group_homomorphisms,
    group_to_json,
    is_graph_subgroup,
    left_cosets,
    conjugate,
    orbits,
    product_sigma_op,
    stabilizer,
    symmetric_group,
    trivial_group,
)
from oracles import (
    all_perms,
    compose_images,
    homomorphism_count_from_cyclic,
    invert_images,
    subgroup_masks,
)


def perm(*cycles, n):
    img = list(range(1, n + 1))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b
    return Permutation(tuple(img))


def masks_count(G: FiniteGroup) -> int:
    return len(subgroup_masks([list(r) for r in G.mul], G.identity))


# ---------------------------------------------------------------- groups


def test_symmetric_group_trivial():
    G = symmetric_group(0)
    assert G.order == 1
    assert G.mul[0][0] == 0


def test_symmetric_group_matches_direct_composition():
    G = symmetric_group(3)
    assert G.order == 6
    ps = all_perms(3)
    for i, a in enumerate(ps):
        for j, b in enumerate(ps):
            assert G.element_label(G.mul[i][j]) == G.element_label(
                G.index_of_permutation(Permutation(compose_images(a, b)))
            )


def test_symmetric_group_bound():
    with pytest.raises(ValueError):
        symmetric_group(7)


def test_permutation_inverse_matches_oracle():
    for img in all_perms(4):
        assert Permutation(img).inverse().image == invert_images(img)


@given(st.integers(0, 4), st.data())
def test_permutation_composition_associative(n, data):
    ps = all_perms(n)
    a, b, c = (Permutation(data.draw(st.sampled_from(ps))) for _ in range(3))
    assert (a * b) * c == a * (b * c)


def test_cyclic_group():
    G = cyclic_group(4)
    assert G.order == 4
    assert G.mul[1][3] == 0
    assert G.inv[1] == 3
    assert trivial_group().order == 1


def test_group_json_roundtrip():
    G = product_sigma_op(cyclic_group(2), 2)
    blob = group_to_json(G)
    H = group_from_json(blob)
    assert H.order == G.order and H.mul == G.mul and H.labels == G.labels


# ------------------------------------------------------- product groups


def test_product_sigma_op_arity_one():
    G = product_sigma_op(cyclic_group(2), 1)
    assert G.order == 2
    assert [G.project(x) for x in range(2)] == [0, 1]


def test_product_sigma_op_reverses_permutation_factor():
    G = product_sigma_op(cyclic_group(2), 3)
    a, b = perm((1, 2), n=3), perm((2, 3), n=3)
    x = G.index_of(0, a)
    y = G.index_of(1, b)
    _, sigma = G.part(G.mul[x][y])
    assert sigma == b * a  # second factor composed after the first


def test_product_sigma_op_order_four_has_five_subgroups():
    G = product_sigma_op(cyclic_group(2), 2)
    assert G.order == 4
    assert len(enumerate_subgroups(G)) == 5 == masks_count(G)


def test_root_of_unity_subgroup_lambda():
    # Z/4 with elements 1, i, -1, -i; Lambda is generated by
    # ((1 4)(2 3), e) and ((1 2)(3 4), i) inside Z/4 x Sigma_4^op.
    G = product_sigma_op(cyclic_group(4), 4)
    a = G.index_of(0, perm((1, 4), (2, 3), n=4))
    b = G.index_of(1, perm((1, 2), (3, 4), n=4))
    lam = Subgroup.generated(G, [a, b])
    assert len(lam.members) == 8
    minus_one_id = G.index_of(2, Permutation((1, 2, 3, 4)))
    assert minus_one_id in lam.members
    # the square of the second generator is (-1, id)
    assert G.mul[b][b] == minus_one_id


# -------------------------------------------------- subgroup enumeration


def test_enumerate_subgroups_counts():
    assert len(enumerate_subgroups(trivial_group())) == 1
    assert len(enumerate_subgroups(cyclic_group(4))) == 3
    assert len(enumerate_subgroups(symmetric_group(3))) == 6
    assert len(enumerate_subgroups(symmetric_group(4))) == 30


@pytest.mark.parametrize(
    "G",
    [
        cyclic_group(6),
        cyclic_group(12),
        symmetric_group(3),
        product_sigma_op(cyclic_group(4), 2),
        product_sigma_op(cyclic_group(2), 3),
    ],
    ids=["Z6", "Z12", "S3", "Z4xS2op", "Z2xS3op"],
)
def test_enumerate_subgroups_matches_bitmask_oracle(G):
    subs = enumerate_subgroups(G)
    assert len(subs) == masks_count(G)
    assert len({s.members for s in subs}) == len(subs)
    for s in subs:
        assert G.identity in s.members
        for x in s.members:
            assert G.inv[x] in s.members
            for y in s.members:
                assert G.mul[x][y] in s.members
    orders = [len(s.members) for s in subs]
    assert orders == sorted(orders)


def test_enumerate_subgroups_bound():
    with pytest.raises(ValueError):
        enumerate_subgroups(product_sigma_op(cyclic_group(4), 4))


# ------------------------------------------------------ graph subgroups


def test_graph_subgroup_trivial():
    G = product_sigma_op(cyclic_group(2), 2)
    res = is_graph_subgroup(Subgroup(G, (G.identity,)))
    assert res and res.h.members == (0,)


def test_graph_subgroup_rejects_permutation_factor():
    G = product_sigma_op(cyclic_group(2), 2)
    swap = G.index_of(0, perm((1, 2), n=2))
    res = is_graph_subgroup(Subgroup.generated(G, [swap]))
    assert not res


def test_graph_subgroup_rejects_lambda():
    G = product_sigma_op(cyclic_group(4), 4)
    a = G.index_of(0, perm((1, 4), (2, 3), n=4))
    b = G.index_of(1, perm((1, 2), (3, 4), n=4))
    assert not is_graph_subgroup(Subgroup.generated(G, [a, b]))
    assert is_graph_subgroup(Subgroup.generated(G, [b]))


def test_graph_subgroup_recovers_homomorphism():
    G = product_sigma_op(cyclic_group(2), 2)
    gen = G.index_of(1, perm((1, 2), n=2))
    res = is_graph_subgroup(Subgroup.generated(G, [gen]))
    assert res
    assert res.h.members == (0, 1)
    assert res.phi[1] == perm((1, 2), n=2)
    base = res.h.parent
    for h1 in res.h.members:
        for h2 in res.h.members:
            assert res.phi[base.mul[h1][h2]] == res.phi[h1] * res.phi[h2]


def test_graph_subgroup_requires_product_parent():
    with pytest.raises(TypeError):
        is_graph_subgroup(Subgroup(cyclic_group(4), (0, 2)))


def test_graph_subgroup_size_equals_projection():
    G = product_sigma_op(cyclic_group(2), 3)
    for s in enumerate_subgroups(G):
        res = is_graph_subgroup(s)
        if res:
            assert len(s.members) == len(res.h.members)


# --------------------------------------------------- G-sets and actions


def quartic_colors():
    # c = {a, -a, ia, -ia, b, ib} acted on by Z/4 = {1, i, -1, -i};
    # the fifth and sixth colors satisfy -b = b.
    G = cyclic_group(4, labels=("1", "i", "-1", "-i"))
    labels = ("a", "-a", "ia", "-ia", "b", "ib")
    i_action = {0: 2, 2: 1, 1: 3, 3: 0, 4: 5, 5: 4}
    act = [list(range(6))]
    for _ in range(3):
        act.append([i_action[x] for x in act[-1]])
    return G, GSet(G, tuple(tuple(r) for r in act), labels)


def test_orbits_trivial_action():
    G = trivial_group()
    X = GSet(G, ((0, 1, 2),))
    assert orbits(X) == [(0,), (1,), (2,)]


def test_regular_action_single_orbit():
    G = cyclic_group(4)
    X = GSet(G, tuple(tuple(G.mul[g][x] for x in range(4)) for g in range(4)))
    assert orbits(X) == [(0, 1, 2, 3)]
    for x in range(4):
        assert stabilizer(X, x).members == (0,)


def test_quartic_color_orbits_and_stabilizer():
    G, X = quartic_colors()
    assert orbits(X) == [(0, 1, 2, 3), (4, 5)]
    assert stabilizer(X, 4).members == (0, 2)  # {1, -1}
    assert fixed_points_gset(X, Subgroup(G, (0, 2))) == (4, 5)
    assert fixed_points_gset(X, Subgroup(G, tuple(range(4)))) == ()


@settings(max_examples=40)
@given(st.data())
def test_conjugation_is_an_involution_on_subgroups(data):
    G = product_sigma_op(cyclic_group(2), 3)
    subs = enumerate_subgroups(G)
    s = data.draw(st.sampled_from(subs))
    x = data.draw(st.integers(0, G.order - 1))
    assert conjugate(conjugate(s, x), G.inv[x]).members == s.members


def test_conjugate_preserves_order():
    G = symmetric_group(3)
    s = Subgroup.generated(G, [G.index_of_permutation(perm((1, 2), n=3))])
    for x in range(G.order):
        assert len(conjugate(s, x).members) == len(s.members)


# ------------------------------------------------- homs, cosets, misc


def test_homomorphism_counts_match_oracle():
    for m, B in [(4, symmetric_group(3)), (2, symmetric_group(2)), (4, symmetric_group(4))]:
        A = cyclic_group(m)
        homs = group_homomorphisms(A, B)
        assert len(homs) == homomorphism_count_from_cyclic(
            m, [list(r) for r in B.mul], B.identity
        )
        for h in homs:
            assert h[A.identity] == B.identity
            for x in range(A.order):
                for y in range(A.order):
                    assert h[A.mul[x][y]] == B.mul[h[x]][h[y]]


def test_homomorphisms_from_klein_group():
    V = product_sigma_op(cyclic_group(2), 2)  # Z/2 x Z/2
    assert len(group_homomorphisms(V, symmetric_group(2))) == 4


def test_left_cosets():
    G = cyclic_group(4)
    cs = left_cosets(G, Subgroup(G, (0, 2)))
    assert cs == [(0, 2), (1, 3)]


def test_subgroup_induced_group_is_a_group():
    G = product_sigma_op(cyclic_group(4), 4)
    b = G.index_of(1, perm((1, 2), (3, 4), n=4))
    lam = Subgroup.generated(G, [b])
    H, back = lam.induced_group()
    assert H.order == 4
    assert sorted(back) == list(lam.members)
    assert len(enumerate_subgroups(H)) == 3
