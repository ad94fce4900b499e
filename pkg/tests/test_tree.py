from __future__ import annotations

import math
import random

import pytest

from eqop.grp import Permutation, product_sigma_op
from eqop.tree import (
    ColoredForest,
    Signature,
    Tree,
    act_signature,
    all_signatures,
    apply_tree_map,
    canonical,
    corolla,
    edge,
    enumerate_tree_classes,
    g_dot_corolla,
    graft,
    graft_tree,
    leaf_root,
    sigma_isomorphism,
    tree_automorphisms,
    tree_from_json,
    tree_isomorphisms,
    tree_to_json,
)
from fixtures import abc_colors, forest_example_trees, quartic_colors, single_color


def perm(*cycles, n):
    img = list(range(1, n + 1))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b
    return Permutation(tuple(img))


# ------------------------------------------------------------ signatures


def test_act_signature_identity():
    _, X = quartic_colors()
    sig = Signature(X, (0, 5, 5, 1), 4)
    assert act_signature((0, Permutation.identity(4)), sig) == sig


def test_act_signature_quartic_rotation():
    # i . (a, ib, ib, -a; b) = (ia, b, b, -ia; ib) with sigma = id
    _, X = quartic_colors()
    sig = Signature(X, (0, 5, 5, 1), 4)
    out = act_signature((1, Permutation.identity(4)), sig)
    assert out == Signature(X, (2, 4, 4, 3), 5)


def test_act_signature_moves_positions():
    _, X = abc_colors()
    sig = Signature(X, (1, 2), 0)  # (b,c;a)
    out = act_signature((0, perm((1, 2), n=2)), sig)
    assert out == Signature(X, (2, 1), 0)


def test_act_signature_arity_mismatch():
    _, X = abc_colors()
    with pytest.raises(ValueError):
        act_signature((0, Permutation.identity(3)), Signature(X, (1, 2), 0))


def test_act_signature_is_left_action():
    # act(x, act(y, C)) == act(x*y, C) with the product taken in the
    # reversed-permutation product group, on 200 seeded random triples
    G, X = quartic_colors()
    P = product_sigma_op(G, 4)
    rng = random.Random(7)
    sigs = list(all_signatures(X, 4))
    for _ in range(200):
        x = rng.randrange(P.order)
        y = rng.randrange(P.order)
        sig = rng.choice(sigs)
        lhs = act_signature(P.part(x), act_signature(P.part(y), sig))
        rhs = act_signature(P.part(P.mul[x][y]), sig)
        assert lhs == rhs


def test_sigma_isomorphism():
    _, X = abc_colors()
    a = Signature(X, (1, 2), 0)
    b = Signature(X, (2, 1), 0)
    sigma = sigma_isomorphism(a, b)
    assert sigma is not None and act_signature((0, sigma), a) == b
    assert sigma_isomorphism(a, Signature(X, (1, 1), 0)) is None


# ----------------------------------------------------------- leaf / root


def test_leaf_root_of_corolla():
    _, X = abc_colors()
    sig = Signature(X, (1, 2, 0), 0)
    assert leaf_root(ColoredForest(X, (corolla(sig),))) == sig


def test_leaf_root_of_forest_examples():
    _, X = abc_colors()
    t, s = forest_example_trees()
    assert leaf_root(ColoredForest(X, (t,))).pretty() == "(b,c;a)"
    assert leaf_root(ColoredForest(X, (s,))).pretty() == "(;a)"
    assert leaf_root(ColoredForest(X, (s,))).arity == 0


def test_leaf_root_rejects_multi_component():
    _, X = abc_colors()
    t, s = forest_example_trees()
    with pytest.raises(ValueError):
        leaf_root(ColoredForest(X, (t, s)))


# -------------------------------------------------------------- grafting


def test_graft_corolla_onto_corolla():
    _, X = abc_colors()
    top = Signature(X, (1, 2), 0)  # (b,c;a)
    bot = Signature(X, (0, 0), 2)  # (a,a;c)
    t = graft(
        ColoredForest(X, (corolla(top),)), 2, ColoredForest(X, (corolla(bot),))
    ).single()
    assert t.n_vertices() == 2
    assert t.leaf_colors() == (1, 0, 0)
    assert t.color == 0


def test_graft_color_mismatch():
    _, X = abc_colors()
    top = corolla(Signature(X, (1, 2), 0))
    bad = corolla(Signature(X, (0,), 0))  # root a, leaf slot wants b
    with pytest.raises(ValueError):
        graft_tree(top, 1, bad)


def test_graft_vertex_count_additive():
    t, s = forest_example_trees()
    grafted = graft_tree(t, 1, Tree(1, (edge(2),)))  # leaf 1 has color b
    assert grafted.n_vertices() == t.n_vertices() + 1


def test_graft_all_leaves_sums_arities():
    _, X = single_color()
    n = 3
    t = corolla(Signature(X, (0,) * n, 0))
    ks = [2, 0, 3]
    # graft right-to-left so earlier planar positions stay valid
    for i in range(n, 0, -1):
        t = graft_tree(t, i, corolla(Signature(X, (0,) * ks[i - 1], 0)))
    assert t.arity == sum(ks)


def test_leaf_root_of_graft_is_substitution():
    _, X = abc_colors()
    rng = random.Random(21)
    sigs = [s for n in range(4) for s in all_signatures(X, n)]
    for _ in range(60):
        top = rng.choice([s for s in sigs if s.arity > 0])
        i = rng.randrange(1, top.arity + 1)
        bottom = rng.choice([s for s in sigs if s.target == top.sources[i - 1]])
        out = leaf_root(
            ColoredForest(
                X, (graft_tree(corolla(top), i, corolla(bottom)),)
            )
        )
        expect = top.sources[: i - 1] + bottom.sources + top.sources[i:]
        assert out.sources == expect and out.target == top.target


# --------------------------------------------------------- G . corolla


def test_g_dot_corolla_trivial_group():
    _, X = abc_colors()
    sig = Signature(X, (1, 2), 0)
    gc = g_dot_corolla(X, sig)
    assert len(gc.forest.trees) == 1
    assert gc.component(0) == corolla(sig)


def test_g_dot_corolla_quartic_components():
    G, X = quartic_colors()
    sig = Signature(X, (0, 5, 5, 1), 4)
    gc = g_dot_corolla(X, sig)
    got = [leaf_root(ColoredForest(X, (gc.component(g),))) for g in G.elements()]
    assert got[0] == sig
    assert got[1] == Signature(X, (2, 4, 4, 3), 5)  # i . C
    assert got[2] == Signature(X, (1, 5, 5, 0), 4)  # -1 . C
    assert got[3] == Signature(X, (3, 4, 4, 2), 5)  # -i . C
    # components C and -C are isomorphic over the symmetric category,
    # C and iC are not (roots differ)
    assert sigma_isomorphism(got[0], got[2]) is not None
    assert sigma_isomorphism(got[0], got[1]) is None


def test_g_dot_corolla_edge_set_and_right_action():
    G, X = quartic_colors()
    sig = Signature(X, (0, 5, 5, 1), 4)
    gc = g_dot_corolla(X, sig)
    assert gc.edges() == [(g, i) for g in range(4) for i in range(5)]
    # right-action law on the full quartic example, seeded sample
    P4 = product_sigma_op(G, 4)
    rng = random.Random(3)
    for _ in range(150):
        e = rng.choice(gc.edges())
        x = rng.randrange(P4.order)
        y = rng.randrange(P4.order)
        one_by_one = gc.edge_right_action(gc.edge_right_action(e, P4.part(x)), P4.part(y))
        at_once = gc.edge_right_action(e, P4.part(P4.mul[x][y]))
        assert one_by_one == at_once
    # identity acts trivially
    for e in gc.edges():
        assert gc.edge_right_action(e, P4.part(P4.identity)) == e


def test_g_dot_corolla_edge_colors_match_components():
    G, X = quartic_colors()
    sig = Signature(X, (0, 5, 5, 1), 4)
    gc = g_dot_corolla(X, sig)
    for g in G.elements():
        comp = leaf_root(ColoredForest(X, (gc.component(g),)))
        assert gc.edge_color((g, 0)) == comp.target
        for i in range(1, 5):
            assert gc.edge_color((g, i)) == comp.sources[i - 1]


def test_g_dot_corolla_component_action():
    G, X = quartic_colors()
    gc = g_dot_corolla(X, Signature(X, (0, 5, 5, 1), 4))
    for g in G.elements():
        for h in G.elements():
            assert gc.component_action(g, h) == G.mul[g][h]


# ------------------------------------------------------ class enumeration


def test_tree_classes_vertex_free():
    _, X = single_color()
    unit = enumerate_tree_classes(X, Signature(X, (0,), 0), 0, max_arity=1)
    assert len(unit) == 1
    assert unit[0].representative == edge(0, label=1)
    assert unit[0].marker == Permutation((1,))
    assert enumerate_tree_classes(X, Signature(X, (0, 0), 0), 0, max_arity=2) == []


def test_tree_classes_binary_corolla_markers_collapse():
    _, X = single_color()
    classes = enumerate_tree_classes(X, Signature(X, (0, 0), 0), 1, max_arity=2)
    # the marked 2-corolla: both markers are identified by the leaf swap
    assert len(classes) == 1
    assert len(classes[0].automorphisms) == 2


def test_tree_classes_unary_chain():
    _, X = single_color()
    sig = Signature(X, (0,), 0)
    classes = enumerate_tree_classes(X, sig, 2, max_arity=1)
    assert len(classes) == 3  # bare edge, one vertex, chain of two
    two = [c for c in classes if c.representative.n_vertices() == 2]
    assert len(two) == 1
    assert two[0].representative == Tree(0, (Tree(0, (edge(0, label=1),)),))
    # allowing binary vertices admits one extra shape: a stump beside the leaf
    wider = enumerate_tree_classes(X, sig, 2, max_arity=2)
    assert len(wider) == 4


def test_tree_classes_two_colors_count():
    _, X = abc_colors()
    sig = Signature(X, (1, 2), 0)  # (b,c;a)
    classes = enumerate_tree_classes(X, sig, 2, max_arity=2)
    # hand count: the corolla, chains through a unary vertex (3 inner
    # colors), and leaf-beside-unary-vertex shapes (2 choices of which
    # leaf hangs low, times 3 inner colors)
    assert len(classes) == 10


def test_tree_classes_pairwise_non_isomorphic():
    _, X = abc_colors()
    sig = Signature(X, (1, 1), 0)
    classes = enumerate_tree_classes(X, sig, 3, max_arity=2)
    reps = [c.representative for c in classes]
    for i in range(len(reps)):
        for j in range(len(reps)):
            if i != j:
                assert not tree_isomorphisms(reps[i], reps[j])


def test_tree_classes_markers_read_labels():
    _, X = abc_colors()
    sig = Signature(X, (1, 2), 0)
    for cls in enumerate_tree_classes(X, sig, 2, max_arity=2):
        lr = leaf_root(ColoredForest(X, (cls.representative.strip(),)))
        for p in range(1, lr.arity + 1):
            assert lr.sources[p - 1] == sig.sources[cls.marker(p) - 1]


# ---------------------------------------------------------- automorphisms


def test_automorphisms_distinct_colors_trivial():
    _, X = abc_colors()
    assert len(tree_automorphisms(corolla(Signature(X, (1, 2), 0)))) == 1


@pytest.mark.parametrize("n", [2, 3, 4])
def test_automorphisms_single_color_corolla(n):
    _, X = single_color()
    auts = tree_automorphisms(corolla(Signature(X, (0,) * n, 0)))
    assert len(auts) == math.factorial(n)
    # leaf permutations are exactly all of Sigma_n
    t = corolla(Signature(X, (0,) * n, 0))
    leaf_perms = {a.leaf_image(t) for a in auts}
    assert len(leaf_perms) == math.factorial(n)


def test_automorphisms_of_forest_examples_are_trivial():
    t, s = forest_example_trees()
    assert len(tree_automorphisms(t)) == 1
    assert len(tree_automorphisms(s)) == 1


def test_automorphism_swaps_equal_subtrees():
    sub = Tree(1, (edge(2),))
    t = Tree(0, (sub, sub))
    auts = tree_automorphisms(t)
    assert len(auts) == 2
    swap = next(a for a in auts if not a.perm.is_identity())
    assert swap.leaf_image(t) == Permutation((2, 1))


def test_apply_tree_map_moves_labels():
    _, X = single_color()
    t = corolla(Signature(X, (0, 0), 0), labeled=True)
    swap = next(a for a in tree_automorphisms(t) if not a.perm.is_identity())
    moved = apply_tree_map(swap, t)
    assert [leaf.label for leaf in moved.leaves()] == [2, 1]
    lam = swap.leaf_image(t.strip())
    labels = [leaf.label for leaf in t.leaves()]
    assert [labels[lam(p) - 1] for p in (1, 2)] == [2, 1]


# --------------------------------------------------- canonical form laws


def _random_tree(rng, colors, depth):
    if depth == 0 or rng.random() < 0.4:
        return edge(rng.randrange(colors))
    m = rng.randrange(0, 3)
    return Tree(
        rng.randrange(colors),
        tuple(_random_tree(rng, colors, depth - 1) for _ in range(m)),
    )


def _shuffle(rng, t):
    if t.children is None:
        return t
    kids = [_shuffle(rng, ch) for ch in t.children]
    rng.shuffle(kids)
    return Tree(t.color, tuple(kids), dec=t.dec)


def test_canonical_invariant_under_planar_shuffle():
    rng = random.Random(11)
    for _ in range(80):
        t = _random_tree(rng, 3, 3)
        shuffled = _shuffle(rng, t)
        assert canonical(t) == canonical(shuffled)
        assert tree_isomorphisms(t, shuffled)


def test_canonical_distinguishes_labelings_up_to_symmetry():
    _, X = single_color()
    sub = lambda lbl: Tree(0, (edge(0, label=lbl),))
    left = Tree(0, (sub(1), sub(2)))
    swapped = Tree(0, (sub(2), sub(1)))
    assert canonical(left) == canonical(swapped)
    # but a genuinely different marking stays different
    chain = Tree(0, (Tree(0, (edge(0, label=1), edge(0, label=2))),))
    assert canonical(left) != canonical(chain)


# ------------------------------------------------------------------ json


def test_tree_json_roundtrip():
    t, s = forest_example_trees()
    for x in (t, s, edge(2, label=3)):
        assert tree_from_json(tree_to_json(x)) == x
