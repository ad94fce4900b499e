"""Truncated operads: law validation, free constructions and their
adjunction, color changes, fixed points, and unary grafting maps."""
import itertools
import random

import pytest

from eqop.grp import GSet, Permutation, Subgroup, cyclic_group, trivial_group
from eqop.fam import sigma_product, stabilizes
from eqop.oper import (
    OperadMap,
    PartialCompositionError,
    TruncatedOperad,
    UnsupportedOperationError,
    adjunction_transpose,
    associative_operad,
    compose_operad_maps,
    compose_signature,
    composable_triples,
    enumerate_color_maps,
    enumerate_operad_maps,
    fixed_operad,
    fixed_points_list,
    free_operad,
    functor_on_fixed,
    identity_operad_map,
    lambda_postcompose,
    lambda_precompose,
    pullback_operad,
    pushforward_operad_injective,
    terminal_operad,
    underlying_category,
    unary_inverse,
    validate,
)
from eqop.sym import (
    ColorMap,
    EqSymSeq,
    LevelData,
    SymSeqMap,
    empty_seq,
    fixed_points,
    free_orbit,
    hom_maps,
    space,
)
from eqop.tree import Signature, edge

from fixtures import four_fixed_colors, norm_map_fixture, single_color
from oracles import count_arrow_words, count_weighted_alphabet_words, magma_expressions


def unit_interval_colors():
    G = trivial_group()
    return GSet(G, ((0, 1),), ("0", "1"))


def swap_colors():
    G = cyclic_group(2)
    return GSet(G, ((0, 1), (1, 0)), ("a", "b"))


def binary_generator(colors, symmetric, N=3):
    """A single arity-2 generator on one color: either a swap-fixed
    element or a free orbit of the transposition."""
    sp = space(colors, 2)
    sig = Signature(colors, (0, 0), 0)
    rep = sp.rep_of(sp.sig_index(sig))
    members = sp.stabs[rep] if symmetric else None
    return free_orbit(colors, N, sig, members), sig


# ---------------------------------------------------------------- validation


def test_terminal_operad_is_valid():
    _, colors = single_color()
    report = validate(terminal_operad(colors, 3))
    assert report.valid and not report.violations


def test_terminal_over_swapped_colors_is_valid():
    report = validate(terminal_operad(swap_colors(), 2))
    assert report.valid


def test_associative_operad_is_valid():
    assert validate(associative_operad(3)).valid


def test_associative_levels_are_orderings():
    As = associative_operad(3)
    colors = As.colors
    for n in range(4):
        sig = Signature(colors, (0,) * n, 0)
        assert As.levels.level_size(sig) == len(list(itertools.permutations(range(n))))


def test_associative_composition_is_word_substitution():
    # oracle: evaluate words in the free monoid on distinct slot symbols;
    # composing words must match substituting one evaluation into the other
    As = associative_operad(3)
    colors = As.colors

    def word(n, sig_words, x):
        return sig_words[n][x]

    words = {}
    for n in range(4):
        sig = Signature(colors, (0,) * n, 0)
        level = []
        for w in itertools.permutations(range(1, n + 1)):
            level.append(w)
        words[n] = sorted(level)

    def evaluate(w, slot_values):
        out = []
        for a in w:
            out.extend(slot_values[a - 1])
        return tuple(out)

    for outer, i, inner in composable_triples(colors, 3, As.levels):
        n, m = outer.arity, inner.arity
        table = As.composition_table(outer, i, inner)
        for x in range(len(words[n])):
            for y in range(len(words[m])):
                z = table[x][y]
                # distinct symbols per composite slot
                syms = [(f"s{k}",) for k in range(n + m - 1)]
                inner_vals = syms[i - 1 : i - 1 + m]
                outer_vals = (
                    syms[: i - 1]
                    + [evaluate(words[m][y], inner_vals)]
                    + syms[i - 1 + m :]
                )
                assert evaluate(words[n][x], outer_vals) == evaluate(
                    words[n + m - 1][z], syms
                )


def test_associative_words_evaluate_in_a_group():
    # sanity in a nonabelian group: word evaluation is substitution-stable
    As = associative_operad(3)
    colors = As.colors
    mul = lambda a, b: tuple(a[b[k] - 1] for k in range(3))
    s3 = [tuple(p) for p in itertools.permutations((1, 2, 3))]
    rng = random.Random(7)
    words = {
        n: sorted(itertools.permutations(range(1, n + 1))) for n in range(4)
    }

    def evaluate(w, vals):
        acc = (1, 2, 3)
        for a in w:
            acc = mul(acc, vals[a - 1])
        return acc

    for outer, i, inner in composable_triples(colors, 3, As.levels):
        n, m = outer.arity, inner.arity
        table = As.composition_table(outer, i, inner)
        for _ in range(3):
            vals = [rng.choice(s3) for _ in range(n + m - 1)]
            inner_vals = vals[i - 1 : i - 1 + m]
            for x in range(len(words[n])):
                for y in range(len(words[m])):
                    outer_vals = (
                        vals[: i - 1]
                        + [evaluate(words[m][y], inner_vals)]
                        + vals[i - 1 + m :]
                    )
                    assert evaluate(words[n][x], outer_vals) == evaluate(
                        words[n + m - 1][table[x][y]], vals
                    )


def test_corrupted_composition_entry_is_reported():
    As = associative_operad(3)
    sig2 = Signature(As.colors, (0, 0), 0)
    key = ((sig2.sources, sig2.target), 1, (sig2.sources, sig2.target))
    table = [list(row) for row in As.compose[key]]
    table[0][0] = (table[0][0] + 1) % 6
    compose = dict(As.compose)
    compose[key] = tuple(tuple(row) for row in table)
    broken = TruncatedOperad(As.colors, 3, As.levels, As.units, compose)
    report = validate(broken)
    assert not report.valid
    assert any("(0, 0; 0)" in v or "slot 1" in v for v in report.violations)


# -------------------------------------------------------------- free operads


def test_free_operad_on_empty_generators_is_units_only():
    _, colors = single_color()
    F = free_operad(empty_seq(colors, 3), 2, 3)
    sizes = [
        F.operad.levels.level_size(Signature(colors, (0,) * n, 0))
        for n in range(4)
    ]
    assert sizes == [0, 1, 0, 0]
    assert validate(F.operad).valid


def test_free_operad_on_symmetric_binary_generator():
    _, colors = single_color()
    X, sig2 = binary_generator(colors, symmetric=True)
    F = free_operad(X, 2, 3)
    sizes = [
        F.operad.levels.level_size(Signature(colors, (0,) * n, 0))
        for n in range(4)
    ]
    # oracle: binary expressions in distinct variables modulo swapping
    # the two arguments everywhere
    assert len(magma_expressions((0, 1, 2), commutative=True)) == 3
    assert sizes == [0, 1, 1, 3]
    assert validate(F.operad).valid


def test_free_operad_on_free_binary_generator():
    _, colors = single_color()
    X, sig2 = binary_generator(colors, symmetric=False)
    F = free_operad(X, 2, 3)
    sizes = [
        F.operad.levels.level_size(Signature(colors, (0,) * n, 0))
        for n in range(4)
    ]
    assert len(magma_expressions((0, 1, 2), commutative=False)) == 12
    assert sizes == [0, 1, 2, 12]
    assert validate(F.operad).valid


def test_free_operad_over_swapped_colors_is_valid():
    colors = swap_colors()
    sig = Signature(colors, (0, 0), 0)
    X = free_orbit(colors, 3, sig)
    F = free_operad(X, 2, 3)
    report = validate(F.operad)
    assert report.valid, report.violations[:3]


def test_free_operad_units_are_edge_trees():
    _, colors = single_color()
    X, sig2 = binary_generator(colors, symmetric=False)
    F = free_operad(X, 2, 3)
    usig = F.operad.unit_signature(0)
    assert F.tree_of(usig, F.operad.units[0]) == edge(0, 1)


def test_unit_grafting_fixes_every_element():
    _, colors = single_color()
    X, sig2 = binary_generator(colors, symmetric=False)
    O = free_operad(X, 2, 3).operad
    usig = O.unit_signature(0)
    for x in O.level(sig2):
        assert O.compose_entry(usig, 1, sig2, O.units[0], x) == x
        for i in (1, 2):
            assert O.compose_entry(sig2, i, usig, x, O.units[0]) == x


def test_vertex_bound_leaves_deep_composites_undefined():
    _, colors = single_color()
    sig1 = Signature(colors, (0,), 0)
    X = free_orbit(colors, 1, sig1)
    F = free_operad(X, 2, 1)
    O = F.operad
    assert O.levels.level_size(sig1) == 3  # unit, x, x after x
    gen = F.inclusion.apply(sig1, 0)
    chain = O.compose_entry(sig1, 1, sig1, gen, gen)
    with pytest.raises(PartialCompositionError):
        O.compose_entry(sig1, 1, sig1, chain, gen)


# ----------------------------------------------------- free-forgetful adjoint


def test_transpose_into_terminal_is_unique():
    _, colors = single_color()
    X, sig2 = binary_generator(colors, symmetric=True)
    F = free_operad(X, 2, 3)
    T = terminal_operad(colors, 3)
    maps = hom_maps(X, T.levels)
    assert len(maps) == 1
    transpose = adjunction_transpose(F, T, maps[0])
    assert len(enumerate_operad_maps(F.operad, T)) == 1
    assert transpose.functions == enumerate_operad_maps(F.operad, T)[0].functions


def test_transpose_triangle_identity():
    _, colors = single_color()
    X, sig2 = binary_generator(colors, symmetric=False)
    F = free_operad(X, 2, 3)
    As = associative_operad(3, colors)
    for f in hom_maps(X, As.levels):
        transpose = adjunction_transpose(F, As, f)
        for x in X.level_elements(sig2):
            _, image = transpose.apply(sig2, F.inclusion.apply(sig2, x))
            assert image == f.apply(sig2, x)


def test_adjunction_hom_counts_match():
    _, colors = single_color()
    As = associative_operad(3, colors)
    T = terminal_operad(colors, 3)
    for symmetric, target in ((False, As), (True, T), (False, T)):
        X, _ = binary_generator(colors, symmetric)
        F = free_operad(X, 2, 3)
        assert len(hom_maps(X, target.levels)) == len(
            enumerate_operad_maps(F.operad, target)
        )


def test_transposes_exhaust_operad_maps():
    _, colors = single_color()
    X, sig2 = binary_generator(colors, symmetric=False)
    F = free_operad(X, 2, 3)
    As = associative_operad(3, colors)
    frozen = lambda fns: tuple(tuple(sorted(d.items())) for d in fns)
    transposed = {
        frozen(adjunction_transpose(F, As, f).functions)
        for f in hom_maps(X, As.levels)
    }
    direct = {frozen(m.functions) for m in enumerate_operad_maps(F.operad, As)}
    assert transposed == direct


# --------------------------------------------------------------- color change


def test_pullback_along_identity_is_the_same_operad():
    colors = swap_colors()
    T = terminal_operad(colors, 2)
    ident = ColorMap(colors, colors, (0, 1))
    back = pullback_operad(ident, T)
    assert back.compose == T.compose and back.units == T.units


def test_pullback_forgets_unreachable_colors():
    colors2 = unit_interval_colors()
    sub = GSet(colors2.group, ((0,),), ("0",))
    phi = ColorMap(sub, colors2, (0,))
    X0, _ = binary_generator(sub, symmetric=False)
    O = free_operad(X0, 2, 3).operad
    big = pushforward_operad_injective(phi, O)
    small = pullback_operad(phi, big)
    for n in range(4):
        sig = Signature(sub, (0,) * n, 0)
        big_sig = Signature(colors2, (0,) * n, 0)
        assert small.levels.level_size(sig) == big.levels.level_size(big_sig)
        assert small.levels.level_size(sig) == O.levels.level_size(sig)
    assert validate(small).valid


def test_pullback_of_free_arrow_generators_gives_free_words():
    # two colors, generators only in arity 1: free composites are words;
    # restricting to color 0 leaves the words that start and end at 0
    colors2 = unit_interval_colors()
    G = colors2.group
    P1 = sigma_product(G, 1)
    sp1 = space(colors2, 1)
    hom_sizes = {(0, 0): 1, (0, 1): 1, (1, 1): 2, (1, 0): 1}
    levels1 = {}
    for (src, tgt), k in hom_sizes.items():
        sig = Signature(colors2, (src,), tgt)
        rep = sp1.rep_of(sp1.sig_index(sig))
        levels1[rep] = LevelData(k, {m: tuple(range(k)) for m in sp1.stabs[rep]})
    X = EqSymSeq(colors2, 1, ({}, levels1))
    F = free_operad(X, 3, 1)

    counted = count_arrow_words(hom_sizes, 0, 0, 3)
    # the same count through the one-color free-word alphabet: a length-1
    # letter for each loop at 0, plus a letter of length m+2 for each
    # out-and-back word through color 1
    weights = [1] + [m + 2 for m in range(2) for _ in range(2 ** m)]
    assert counted == count_weighted_alphabet_words(weights, 3) == 9

    sub = GSet(G, ((0,),), ("0",))
    phi = ColorMap(sub, colors2, (0,))
    small = pullback_operad(phi, F.operad)
    assert small.levels.level_size(Signature(sub, (0,), 0)) == counted
    assert validate(small).valid


def test_pushforward_needs_injective_color_maps():
    colors2 = unit_interval_colors()
    single = GSet(colors2.group, ((0,),), ("0",))
    collapse = ColorMap(colors2, single, (0, 0))
    T = terminal_operad(colors2, 2)
    with pytest.raises(UnsupportedOperationError):
        pushforward_operad_injective(collapse, T)


def test_pushforward_extends_by_empty_levels_and_fresh_units():
    colors2 = unit_interval_colors()
    sub = GSet(colors2.group, ((0,),), ("0",))
    phi = ColorMap(sub, colors2, (0,))
    X0, _ = binary_generator(sub, symmetric=False)
    O = free_operad(X0, 2, 3).operad
    big = pushforward_operad_injective(phi, O)
    assert validate(big).valid
    # old levels carried over
    for n in range(4):
        assert big.levels.level_size(
            Signature(colors2, (0,) * n, 0)
        ) == O.levels.level_size(Signature(sub, (0,) * n, 0))
    # fresh color contributes its unit and nothing else
    assert big.levels.level_size(Signature(colors2, (1,), 1)) == 1
    assert big.levels.level_size(Signature(colors2, (0,), 1)) == 0
    assert big.levels.level_size(Signature(colors2, (1, 0), 0)) == 0


def test_pushforward_pullback_adjunction_counts():
    colors2 = unit_interval_colors()
    sub = GSet(colors2.group, ((0,),), ("0",))
    phi = ColorMap(sub, colors2, (0,))
    X0, _ = binary_generator(sub, symmetric=False)
    O = free_operad(X0, 2, 3).operad
    big = pushforward_operad_injective(phi, O)
    for P in (terminal_operad(colors2, 3), big):
        fixed_color = [
            m
            for m in enumerate_operad_maps(big, P)
            if m.color_map.table == (0, 1)
        ]
        small = pullback_operad(phi, P)
        assert len(fixed_color) == len(enumerate_operad_maps(O, small))


# --------------------------------------------------------------- fixed points


def test_fixed_operad_at_trivial_subgroup_keeps_levels():
    colors = swap_colors()
    G = colors.group
    T = terminal_operad(colors, 2)
    H = Subgroup(G, (G.identity,))
    fixed = fixed_operad(T, H)
    assert fixed.colors.size == 2
    assert validate(fixed).valid
    for n in range(3):
        total_fixed = sum(
            fixed.levels.level_size(sig) for sig in space(fixed.colors, n).sigs
        )
        total = sum(T.levels.level_size(sig) for sig in space(colors, n).sigs)
        assert total_fixed == total


def test_fixed_operad_with_free_color_action_is_empty():
    colors = swap_colors()
    G = colors.group
    T = terminal_operad(colors, 2)
    H = Subgroup(G, tuple(range(G.order)))
    fixed = fixed_operad(T, H)
    assert fixed.colors.size == 0
    assert underlying_category(T, H).n_objects == 0


def test_fixed_category_object_count_matches_fixed_colors():
    from eqop.grp import fixed_points_gset

    G, colors = four_fixed_colors()
    T = terminal_operad(colors, 2)
    for members in [(0,), (0, 2), (0, 1, 2, 3)]:
        H = Subgroup(G, members)
        C = underlying_category(T, H)
        assert C.n_objects == len(fixed_points_gset(colors, H))


def test_underlying_category_of_terminal_has_singleton_homs():
    colors = swap_colors()
    G = colors.group
    H = Subgroup(G, (G.identity,))
    C = underlying_category(terminal_operad(colors, 2), H)
    assert C.n_objects == 2 and len(C.arrows) == 4
    for a in range(2):
        for b in range(2):
            assert len(C.hom(a, b)) == 1


def test_functor_on_fixed_of_identity_is_identity():
    colors = swap_colors()
    G = colors.group
    H = Subgroup(G, (G.identity,))
    T = terminal_operad(colors, 2)
    F = functor_on_fixed(identity_operad_map(T), H)
    assert F.obj_map == tuple(range(F.source.n_objects))
    assert F.arr_map == tuple(range(len(F.source.arrows)))


# --------------------------------------------------- unary grafting bijections


def test_lambda_precompose_with_units_is_identity():
    G, colors = four_fixed_colors()
    T = terminal_operad(colors, 2)
    P2 = sigma_product(G, 2)
    Lam = Subgroup(P2, (P2.index_of(G.identity, Permutation.identity(2)),))
    sig = Signature(colors, (3, 3), 0)
    out = lambda_precompose(T, sig, sig, Lam, (T.units[3], T.units[3]))
    assert out == {x: x for x in fixed_points(T.levels, sig, Lam)}


def test_norm_subgroup_fixture_walks_fixed_points():
    G, colors, P4, Lam, b_sig, c_sig = norm_map_fixture()
    assert Lam.order == 8
    minus_one = P4.index_of(2, Permutation.identity(4))
    assert minus_one in Lam.members
    assert stabilizes(Lam, b_sig) and stabilizes(Lam, c_sig)
    T = terminal_operad(colors, 4)
    pre = lambda_precompose(T, b_sig, c_sig, Lam, (0, 0, 0, 0))
    fixed_c = fixed_points(T.levels, c_sig, Lam)
    fixed_b = fixed_points(T.levels, b_sig, Lam)
    assert sorted(pre) == sorted(fixed_c)
    assert sorted(set(pre.values())) == sorted(fixed_b)
    post = lambda_postcompose(T, b_sig, Signature(colors, b_sig.sources, 3), Lam, 0)
    assert post == {0: 0}


def two_parallel_arrows_operad(G, colors, minus_swaps):
    """A four-color operad concentrated in arity 1: identities plus a
    parallel pair b -> c, with -1 either swapping the pair or fixing it."""
    sp1 = space(colors, 1)
    P1 = sp1.group
    levels1 = {}

    def put(sig, size, swap_members):
        rep = sp1.rep_of(sp1.sig_index(sig))
        rho = {}
        for m in sp1.stabs[rep]:
            if size == 2 and m in swap_members:
                rho[m] = (1, 0)
            else:
                rho[m] = tuple(range(size))
        levels1[rep] = LevelData(size, rho)

    for c in range(4):
        put(Signature(colors, (c,), c), 1, ())
    swap = (
        (P1.index_of(2, Permutation.identity(1)),) if minus_swaps else ()
    )
    put(Signature(colors, (1,), 3), 2, swap)

    levels = EqSymSeq(colors, 4, (dict(), levels1, dict(), dict(), dict()))
    compose = {}
    for outer, i, inner in composable_triples(colors, 4, levels):
        no, ni = levels.level_size(outer), levels.level_size(inner)
        if inner.sources[0] == inner.target:
            table = tuple(tuple(x for _ in range(ni)) for x in range(no))
        else:
            table = tuple(tuple(y for y in range(ni)) for _ in range(no))
        compose[((outer.sources, outer.target), i, (inner.sources, inner.target))] = table
    return TruncatedOperad(colors, 4, levels, (0, 0, 0, 0), compose)


def test_lambda_precompose_requires_minus_fixed_arrows():
    # the norm subgroup contains -1, so any compatible arrow pair must be
    # fixed by -1; a pair that -1 swaps admits no compatible choice
    G, colors, P4, Lam, b_sig, c_sig = norm_map_fixture()
    P = two_parallel_arrows_operad(G, colors, minus_swaps=True)
    assert validate(P).valid
    for kappa in itertools.product((0, 1), repeat=4):
        with pytest.raises(ValueError):
            lambda_precompose(P, b_sig, c_sig, Lam, kappa)


def test_lambda_precompose_accepts_minus_fixed_arrows():
    G, colors, P4, Lam, b_sig, c_sig = norm_map_fixture()
    P = two_parallel_arrows_operad(G, colors, minus_swaps=False)
    assert validate(P).valid
    accepted = []
    for kappa in itertools.product((0, 1), repeat=4):
        try:
            lambda_precompose(P, b_sig, c_sig, Lam, kappa)
            accepted.append(kappa)
        except ValueError:
            pass
    assert accepted, "some compatible tuple must exist"
    for kappa in accepted:
        # the subgroup identifies slots 1,4 and 2,3
        assert kappa[0] == kappa[3] and kappa[1] == kappa[2]


def test_unary_inverse_presence_and_absence():
    _, colors = single_color()
    T = terminal_operad(colors, 2)
    assert unary_inverse(T, 0, 0, 0) == 0
    sig1 = Signature(colors, (0,), 0)
    sp1 = space(colors, 1)
    rep1 = sp1.rep_of(sp1.sig_index(sig1))
    X = free_orbit(colors, 2, sig1)
    O = free_operad(X, 2, 2).operad
    gen = free_operad(X, 2, 2).inclusion.apply(sig1, 0)
    assert unary_inverse(O, 0, 0, gen) is None
    assert unary_inverse(O, 0, 0, O.units[0]) == O.units[0]


# ------------------------------------------------------------ map enumeration


def test_enumerate_color_maps_respects_equivariance():
    colors = swap_colors()
    maps = enumerate_color_maps(colors, colors)
    assert sorted(m.table for m in maps) == [(0, 1), (1, 0)]


def test_identity_and_composition_of_operad_maps():
    colors = swap_colors()
    T = terminal_operad(colors, 2)
    ident = identity_operad_map(T)
    again = compose_operad_maps(ident, ident)
    assert again.functions == ident.functions
    assert again.color_map.table == ident.color_map.table


def test_composed_maps_apply_pointwise():
    _, colors = single_color()
    X, sig2 = binary_generator(colors, symmetric=False)
    F = free_operad(X, 2, 3)
    As = associative_operad(3, colors)
    T = terminal_operad(colors, 3)
    f = enumerate_operad_maps(F.operad, As)[0]
    g = enumerate_operad_maps(As, T)[0]
    gf = compose_operad_maps(g, f)
    for n in range(4):
        sig = Signature(colors, (0,) * n, 0)
        for x in F.operad.level(sig):
            mid_sig, mid = f.apply(sig, x)
            assert gf.apply(sig, x) == g.apply(mid_sig, mid)
