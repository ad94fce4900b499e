"""Shared worked-example fixtures used across test modules."""
from __future__ import annotations

from eqop.fam import sigma_product
from eqop.grp import GSet, Permutation, Subgroup, cyclic_group, trivial_group
from eqop.tree import Signature, Tree, edge


def perm(*cycles, n):
    img = list(range(1, n + 1))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b
    return Permutation(tuple(img))


def quartic_colors():
    """Z/4 = {1, i, -1, -i} acting on six colors {a, -a, ia, -ia, b, ib}
    where multiplication by -1 fixes b and ib."""
    G = cyclic_group(4, labels=("1", "i", "-1", "-i"))
    labels = ("a", "-a", "ia", "-ia", "b", "ib")
    step = {0: 2, 2: 1, 1: 3, 3: 0, 4: 5, 5: 4}
    rows = [tuple(range(6))]
    for _ in range(3):
        rows.append(tuple(step[x] for x in rows[-1]))
    return G, GSet(G, tuple(rows), labels)


def quartic_corolla():
    """The arity-4 signature (a, ib, ib, -a; b) over the quartic colors."""
    G, X = quartic_colors()
    return G, X, Signature(X, (0, 5, 5, 1), 4)


def abc_colors():
    G = trivial_group()
    return G, GSet(G, ((0, 1, 2),), ("a", "b", "c"))


def single_color():
    G = trivial_group()
    return G, GSet(G, ((0,),), ("*",))


def forest_example_trees():
    """Two trees over colors {a, b, c}: the first has leaves (b, c) under
    a root edge a and contains a stump; the second is a chain of unary
    vertices ending in a stump, with no leaves at all."""
    a, b, c = 0, 1, 2
    t = Tree(a, (Tree(a, (Tree(a, ()), edge(b))), Tree(b, (edge(c),))))
    s = Tree(a, (Tree(b, (Tree(c, ()),)),))
    return t, s


def pm_colors():
    """Z/2 = {1, -1} acting on {a, -a, b} by swapping the first two."""
    G = cyclic_group(2, labels=("1", "-1"))
    return G, GSet(G, ((0, 1, 2), (1, 0, 2)), ("a", "-a", "b"))


def four_fixed_colors():
    """Z/4 = {1, i, -1, -i} on {a, b, ib, c} where i fixes a and c and
    swaps b with ib (so -1 acts as the identity on colors)."""
    G = cyclic_group(4, labels=("1", "i", "-1", "-i"))
    swap = (0, 2, 1, 3)
    rows = ((0, 1, 2, 3), swap, (0, 1, 2, 3), swap)
    return G, GSet(G, rows, ("a", "b", "ib", "c"))


def norm_map_fixture():
    """The arity-4 workspace used by the norm-map examples: the subgroup
    generated by ((1 4)(2 3), e) and ((1 2)(3 4), i) inside Z/4 x Sigma_4^op,
    which stabilizes both (b,ib,ib,b;a) and (c,c,c,c;a)."""
    G, X = four_fixed_colors()
    P4 = sigma_product(G, 4)
    gen_a = P4.index_of(0, perm((1, 4), (2, 3), n=4))
    gen_b = P4.index_of(1, perm((1, 2), (3, 4), n=4))
    lam = Subgroup.generated(P4, [gen_a, gen_b])
    b_sig = Signature(X, (1, 2, 2, 1), 0)
    c_sig = Signature(X, (3, 3, 3, 3), 0)
    return G, X, P4, lam, b_sig, c_sig


def random_seq(colors, N, rng, pieces=2):
    """A random sum of stabilizer-orbit pieces: every finite equivariant
    sequence is isomorphic to such a sum."""
    from eqop.grp import enumerate_subgroups
    from eqop.sym import disjoint_union, empty_seq, free_orbit, space

    X = empty_seq(colors, N)
    for _ in range(pieces):
        n = rng.randrange(N + 1)
        sp = space(colors, n)
        rep = rng.choice(sp.reps())
        stab = Subgroup(sp.group, sp.stabs[rep])
        induced, back = stab.induced_group()
        subs = enumerate_subgroups(induced, bound=induced.order)
        sub = subs[rng.randrange(len(subs))]
        members = tuple(sorted(back[i] for i in sub.members))
        X = disjoint_union(X, free_orbit(colors, N, sp.sigs[rep], members))
    return X
