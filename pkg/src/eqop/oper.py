"""Arity-truncated colored operads in finite sets, with the group acting
on colors.

An operad here is a symmetric sequence of levels together with unit
elements and single-slot grafting tables.  Compositions whose output
arity exceeds the truncation bound are simply absent; free operads also
leave entries undefined when a graft would exceed the vertex bound, and
such entries surface as PartialCompositionError when used.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .cat import FinCategory, Functor
from .fam import sigma_product, stabilizes
from .grp import GSet, Permutation, Subgroup, fixed_points_gset, trivial_group
from .sym import (
    ColorMap,
    EqSymSeq,
    LevelData,
    SymSeqMap,
    disjoint_union,
    fixed_points,
    free_orbit,
    hom_maps,
    pullback,
    pushforward_injective,
    seq_from_json,
    seq_to_json,
    space,
)
from .tree import (
    Signature,
    Tree,
    corolla,
    canonical,
    edge,
    enumerate_tree_classes,
    graft_tree,
    tree_key,
    TREE_VERTEX_BOUND,
)


class PartialCompositionError(RuntimeError):
    """A grafting whose result is outside the stored bounds was requested."""


class UnsupportedOperationError(RuntimeError):
    pass


def compose_signature(outer: Signature, i: int, inner: Signature) -> Signature:
    """Signature of the single-slot graft: slot i of the outer signature is
    replaced by the sources of the inner one."""
    if not 1 <= i <= outer.arity:
        raise ValueError(f"slot {i} out of range 1..{outer.arity}")
    if outer.sources[i - 1] != inner.target:
        raise ValueError("slot color does not match inner target")
    sources = outer.sources[: i - 1] + inner.sources + outer.sources[i:]
    return Signature(outer.colors, sources, outer.target)


def expand_perm(sigma: Permutation, i: int, m: int) -> Permutation:
    """Inflate sigma (arity n) at slot i by a block of width m.

    The result acts on n+m-1 slots, sending the block occupying
    i..i+m-1 to the block at sigma(i) and following sigma elsewhere,
    with positions shifted across the blocks."""
    n = sigma.n
    si = sigma(i)

    def adj(p, q):
        return q if q < p else q + m - 1

    img = [0] * (n + m - 1)
    for l in range(1, m + 1):
        img[i - 1 + l - 1] = si - 1 + l
    for j in range(1, n + 1):
        if j != i:
            img[adj(i, j) - 1] = adj(si, sigma(j))
    return Permutation(tuple(img))


def inner_block_perm(rho: Permutation, i: int, n: int) -> Permutation:
    """The arity-(n+m-1) permutation acting as rho inside the block
    i..i+m-1 and as the identity elsewhere."""
    m = rho.n
    img = list(range(1, n + m))
    for l in range(1, m + 1):
        img[i - 1 + l - 1] = i - 1 + rho(l)
    return Permutation(tuple(img))


def _sig_key(sig: Signature) -> tuple:
    return (sig.sources, sig.target)


def composable_triples(colors: GSet, N: int, levels: EqSymSeq):
    """All (outer sig, slot, inner sig) with both levels nonempty and
    composite arity within the bound."""
    for n in range(1, N + 1):
        sp = space(colors, n)
        for outer in sp.sigs:
            if levels.level_size(outer) == 0:
                continue
            for m in range(0, N - n + 2):
                if n + m - 1 > N:
                    continue
                spi = space(colors, m)
                for inner in spi.sigs:
                    if levels.level_size(inner) == 0:
                        continue
                    for i in range(1, n + 1):
                        if outer.sources[i - 1] == inner.target:
                            yield outer, i, inner


def _transfer_routes(colors_a: GSet, colors_b: GSet, image_sig, B_levels: EqSymSeq):
    """Index interchange for a sequence over colors_a borrowing its level
    at each orbit representative from B at the image signature, with the
    stabilizer action conjugated through B's transporter.

    to_b carries (sig, index at sig) to the B index at image_sig(sig);
    from_b inverts that.  Both color sets must share the acting group."""

    def member(sig):
        n = sig.arity
        spa, spb = space(colors_a, n), space(colors_b, n)
        assert spa.group is spb.group
        i = spa.sig_index(sig)
        j = spb.sig_index(image_sig(spa.sigs[spa.rep_of(i)]))
        P = spa.group
        return (
            P.mul[spa.transporter[i]][spb.transporter[j]],
            spb.sigs[spb.rep_of(j)],
            P,
        )

    def to_b(sig: Signature, x: int):
        mem, jrep_sig, _ = member(sig)
        return B_levels.transport_index(mem, jrep_sig, x)

    def from_b(sig: Signature, y: int) -> int:
        mem, _, P = member(sig)
        return B_levels.transport_index(P.inv[mem], image_sig(sig), y)[1]

    return to_b, from_b


@dataclass(frozen=True)
class TruncatedOperad:
    """Levels, units, and single-slot composition tables up to the bound.

    ``compose`` maps (outer key, slot, inner key) to a table indexed by
    level elements at the outer and inner signatures; entries are level
    indices at the grafted signature, or None where the composite is
    outside the stored bounds (free operads with a vertex cap).
    """

    colors: GSet
    arity_bound: int
    levels: EqSymSeq
    units: tuple[int, ...]
    compose: dict

    def __post_init__(self):
        assert self.levels.colors is self.colors
        assert self.levels.arity_bound == self.arity_bound
        assert len(self.units) == self.colors.size
        for c, u in enumerate(self.units):
            sig = Signature(self.colors, (c,), c)
            assert 0 <= u < self.levels.level_size(sig), "missing unit element"
        expected = set()
        for outer, i, inner in composable_triples(self.colors, self.arity_bound, self.levels):
            key = (_sig_key(outer), i, _sig_key(inner))
            expected.add(key)
            assert key in self.compose, f"missing composition table {key}"
            table = self.compose[key]
            out_size = self.levels.level_size(
                compose_signature(outer, i, inner)
            )
            assert len(table) == self.levels.level_size(outer)
            for row in table:
                assert len(row) == self.levels.level_size(inner)
                assert all(z is None or 0 <= z < out_size for z in row)
        assert set(self.compose) == expected, "stray composition keys"

    # ---- access

    def unit_signature(self, c: int) -> Signature:
        return Signature(self.colors, (c,), c)

    def level(self, sig: Signature) -> range:
        return self.levels.level_elements(sig)

    def composition_table(self, outer: Signature, i: int, inner: Signature):
        key = (_sig_key(outer), i, _sig_key(inner))
        if key not in self.compose:
            raise ValueError(f"no composition stored for {key}")
        return self.compose[key]

    def compose_entry(self, outer: Signature, i: int, inner: Signature,
                      x: int, y: int) -> int:
        z = self.composition_table(outer, i, inner)[x][y]
        if z is None:
            raise PartialCompositionError(
                f"composite at slot {i} of {outer.pretty()} with "
                f"{inner.pretty()} exceeds the stored bounds"
            )
        return z


@dataclass
class OperadReport:
    valid: bool
    violations: list


def validate(O: TruncatedOperad) -> OperadReport:
    """Exhaustive law check within the bounds: unit laws, unit
    equivariance, both composition-transport laws, and all three
    associativity interchange cases.  Every violation is reported with
    the witnessing graft."""
    bad = []
    P_levels = O.levels
    G = O.colors.group

    # unit laws
    for n in range(1, O.arity_bound + 1):
        sp = space(O.colors, n)
        for sig in sp.sigs:
            size = P_levels.level_size(sig)
            if size == 0:
                continue
            usig = O.unit_signature(sig.target)
            tab = O.composition_table(usig, 1, sig)
            for x in range(size):
                if tab[O.units[sig.target]][x] != x:
                    bad.append(f"left unit fails at {sig.pretty()} x={x}")
            for i in range(1, n + 1):
                c = sig.sources[i - 1]
                tab = O.composition_table(sig, i, O.unit_signature(c))
                for x in range(size):
                    if tab[x][O.units[c]] != x:
                        bad.append(
                            f"right unit fails at {sig.pretty()} slot {i} x={x}"
                        )

    # unit equivariance: g . unit(c) = unit(g c)
    for c in range(O.colors.size):
        for g in G.elements():
            sig2, u2 = P_levels.transport(
                (g, Permutation.identity(1)), O.unit_signature(c), O.units[c]
            )
            gc = O.colors.apply(g, c)
            if sig2.target != gc or u2 != O.units[gc]:
                bad.append(f"unit at color {c} not equivariant under g={g}")

    # transport laws for composition
    for (okey, i, ikey), table in O.compose.items():
        outer = Signature(O.colors, *okey)
        inner = Signature(O.colors, *ikey)
        n, m = outer.arity, inner.arity
        Pn = sigma_product(G, n)
        out_sig = compose_signature(outer, i, inner)
        idm = Permutation.identity(m)
        for x in range(len(table)):
            for y in range(len(table[x])):
                z = table[x][y]
                for mem in Pn.elements():
                    g, sigma = Pn.part(mem)
                    ip = sigma.inverse()(i)
                    co, xp = P_levels.transport((g, sigma), outer, x)
                    bo, yp = P_levels.transport((g, idm), inner, y)
                    zl = O.composition_table(co, ip, bo)[xp][yp]
                    if z is None:
                        if zl is not None:
                            bad.append(
                                f"transport law breaks None at {okey} slot {i}"
                            )
                        continue
                    ds, zr = P_levels.transport(
                        (g, expand_perm(sigma, ip, m)), out_sig, z
                    )
                    if zl != zr or ds != compose_signature(co, ip, bo):
                        bad.append(
                            f"outer transport law fails at {okey} slot {i} "
                            f"{ikey} x={x} y={y} member={mem}"
                        )
                if m > 1:
                    for rho_idx in range(sigma_product(G, m).order):
                        e_g, rho = sigma_product(G, m).part(rho_idx)
                        if e_g != G.identity:
                            continue
                        bi, yp = P_levels.transport((e_g, rho), inner, y)
                        zl = O.composition_table(outer, i, bi)[x][yp]
                        if z is None:
                            if zl is not None:
                                bad.append(
                                    f"inner transport law breaks None at {okey}"
                                )
                            continue
                        _, zr = P_levels.transport(
                            (G.identity, inner_block_perm(rho, i, n)),
                            out_sig,
                            z,
                        )
                        if zl != zr:
                            bad.append(
                                f"inner transport law fails at {okey} slot {i}"
                                f" {ikey} x={x} y={y} rho={rho.image}"
                            )

    # associativity: (x o_i y) o_j z against the three interchange cases
    for (okey, i, ikey), table in O.compose.items():
        outer = Signature(O.colors, *okey)
        inner = Signature(O.colors, *ikey)
        n, m = outer.arity, inner.arity
        mid = compose_signature(outer, i, inner)
        d = mid.arity
        for j in range(1, d + 1):
            for k in range(0, O.arity_bound - d + 2):
                if d + k - 1 > O.arity_bound:
                    continue
                spk = space(O.colors, k)
                # the reassociated route must itself fit the bound
                if i <= j <= i + m - 1:
                    if m + k - 1 > O.arity_bound:
                        continue
                elif n + k - 1 > O.arity_bound:
                    continue
                for third in spk.sigs:
                    if mid.sources[j - 1] != third.target:
                        continue
                    if P_levels.level_size(third) == 0:
                        continue
                    for x, y, z in product(
                        range(P_levels.level_size(outer)),
                        range(P_levels.level_size(inner)),
                        range(P_levels.level_size(third)),
                    ):
                        xy = table[x][y]
                        lhs = (
                            None
                            if xy is None
                            else O.composition_table(mid, j, third)[xy][z]
                        )
                        if i <= j <= i + m - 1:
                            yz = O.composition_table(inner, j - i + 1, third)[y][z]
                            rhs = (
                                None
                                if yz is None
                                else O.composition_table(
                                    outer, i, compose_signature(inner, j - i + 1, third)
                                )[x][yz]
                            )
                        elif j < i:
                            xz = O.composition_table(outer, j, third)[x][z]
                            rhs = (
                                None
                                if xz is None
                                else O.composition_table(
                                    compose_signature(outer, j, third),
                                    i + k - 1,
                                    inner,
                                )[xz][y]
                            )
                        else:
                            xz = O.composition_table(outer, j - m + 1, third)[x][z]
                            rhs = (
                                None
                                if xz is None
                                else O.composition_table(
                                    compose_signature(outer, j - m + 1, third),
                                    i,
                                    inner,
                                )[xz][y]
                            )
                        if lhs != rhs:
                            bad.append(
                                "associativity fails: "
                                f"({okey} o_{i} {ikey}) o_{j} {_sig_key(third)}"
                                f" at x={x} y={y} z={z}: {lhs} != {rhs}"
                            )
    return OperadReport(not bad, bad)


# -------------------------------------------------------------- operad maps


@dataclass(frozen=True)
class OperadMap:
    """A map of truncated operads over an equivariant color map.

    ``functions[n][rep]`` lists images of the level at an orbit
    representative; the image index is read at the image signature of the
    representative.  Units and all defined compositions must be preserved.
    """

    source: TruncatedOperad
    target: TruncatedOperad
    color_map: ColorMap
    functions: tuple[dict, ...]

    def __post_init__(self):
        O, P = self.source, self.target
        assert O.arity_bound == P.arity_bound
        # equivariance of the level functions, via the pullback sequence
        SymSeqMap(O.levels, pullback(self.color_map, P.levels), self.functions)
        for c in range(O.colors.size):
            sig, u = self.apply(O.unit_signature(c), O.units[c])
            fc = self.color_map.table[c]
            assert sig.target == fc and u == P.units[fc], "unit not preserved"
        for (okey, i, ikey), table in O.compose.items():
            outer = Signature(O.colors, *okey)
            inner = Signature(O.colors, *ikey)
            out_sig = compose_signature(outer, i, inner)
            fo = self.color_map.apply_sig(outer)
            fi = self.color_map.apply_sig(inner)
            for x, row in enumerate(table):
                _, fx = self.apply(outer, x)
                for y, z in enumerate(row):
                    if z is None:
                        continue
                    _, fy = self.apply(inner, y)
                    _, fz = self.apply(out_sig, z)
                    got = P.composition_table(fo, i, fi)[fx][fy]
                    assert got == fz, (
                        f"composition not preserved at {okey} o_{i} {ikey}"
                    )

    def apply(self, sig: Signature, x: int) -> tuple[Signature, int]:
        """Image of the element x at sig, returned at the image signature."""
        O, P = self.source, self.target
        sp = space(O.colors, sig.arity)
        idx = sp.sig_index(sig)
        rep = sp.rep_of(idx)
        Pn = sp.group
        # pull x back to the representative, map, and push forward again;
        # stored images live at the destination orbit representative
        _, x_rep = O.levels.transport_index(Pn.inv[sp.transporter[idx]], sig, x)
        y = self.functions[sig.arity][rep][x_rep]
        to_t, _ = _transfer_routes(
            O.colors, P.colors, self.color_map.apply_sig, P.levels
        )
        return to_t(sig, y)


def identity_operad_map(O: TruncatedOperad) -> OperadMap:
    cm = ColorMap(O.colors, O.colors, tuple(range(O.colors.size)))
    functions = tuple(
        {rep: tuple(range(data.size)) for rep, data in per_rep.items()}
        for per_rep in O.levels.levels
    )
    return OperadMap(O, O, cm, functions)


def compose_operad_maps(g: OperadMap, f: OperadMap) -> OperadMap:
    assert f.target is g.source or f.target == g.source
    cm = ColorMap(
        f.color_map.src,
        g.color_map.dst,
        tuple(g.color_map.table[c] for c in f.color_map.table),
    )
    _, from_t = _transfer_routes(
        f.source.colors, g.target.colors,
        lambda s: Signature(g.target.colors, tuple(cm.table[c] for c in s.sources), cm.table[s.target]),
        g.target.levels,
    )
    functions = []
    for n, per_rep in enumerate(f.source.levels.levels):
        sp = space(f.source.colors, n)
        out = {}
        for rep, data in per_rep.items():
            rep_sig = sp.sigs[rep]
            images = []
            for x in range(data.size):
                s1, x1 = f.apply(rep_sig, x)
                _, x2 = g.apply(s1, x1)
                images.append(from_t(rep_sig, x2))
            out[rep] = tuple(images)
        functions.append(out)
    return OperadMap(f.source, g.target, cm, tuple(functions))


# ------------------------------------------------------- basic constructions


def _build_compose(colors: GSet, N: int, levels: EqSymSeq, entry) -> dict:
    """Assemble composition tables by calling entry(outer, i, inner, x, y)."""
    out = {}
    for outer, i, inner in composable_triples(colors, N, levels):
        table = tuple(
            tuple(
                entry(outer, i, inner, x, y)
                for y in levels.level_elements(inner)
            )
            for x in levels.level_elements(outer)
        )
        out[(_sig_key(outer), i, _sig_key(inner))] = table
    return out


def terminal_operad(colors: GSet, N: int) -> TruncatedOperad:
    """Every level a single point; all structure maps forced."""
    levels_data = []
    for n in range(N + 1):
        sp = space(colors, n)
        levels_data.append(
            {rep: LevelData(1, {s: (0,) for s in sp.stabs[rep]}) for rep in sp.reps()}
        )
    levels = EqSymSeq(colors, N, tuple(levels_data))
    compose = _build_compose(colors, N, levels, lambda *a: 0)
    return TruncatedOperad(colors, N, levels, tuple(0 for _ in range(colors.size)), compose)


def _single_color_set() -> GSet:
    G = trivial_group()
    return GSet(G, ((0,),), ("*",))


def associative_operad(N: int, colors: GSet | None = None) -> TruncatedOperad:
    """One color; the arity-n level is the set of orderings of n inputs,
    written as words listing input labels in multiplication order.

    Pass an existing single-color set to share it with other structures
    (level spaces compare colors by the owning group instance)."""
    if colors is None:
        colors = _single_color_set()
    assert colors.size == 1 and colors.group.order == 1
    G = colors.group
    words: list[list[tuple[int, ...]]] = []
    index: list[dict] = []
    for n in range(N + 1):
        level = sorted(
            tuple(w) for w in product(*(range(1, n + 1) for _ in range(n)))
            if len(set(w)) == n
        )
        words.append(level)
        index.append({w: i for i, w in enumerate(level)})

    levels_data = []
    for n in range(N + 1):
        sp = space(colors, n)
        rep = sp.reps()[0]
        Pn = sp.group
        rho = {}
        for s in sp.stabs[rep]:
            _, tau = Pn.part(s)
            tinv = tau.inverse()
            rho[s] = tuple(
                index[n][tuple(tinv(a) for a in w)] for w in words[n]
            )
        levels_data.append({rep: LevelData(len(words[n]), rho)})
    levels = EqSymSeq(colors, N, tuple(levels_data))

    def entry(outer, i, inner, x, y):
        u, v = words[outer.arity][x], words[inner.arity][y]
        m = inner.arity
        out = []
        for a in u:
            if a < i:
                out.append(a)
            elif a == i:
                out.extend(i - 1 + b for b in v)
            else:
                out.append(a + m - 1)
        return index[outer.arity + m - 1][tuple(out)]

    compose = _build_compose(colors, N, levels, entry)
    return TruncatedOperad(colors, N, levels, (index[1][(1,)],), compose)


# ------------------------------------------------------------- free operads


def _decoration_action(X: EqSymSeq):
    """Decoration transport used by canonical forms: permuting the
    children of a vertex moves its decoration along the slot permutation."""
    colors = X.colors
    e = colors.group.identity

    def act_dec(dec, sources, tau):
        c0, x = dec
        _, x2 = X.transport((e, tau), Signature(colors, sources, c0), x)
        return (c0, x2)

    return act_dec


def _transport_decorated(X: EqSymSeq, g: int, tau: Permutation, t: Tree) -> Tree:
    """Transport of a decorated labeled tree by (g, tau): colors translate
    by g, leaf labels compose with the inverse slot permutation, and each
    decoration moves by (g, identity)."""
    colors = X.colors
    rows = colors.action[g]
    tinv = tau.inverse()

    def go(node: Tree) -> Tree:
        if node.children is None:
            return Tree(rows[node.color], None, tinv(node.label))
        kids = tuple(go(ch) for ch in node.children)
        c0, x = node.dec
        sig = Signature(colors, tuple(ch.color for ch in node.children), c0)
        _, x2 = X.transport((g, Permutation.identity(len(kids))), sig, x)
        return Tree(rows[node.color], kids, dec=(rows[c0], x2))

    return go(t)


def _relabel_leaves(t: Tree, fn) -> Tree:
    if t.children is None:
        return Tree(t.color, None, fn(t.label))
    return Tree(
        t.color, tuple(_relabel_leaves(ch, fn) for ch in t.children), dec=t.dec
    )


def _decorate(t: Tree, picks) -> Tree:
    """Attach decoration indices to vertices in planar root-first order."""
    it = iter(picks)

    def go(node: Tree) -> Tree:
        if node.children is None:
            return node
        x = next(it)
        kids = tuple(go(ch) for ch in node.children)
        return Tree(node.color, kids, dec=(node.color, x))

    out = go(t)
    rest = list(it)
    assert not rest
    return out


class FreeOperad:
    """The truncated free operad on a symmetric sequence, with its element
    trees and the inclusion of generators.

    ``operad`` is the plain table form; ``trees[n][rep]`` lists the
    canonical decorated labeled trees that its level elements stand for.
    """

    def __init__(self, X: EqSymSeq, vertex_bound: int, N: int):
        if N > X.arity_bound:
            raise ValueError("free operad bound exceeds the generator bound")
        colors = X.colors
        G = colors.group
        self.generators = X
        self.vertex_bound = vertex_bound
        self.act_dec = _decoration_action(X)
        self.trees: list[dict] = []
        self._index: list[dict] = []

        levels_data = []
        for n in range(N + 1):
            sp = space(colors, n)
            per_rep_trees: dict = {}
            per_rep_levels: dict = {}
            for rep in sp.reps():
                rep_sig = sp.sigs[rep]
                found = {}
                for cls in enumerate_tree_classes(
                    colors,
                    rep_sig,
                    vertex_bound,
                    max_arity=N,
                    bound=max(vertex_bound, TREE_VERTEX_BOUND),
                ):
                    vertex_sigs = [
                        Signature(
                            colors, tuple(ch.color for ch in v.children), v.color
                        )
                        for v in cls.representative.vertices()
                    ]
                    for picks in product(
                        *(X.level_elements(s) for s in vertex_sigs)
                    ):
                        ct = canonical(
                            _decorate(cls.representative, picks), self.act_dec
                        )
                        found[ct] = None
                elems = tuple(sorted(found, key=tree_key))
                if not elems:
                    continue
                idx = {t: i for i, t in enumerate(elems)}
                rho = {}
                for s in sp.stabs[rep]:
                    g, tau = sp.group.part(s)
                    rho[s] = tuple(
                        idx[
                            canonical(
                                _transport_decorated(X, g, tau, t), self.act_dec
                            )
                        ]
                        for t in elems
                    )
                per_rep_trees[rep] = elems
                per_rep_levels[rep] = LevelData(len(elems), rho)
            self.trees.append(per_rep_trees)
            self._index.append(
                {rep: {t: i for i, t in enumerate(ts)} for rep, ts in per_rep_trees.items()}
            )
            levels_data.append(per_rep_levels)

        levels = EqSymSeq(colors, N, tuple(levels_data))
        units = tuple(
            self.index_of(Signature(colors, (c,), c), edge(c, 1))
            for c in range(colors.size)
        )
        compose = _build_compose(colors, N, levels, self._graft_entry(levels))
        self.operad = TruncatedOperad(colors, N, levels, units, compose)
        self.inclusion = self._build_inclusion(X, levels)

    # ---- tree/element interchange

    def tree_of(self, sig: Signature, x: int) -> Tree:
        """The decorated tree the element x stands for, with labels
        realizing the given signature."""
        sp = space(self.generators.colors, sig.arity)
        idx = sp.sig_index(sig)
        rep = sp.rep_of(idx)
        g, tau = sp.group.part(sp.transporter[idx])
        return canonical(
            _transport_decorated(self.generators, g, tau, self.trees[sig.arity][rep][x]),
            self.act_dec,
        )

    def index_of(self, sig: Signature, t: Tree) -> int:
        sp = space(self.generators.colors, sig.arity)
        idx = sp.sig_index(sig)
        rep = sp.rep_of(idx)
        g, tau = sp.group.part(sp.group.inv[sp.transporter[idx]])
        ct = canonical(
            _transport_decorated(self.generators, g, tau, t), self.act_dec
        )
        return self._index[sig.arity][rep][ct]

    def _graft_entry(self, levels: EqSymSeq):
        cache: dict = {}

        def tree_at(sig, x):
            key = (_sig_key(sig), x)
            if key not in cache:
                cache[key] = self.tree_of(sig, x)
            return cache[key]

        def entry(outer, i, inner, x, y):
            tx = tree_at(outer, x)
            ty = tree_at(inner, y)
            if tx.n_vertices() + ty.n_vertices() > self.vertex_bound:
                return None
            m = inner.arity
            pos = next(
                p + 1
                for p, leaf in enumerate(tx.leaves())
                if leaf.label == i
            )
            tx2 = _relabel_leaves(tx, lambda j: j if j <= i else j + m - 1)
            ty2 = _relabel_leaves(ty, lambda l: i - 1 + l)
            grafted = graft_tree(tx2, pos, ty2)
            return self.index_of(compose_signature(outer, i, inner), grafted)

        return entry

    def _build_inclusion(self, X: EqSymSeq, levels: EqSymSeq) -> SymSeqMap:
        functions = []
        for n, per_rep in enumerate(X.levels):
            sp = space(X.colors, n)
            fns = {}
            for rep, data in per_rep.items():
                rep_sig = sp.sigs[rep]
                fns[rep] = tuple(
                    self.index_of(
                        rep_sig,
                        corolla(rep_sig, labeled=True, dec=(rep_sig.target, x)),
                    )
                    for x in range(data.size)
                )
            functions.append(fns)
        return SymSeqMap(X, levels, tuple(functions))


def free_operad(X: EqSymSeq, vertex_bound: int, N: int) -> FreeOperad:
    return FreeOperad(X, vertex_bound, N)


def adjunction_transpose(free: FreeOperad, O: TruncatedOperad, f: SymSeqMap) -> OperadMap:
    """The operad map out of a free operad matching a sequence map of
    generators: each decorated tree is evaluated by grafting the f-images
    of its decorations in O."""
    X = free.generators
    FX = free.operad
    assert f.source is X or f.source == X
    assert O.colors is X.colors
    G = X.colors.group

    def evaluate(t: Tree) -> tuple[Signature, int]:
        if t.children is None:
            sig = O.unit_signature(t.color)
            return sig, O.units[t.color]
        vsig = Signature(
            X.colors, tuple(ch.color for ch in t.children), t.color
        )
        acc_sig, acc = vsig, f.apply(vsig, t.dec[1])
        parts = [evaluate(ch) for ch in t.children]
        # graft narrow children first so no intermediate arity leaves the bound
        order = sorted(range(len(parts)), key=lambda j: parts[j][0].arity)
        grafted = [False] * len(parts)
        for j in order:
            slot = 1 + sum(
                parts[p][0].arity if grafted[p] else 1 for p in range(j)
            )
            sub_sig, sub = parts[j]
            acc = O.compose_entry(acc_sig, slot, sub_sig, acc, sub)
            acc_sig = compose_signature(acc_sig, slot, sub_sig)
            grafted[j] = True
        return acc_sig, acc

    functions = []
    for n, per_rep in enumerate(free.trees):
        sp = space(X.colors, n)
        fns = {}
        for rep, ts in per_rep.items():
            rep_sig = sp.sigs[rep]
            images = []
            for t in ts:
                planar_sig, val = evaluate(t)
                lam = Permutation(tuple(leaf.label for leaf in t.leaves()))
                back, val2 = O.levels.transport(
                    (G.identity, lam.inverse()), planar_sig, val
                )
                assert back == rep_sig
                images.append(val2)
            fns[rep] = tuple(images)
        functions.append(fns)
    cm = ColorMap(X.colors, O.colors, tuple(range(X.colors.size)))
    return OperadMap(FX, O, cm, tuple(functions))


# ------------------------------------------------------------ color change


def pullback_operad(phi: ColorMap, P: TruncatedOperad) -> TruncatedOperad:
    """Reindex levels along an equivariant color map; composition and
    units are inherited."""
    assert phi.dst is P.colors
    N = P.arity_bound
    levels = pullback(phi, P.levels)
    to_t, from_t = _transfer_routes(phi.src, phi.dst, phi.apply_sig, P.levels)
    units = tuple(
        from_t(Signature(phi.src, (c,), c), P.units[phi.table[c]])
        for c in range(phi.src.size)
    )

    def entry(outer, i, inner, x, y):
        z = P.composition_table(
            phi.apply_sig(outer), i, phi.apply_sig(inner)
        )[to_t(outer, x)[1]][to_t(inner, y)[1]]
        if z is None:
            return None
        return from_t(compose_signature(outer, i, inner), z)

    compose = _build_compose(phi.src, N, levels, entry)
    return TruncatedOperad(phi.src, N, levels, units, compose)


def pushforward_operad_injective(phi: ColorMap, O: TruncatedOperad) -> TruncatedOperad:
    """Extension by empty levels along an injective color map, plus free
    units at the colors outside the image."""
    if not phi.is_injective:
        raise UnsupportedOperationError(
            "pushforward of operads is only stored for injective color maps;"
            " free colimits over non-injective fibers have no finite table"
            " form here"
        )
    assert phi.src is O.colors
    N = O.arity_bound
    dst = phi.dst
    pushed = pushforward_injective(phi, O.levels)
    image = set(phi.table)
    fresh = [d for d in range(dst.size) if d not in image]
    levels = pushed
    seen_orbits = set()
    for d in fresh:
        sp1 = space(dst, 1)
        rep = sp1.rep_of(sp1.sig_index(Signature(dst, (d,), d)))
        if rep in seen_orbits:
            continue
        seen_orbits.add(rep)
        levels = disjoint_union(
            levels,
            free_orbit(dst, N, sp1.sigs[rep], sub_members=sp1.stabs[rep]),
        )
    pre = {phi.table[c]: c for c in range(phi.src.size)}

    def to_src_sig(sig: Signature) -> Signature:
        return Signature(
            phi.src, tuple(pre[c] for c in sig.sources), pre[sig.target]
        )

    to_s, from_s = _transfer_routes(dst, phi.src, to_src_sig, O.levels)

    units = []
    for d in range(dst.size):
        if d in pre:
            units.append(from_s(Signature(dst, (d,), d), O.units[pre[d]]))
        else:
            units.append(0)

    def entry(outer, i, inner, x, y):
        if any(c not in pre for c in outer.sources + (outer.target,)):
            # both operands live at fresh colors: necessarily unit o unit
            return 0
        s_out, xs = to_s(outer, x)
        s_in, ys = to_s(inner, y)
        z = O.composition_table(s_out, i, s_in)[xs][ys]
        if z is None:
            return None
        return from_s(compose_signature(outer, i, inner), z)

    compose = _build_compose(dst, N, levels, entry)
    return TruncatedOperad(dst, N, levels, tuple(units), compose)


def pushforward_operad_unit(phi: ColorMap, O: TruncatedOperad,
                            pushed: TruncatedOperad) -> OperadMap:
    """The inclusion of an operad into its injective pushforward.

    Level data at matching orbit representatives is literally shared, so
    the stored functions are identities."""
    functions = tuple(
        {rep: tuple(range(data.size)) for rep, data in per_rep.items()}
        for per_rep in O.levels.levels
    )
    return OperadMap(O, pushed, phi, functions)


# ------------------------------------------------------------ fixed points


def fixed_colors_set(colors: GSet, H: Subgroup) -> tuple[GSet, tuple[int, ...]]:
    """The H-fixed colors as a set with trivial group action, plus the
    embedding back into the original colors."""
    fixed = fixed_points_gset(colors, H)
    T = trivial_group()
    labels = tuple(colors.point_label(c) for c in fixed)
    return GSet(T, (tuple(range(len(fixed))),), labels), fixed


def fixed_operad(O: TruncatedOperad, H: Subgroup) -> TruncatedOperad:
    """Levels fixed by H through transports with identity slot
    permutation, over the H-fixed colors; symmetric groups still act."""
    assert H.parent is O.colors.group
    N = O.arity_bound
    new_colors, embed = fixed_colors_set(O.colors, H)
    G = O.colors.group

    def embed_sig(sig: Signature) -> Signature:
        return Signature(
            O.colors, tuple(embed[c] for c in sig.sources), embed[sig.target]
        )

    fixed_lists: list[dict] = []
    levels_data = []
    for n in range(N + 1):
        sp = space(new_colors, n)
        idn = Permutation.identity(n)
        per_rep = {}
        lists = {}
        for rep in sp.reps():
            old_sig = embed_sig(sp.sigs[rep])
            fixed = [
                x
                for x in O.levels.level_elements(old_sig)
                if all(
                    O.levels.transport((h, idn), old_sig, x)[1] == x
                    for h in H.members
                )
            ]
            if not fixed:
                continue
            pos = {x: i for i, x in enumerate(fixed)}
            rho = {}
            for s in sp.stabs[rep]:
                _, tau = sp.group.part(s)
                rho[s] = tuple(
                    pos[O.levels.transport((G.identity, tau), old_sig, x)[1]]
                    for x in fixed
                )
            per_rep[rep] = LevelData(len(fixed), rho)
            lists[rep] = tuple(fixed)
        levels_data.append(per_rep)
        fixed_lists.append(lists)
    levels = EqSymSeq(new_colors, N, tuple(levels_data))

    def to_old(sig: Signature, x: int) -> int:
        """Old-side index at embed_sig(sig) of the fixed element x at sig."""
        sp = space(new_colors, sig.arity)
        idx = sp.sig_index(sig)
        rep = sp.rep_of(idx)
        _, back = levels.transport_index(
            sp.group.inv[sp.transporter[idx]], sig, x
        )
        old_x = fixed_lists[sig.arity][rep][back]
        _, tau = sp.group.part(sp.transporter[idx])
        return O.levels.transport(
            (G.identity, tau), embed_sig(sp.sigs[rep]), old_x
        )[1]

    def from_old(sig: Signature, old_x: int) -> int:
        sp = space(new_colors, sig.arity)
        idx = sp.sig_index(sig)
        rep = sp.rep_of(idx)
        t = sp.transporter[idx]
        _, tau_b = sp.group.part(sp.group.inv[t])
        _, at_rep = O.levels.transport(
            (G.identity, tau_b), embed_sig(sig), old_x
        )
        pos = fixed_lists[sig.arity][rep].index(at_rep)
        return levels.transport_index(t, sp.sigs[rep], pos)[1]

    units = tuple(
        from_old(Signature(new_colors, (c,), c), O.units[embed[c]])
        for c in range(new_colors.size)
    )

    def entry(outer, i, inner, x, y):
        z = O.composition_table(embed_sig(outer), i, embed_sig(inner))[
            to_old(outer, x)
        ][to_old(inner, y)]
        if z is None:
            return None
        return from_old(compose_signature(outer, i, inner), z)

    compose = _build_compose(new_colors, N, levels, entry)
    return TruncatedOperad(new_colors, N, levels, units, compose)


def underlying_category(O: TruncatedOperad, H: Subgroup) -> FinCategory:
    """Objects are the H-fixed colors; arrows the H-fixed unary elements;
    composition is the unary grafting table."""
    if O.arity_bound < 1:
        raise ValueError("need arity 1 levels to form a category")
    FO = fixed_operad(O, H)
    k = FO.colors.size
    arrows = []
    of_arrow = []
    index = {}
    for c in range(k):
        for d in range(k):
            sig = Signature(FO.colors, (c,), d)
            for x in FO.levels.level_elements(sig):
                index[(c, d, x)] = len(arrows)
                arrows.append((c, d))
                of_arrow.append((sig, x))
    identities = tuple(index[(c, c, FO.units[c])] for c in range(k))
    compose = []
    for g, (gs, gt) in enumerate(arrows):
        row = []
        for f, (fs, ft) in enumerate(arrows):
            if ft != gs:
                row.append(None)
                continue
            gsig, gx = of_arrow[g]
            fsig, fx = of_arrow[f]
            z = FO.compose_entry(gsig, 1, fsig, gx, fx)
            row.append(index[(fs, gt, z)])
        compose.append(tuple(row))
    labels = tuple(FO.colors.point_label(c) for c in range(k))
    return FinCategory(k, tuple(arrows), identities, tuple(compose), labels)


def functor_on_fixed(F: OperadMap, H: Subgroup) -> Functor:
    """The induced functor between the H-fixed underlying categories.

    Arrow order in both categories follows the fixed-element order of
    the unary levels, so images are matched positionally."""
    CO = underlying_category(F.source, H)
    CP = underlying_category(F.target, H)
    O, P = F.source, F.target
    _, embed_o = fixed_colors_set(O.colors, H)
    _, embed_p = fixed_colors_set(P.colors, H)
    pos_p = {c: i for i, c in enumerate(embed_p)}
    obj_map = tuple(pos_p[F.color_map.table[c]] for c in embed_o)
    arr_map = []
    for c in range(CO.n_objects):
        for d in range(CO.n_objects):
            sig_o = Signature(O.colors, (embed_o[c],), embed_o[d])
            sig_p = F.color_map.apply_sig(sig_o)
            fixed_p = fixed_points_list(P, sig_p, H)
            for old_x in fixed_points_list(O, sig_o, H):
                _, img = F.apply(sig_o, old_x)
                arr_map.append(
                    CP.hom(obj_map[c], obj_map[d])[fixed_p.index(img)]
                )
    return Functor(CO, CP, obj_map, tuple(arr_map))


def fixed_points_list(O: TruncatedOperad, sig: Signature, H: Subgroup) -> list[int]:
    """Level elements fixed by every (h, identity) transport."""
    idn = Permutation.identity(sig.arity)
    return [
        x
        for x in O.levels.level_elements(sig)
        if all(O.levels.transport((h, idn), sig, x)[1] == x for h in H.members)
    ]


# ------------------------------------------------- slot-wise composition maps


def lambda_precompose(P: TruncatedOperad, B: Signature, C: Signature,
                      Lambda: Subgroup, kappa: tuple[int, ...]) -> dict:
    """Precompose fixed points with a compatible tuple of unary elements.

    kappa[i-1] is an element of P(b_i; c_i); compatibility demands
    g . kappa[sigma(i)] = kappa[i] for every (g, sigma) in Lambda.  Maps
    the Lambda-fixed points at C to those at B by grafting every slot."""
    n = C.arity
    if B.arity != n or B.target != C.target:
        raise ValueError("signatures must share arity and target")
    if not (stabilizes(Lambda, B) and stabilizes(Lambda, C)):
        raise ValueError("the subgroup does not stabilize both signatures")
    Pn = sigma_product(P.colors.group, n)
    assert Lambda.parent is Pn
    for pos in range(1, n + 1):
        usig = Signature(P.colors, (B.sources[pos - 1],), C.sources[pos - 1])
        assert 0 <= kappa[pos - 1] < P.levels.level_size(usig)
    id1 = Permutation.identity(1)
    for mem in Lambda.members:
        g, sigma = Pn.part(mem)
        for pos in range(1, n + 1):
            sp = sigma(pos)
            src = Signature(P.colors, (B.sources[sp - 1],), C.sources[sp - 1])
            moved_sig, moved = P.levels.transport((g, id1), src, kappa[sp - 1])
            want = Signature(P.colors, (B.sources[pos - 1],), C.sources[pos - 1])
            if moved_sig != want or moved != kappa[pos - 1]:
                raise ValueError("kappa is not compatible with the subgroup")

    out = {}
    fixed_b = fixed_points(P.levels, B, Lambda)
    for x in fixed_points(P.levels, C, Lambda):
        cur_sig, cur = C, x
        for pos in range(1, n + 1):
            usig = Signature(P.colors, (B.sources[pos - 1],), C.sources[pos - 1])
            cur = P.compose_entry(cur_sig, pos, usig, cur, kappa[pos - 1])
            cur_sig = compose_signature(cur_sig, pos, usig)
        assert cur_sig == B
        assert cur in fixed_b, "precomposition left the fixed points"
        out[x] = cur
    return out


def lambda_postcompose(P: TruncatedOperad, B: Signature, C: Signature,
                       Lambda: Subgroup, kappa0: int) -> dict:
    """Postcompose fixed points with a compatible unary element
    kappa0 in P(target B; target C); signatures share their sources."""
    n = B.arity
    if C.arity != n or B.sources != C.sources:
        raise ValueError("signatures must share their sources")
    if not (stabilizes(Lambda, B) and stabilizes(Lambda, C)):
        raise ValueError("the subgroup does not stabilize both signatures")
    Pn = sigma_product(P.colors.group, n)
    assert Lambda.parent is Pn
    usig = Signature(P.colors, (B.target,), C.target)
    assert 0 <= kappa0 < P.levels.level_size(usig)
    id1 = Permutation.identity(1)
    for mem in Lambda.members:
        g, _ = Pn.part(mem)
        moved_sig, moved = P.levels.transport((g, id1), usig, kappa0)
        if moved_sig != usig or moved != kappa0:
            raise ValueError("kappa is not compatible with the subgroup")
    out = {}
    fixed_c = fixed_points(P.levels, C, Lambda)
    for x in fixed_points(P.levels, B, Lambda):
        z = P.compose_entry(usig, 1, B, kappa0, x)
        assert z in fixed_c, "postcomposition left the fixed points"
        out[x] = z
    return out


def unary_inverse(P: TruncatedOperad, b: int, c: int, x: int) -> int | None:
    """Two-sided inverse of a unary element under grafting, if any."""
    fwd = Signature(P.colors, (b,), c)
    bwd = Signature(P.colors, (c,), b)
    for y in P.levels.level_elements(bwd):
        left = P.composition_table(fwd, 1, bwd)[x][y]
        right = P.composition_table(bwd, 1, fwd)[y][x]
        if left == P.units[c] and right == P.units[b]:
            return y
    return None


# ----------------------------------------------------------- map enumeration


def enumerate_color_maps(src: GSet, dst: GSet) -> list[ColorMap]:
    """All equivariant maps between color sets over the same group."""
    assert src.group is dst.group
    out = []
    for table in product(range(dst.size), repeat=src.size):
        ok = all(
            dst.apply(g, table[c]) == table[src.apply(g, c)]
            for g in src.group.elements()
            for c in range(src.size)
        )
        if ok:
            out.append(ColorMap(src, dst, tuple(table)))
    return out


def enumerate_operad_maps(O: TruncatedOperad, P: TruncatedOperad,
                          budget: int = 200_000) -> list[OperadMap]:
    """All operad maps, by filtering level-wise candidates through the
    unit and composition constraints."""
    out = []
    for cm in enumerate_color_maps(O.colors, P.colors):
        for f in hom_maps(O.levels, pullback(cm, P.levels), budget=budget):
            try:
                out.append(OperadMap(O, P, cm, f.functions))
            except AssertionError:
                continue
    return out


# ---------------------------------------------------------------- interchange


def operad_to_json(O: TruncatedOperad) -> dict:
    return {
        "arity_bound": O.arity_bound,
        "levels": seq_to_json(O.levels),
        "units": {str(c): u for c, u in enumerate(O.units)},
        "compose": [
            {
                "outer": list(okey[0]) + [okey[1]],
                "slot": i,
                "inner": list(ikey[0]) + [ikey[1]],
                "table": [list(row) for row in table],
            }
            for (okey, i, ikey), table in sorted(O.compose.items())
        ],
    }


def operad_from_json(colors: GSet, blob: dict) -> TruncatedOperad:
    """Inverse of operad_to_json; the constructor re-checks that every
    composable pair has a table of the right shape."""
    levels = seq_from_json(colors, blob["levels"])
    units = tuple(blob["units"][str(c)] for c in range(colors.size))
    compose = {}
    for entry in blob["compose"]:
        okey = (tuple(entry["outer"][:-1]), entry["outer"][-1])
        ikey = (tuple(entry["inner"][:-1]), entry["inner"][-1])
        table = tuple(tuple(row) for row in entry["table"])
        compose[(okey, entry["slot"], ikey)] = table
    return TruncatedOperad(colors, blob["arity_bound"], levels, units, compose)
