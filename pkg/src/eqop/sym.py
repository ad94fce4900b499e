"""Finite equivariant symmetric sequences over a color G-set.

A sequence assigns a finite set to every signature (arity bounded) with
bijective transports along the G x Sigma_n^op action on signatures.
Levels are stored once per orbit of the signature action: each orbit
representative carries its level plus a left action of its stabilizer,
and every other signature in the orbit is identified with the
representative along a fixed transporting element.  Transports between
arbitrary signatures are then derived, so the action laws hold by
construction and only the stabilizer action needs validating.

The element of a sequence "at signature D, index x" always means the
image of index x of the orbit representative under the chosen transport
to D.  All public operations speak this language.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .fam import sigma_product, stabilizes
from .grp import GSet, Permutation, ProductSigmaOpGroup, Subgroup
from .tree import ColoredForest, Signature, act_signature, g_dot_corolla, leaf_root

HOM_BUDGET_DEFAULT = 1_000_000


class BudgetExceeded(RuntimeError):
    def __init__(self, estimate: int, budget: int):
        super().__init__(f"enumeration would visit about {estimate} maps, budget {budget}")
        self.estimate = estimate
        self.budget = budget


# ---------------------------------------------------------- signature space


@dataclass(frozen=True)
class SigSpace:
    """All arity-n signatures with the product-group action materialized."""

    colors: GSet
    n: int
    group: ProductSigmaOpGroup
    sigs: tuple[Signature, ...]
    index: dict
    act: tuple[tuple[int, ...], ...]  # act[member][sig] -> sig
    orbit_rep: tuple[int, ...]  # sig -> representative sig
    transporter: tuple[int, ...]  # member t with act[t][rep] == sig
    stabs: dict  # rep sig -> tuple of members fixing it

    def rep_of(self, i: int) -> int:
        return self.orbit_rep[i]

    def reps(self) -> list[int]:
        return sorted(set(self.orbit_rep))

    def sig_index(self, sig: Signature) -> int:
        return self.index[(sig.sources, sig.target)]


_SPACES: dict = {}


def space(colors: GSet, n: int) -> SigSpace:
    key = (id(colors.group), colors.action, n)
    if key in _SPACES:
        return _SPACES[key]
    P = sigma_product(colors.group, n)
    sigs = []
    for target in range(colors.size):
        for sources in iproduct(range(colors.size), repeat=n):
            sigs.append(Signature(colors, sources, target))
    index = {(s.sources, s.target): i for i, s in enumerate(sigs)}
    act = []
    for m in range(P.order):
        g, sigma = P.part(m)
        rows = colors.action[g]
        images = sigma.image
        row = []
        for s in sigs:
            src = s.sources
            moved = (
                tuple(rows[src[j - 1]] for j in images),
                rows[s.target],
            )
            row.append(index[moved])
        act.append(tuple(row))
    act = tuple(act)
    orbit_rep = [-1] * len(sigs)
    transporter = [-1] * len(sigs)
    stabs = {}
    for i in range(len(sigs)):
        if orbit_rep[i] != -1:
            continue
        members = {}
        for m in range(P.order):
            j = act[m][i]
            if j not in members:
                members[j] = m
        for j, m in members.items():
            orbit_rep[j] = i
            transporter[j] = m
        stabs[i] = tuple(m for m in range(P.order) if act[m][i] == i)
    sp = SigSpace(
        colors,
        n,
        P,
        tuple(sigs),
        index,
        act,
        tuple(orbit_rep),
        tuple(transporter),
        stabs,
    )
    _SPACES[key] = sp
    return sp


# ------------------------------------------------------------ the sequences


@dataclass(frozen=True)
class LevelData:
    """A finite set of the given size with a left stabilizer action:
    rho[member] is the image tuple of the corresponding bijection."""

    size: int
    rho: dict

    def act(self, m: int, x: int) -> int:
        return self.rho[m][x]


@dataclass(frozen=True)
class EqSymSeq:
    """Levels per orbit representative, for each arity up to the bound."""

    colors: GSet
    arity_bound: int
    levels: tuple[dict, ...]  # levels[n][rep sig index] -> LevelData

    def __post_init__(self):
        assert len(self.levels) == self.arity_bound + 1
        for n, per_rep in enumerate(self.levels):
            sp = space(self.colors, n)
            for rep, data in per_rep.items():
                assert sp.orbit_rep[rep] == rep
                assert data.size > 0, "empty levels are stored implicitly"
                stab = sp.stabs[rep]
                assert set(data.rho) == set(stab)
                ident = sp.group.identity
                assert data.rho[ident] == tuple(range(data.size))
                for a in stab:
                    img_a = data.rho[a]
                    assert sorted(img_a) == list(range(data.size))
                    for b in stab:
                        ab = sp.group.mul[a][b]
                        img_b = data.rho[b]
                        assert all(
                            data.rho[ab][x] == img_a[img_b[x]]
                            for x in range(data.size)
                        ), "stabilizer action is not a left action"

    # ---- level access

    def space(self, n: int) -> SigSpace:
        return space(self.colors, n)

    def level_size(self, sig: Signature) -> int:
        if sig.arity > self.arity_bound:
            raise ValueError(f"arity {sig.arity} above bound {self.arity_bound}")
        sp = self.space(sig.arity)
        rep = sp.rep_of(sp.sig_index(sig))
        data = self.levels[sig.arity].get(rep)
        return data.size if data else 0

    def level_elements(self, sig: Signature) -> range:
        return range(self.level_size(sig))

    def transport_index(self, m: int, sig: Signature, x: int) -> tuple[Signature, int]:
        """Apply the transport of product-group member m at the signature:
        returns (act(m, sig), image index)."""
        n = sig.arity
        sp = self.space(n)
        i = sp.sig_index(sig)
        j = sp.act[m][i]
        rep = sp.rep_of(i)
        data = self.levels[n].get(rep)
        assert data is not None and 0 <= x < data.size
        P = sp.group
        # conjugate m into the stabilizer of the representative
        t_in = sp.transporter[i]
        t_out = sp.transporter[j]
        s = P.mul[P.inv[t_out]][P.mul[m][t_in]]
        return sp.sigs[j], data.rho[s][x]

    def transport(self, e: tuple[int, Permutation], sig: Signature, x: int):
        sp = self.space(sig.arity)
        return self.transport_index(sp.group.index_of(*e), sig, x)

    def total_size(self) -> int:
        out = 0
        for n, per_rep in enumerate(self.levels):
            sp = self.space(n)
            for rep, data in per_rep.items():
                orbit = sum(1 for r in sp.orbit_rep if r == rep)
                out += orbit * data.size
        return out


def empty_seq(colors: GSet, N: int) -> EqSymSeq:
    return EqSymSeq(colors, N, tuple({} for _ in range(N + 1)))


def free_orbit(colors: GSet, N: int, sig: Signature, sub_members=None) -> EqSymSeq:
    """The sequence with one stabilizer-orbit of elements at the orbit of
    the signature: left cosets of the given subgroup of the stabilizer
    (default trivial), acted on by left multiplication."""
    n = sig.arity
    sp = space(colors, n)
    rep = sp.rep_of(sp.sig_index(sig))
    stab = sp.stabs[rep]
    P = sp.group
    if sub_members is None:
        sub_members = (P.identity,)
    assert set(sub_members) <= set(stab)
    cosets = []
    seen = set()
    for s in stab:
        coset = frozenset(P.mul[s][u] for u in sub_members)
        if coset not in seen:
            seen.add(coset)
            cosets.append(coset)
    pos = {c: i for i, c in enumerate(cosets)}
    rho = {}
    for m in stab:
        rho[m] = tuple(pos[frozenset(P.mul[m][u] for u in c)] for c in cosets)
    levels = [dict() for _ in range(N + 1)]
    levels[n][rep] = LevelData(len(cosets), rho)
    return EqSymSeq(colors, N, tuple(levels))


def disjoint_union(X: EqSymSeq, Y: EqSymSeq) -> EqSymSeq:
    assert X.colors == Y.colors and X.arity_bound == Y.arity_bound
    levels = []
    for n in range(X.arity_bound + 1):
        merged = {}
        reps = set(X.levels[n]) | set(Y.levels[n])
        for rep in reps:
            a = X.levels[n].get(rep)
            b = Y.levels[n].get(rep)
            if a is None or b is None:
                merged[rep] = a or b
                continue
            rho = {
                m: a.rho[m] + tuple(a.size + v for v in b.rho[m]) for m in a.rho
            }
            merged[rep] = LevelData(a.size + b.size, rho)
        levels.append(merged)
    return EqSymSeq(X.colors, X.arity_bound, tuple(levels))


# ------------------------------------------------------------ representable


@dataclass(frozen=True)
class RepresentableSeq(EqSymSeq):
    """The hom-sequence of the translated-corolla forest of a signature.

    Levels are pairs (g, sigma) giving a symmetric-category map from the
    signature at hand onto component g of the forest.  Besides the usual
    left transports it carries the commuting right action of the full
    stabilizer of the base signature, which quotients consume.
    """

    base_sig: Signature = None
    right_group: Subgroup = None
    pair_lists: dict = None  # rep sig index -> tuple of (g, Permutation)
    right_rho: dict = None  # rep sig index -> {stab member: image tuple}


def representable(colors: GSet, sig: Signature, N: int | None = None) -> RepresentableSeq:
    """The sequence represented by the translated-corolla forest of sig."""
    n = sig.arity
    if N is None:
        N = n
    if n > N:
        raise ValueError(f"arity {n} above bound {N}")
    G = colors.group
    sp = space(colors, n)
    P = sp.group
    forest = g_dot_corolla(colors, sig)
    comp_sigs = [
        leaf_root(ColoredForest(colors, (forest.component(g),))) for g in G.elements()
    ]
    all_perms = sorted({P.part(m)[1] for m in P.elements()}, key=lambda p: p.image)
    levels = [dict() for _ in range(N + 1)]
    pair_lists = {}
    right_rho = {}
    stab_c = Subgroup(
        P,
        tuple(m for m in P.elements() if sp.act[m][sp.sig_index(sig)] == sp.sig_index(sig)),
    )
    for rep in sp.reps():
        d = sp.sigs[rep]
        pairs = []
        for g in G.elements():
            for sigma in all_perms:
                if act_signature((G.identity, sigma), d) == comp_sigs[g]:
                    pairs.append((g, sigma))
        if not pairs:
            continue
        pairs.sort(key=lambda p: (p[0], p[1].image))
        pos = {p: i for i, p in enumerate(pairs)}
        rho = {}
        for m in sp.stabs[rep]:
            h, tau = P.part(m)
            tau_inv = tau.inverse()
            rho[m] = tuple(
                pos[(G.mul[h][g], tau_inv * sigma)] for (g, sigma) in pairs
            )
        rrho = {}
        for m in stab_c.members:
            l, r = P.part(m)
            r_inv = r.inverse()
            rrho[m] = tuple(
                pos[(G.mul[g][l], sigma * r_inv)] for (g, sigma) in pairs
            )
        levels[n][rep] = LevelData(len(pairs), rho)
        pair_lists[rep] = tuple(pairs)
        right_rho[rep] = rrho
    return RepresentableSeq(
        colors,
        N,
        tuple(levels),
        base_sig=sig,
        right_group=stab_c,
        pair_lists=pair_lists,
        right_rho=right_rho,
    )


# ----------------------------------------------------------------- quotient


@dataclass(frozen=True)
class SymSeqMap:
    """An equivariant map: one function per orbit representative, indexed
    like the levels; equivariance makes the rest structural."""

    source: EqSymSeq
    target: EqSymSeq
    functions: tuple  # per arity: dict rep -> tuple of target indices

    def __post_init__(self):
        X, Y = self.source, self.target
        assert X.colors == Y.colors and X.arity_bound == Y.arity_bound
        for n in range(X.arity_bound + 1):
            sp = X.space(n)
            for rep, data in X.levels[n].items():
                f = self.functions[n].get(rep)
                assert f is not None and len(f) == data.size
                ydata = Y.levels[n].get(rep)
                assert ydata is not None, "map hits an empty level"
                for m in sp.stabs[rep]:
                    assert all(
                        f[data.rho[m][x]] == ydata.rho[m][f[x]]
                        for x in range(data.size)
                    ), "map does not commute with transports"

    def apply(self, sig: Signature, x: int) -> int:
        n = sig.arity
        sp = self.source.space(n)
        rep = sp.rep_of(sp.sig_index(sig))
        return self.functions[n][rep][x]

    def is_levelwise_bijective(self) -> bool:
        X, Y = self.source, self.target
        for n in range(X.arity_bound + 1):
            reps = set(X.levels[n]) | set(Y.levels[n])
            for rep in reps:
                sx = X.levels[n][rep].size if rep in X.levels[n] else 0
                sy = Y.levels[n][rep].size if rep in Y.levels[n] else 0
                if sx != sy:
                    return False
                if sx and len(set(self.functions[n][rep])) != sx:
                    return False
        return True


def identity_map(X: EqSymSeq) -> SymSeqMap:
    return SymSeqMap(
        X,
        X,
        tuple(
            {rep: tuple(range(data.size)) for rep, data in X.levels[n].items()}
            for n in range(X.arity_bound + 1)
        ),
    )


def compose_maps(g: SymSeqMap, f: SymSeqMap) -> SymSeqMap:
    assert f.target is g.source or f.target == g.source
    return SymSeqMap(
        f.source,
        g.target,
        tuple(
            {
                rep: tuple(g.functions[n][rep][v] for v in f.functions[n][rep])
                for rep in f.functions[n]
            }
            for n in range(f.source.arity_bound + 1)
        ),
    )


@dataclass(frozen=True)
class QuotientResult:
    seq: EqSymSeq
    projection: SymSeqMap


def quotient(X: EqSymSeq, Lambda: Subgroup) -> QuotientResult:
    """Levelwise orbits of the commuting right action of a subgroup of the
    base signature's stabilizer, with induced transports."""
    if len(Lambda.members) == 1:
        return QuotientResult(X, identity_map(X))
    if not isinstance(X, RepresentableSeq):
        raise TypeError("quotient needs the represented right action")
    if not (
        Lambda.parent is X.right_group.parent
        and set(Lambda.members) <= set(X.right_group.members)
    ):
        raise ValueError("subgroup does not stabilize the base signature")
    n = X.base_sig.arity
    levels = [dict(X.levels[k]) if k != n else {} for k in range(X.arity_bound + 1)]
    proj = [
        {rep: tuple(range(d.size)) for rep, d in X.levels[k].items()} if k != n else {}
        for k in range(X.arity_bound + 1)
    ]
    for rep, data in X.levels[n].items():
        rrho = X.right_rho[rep]
        orbit_of = list(range(data.size))

        def find(a):
            while orbit_of[a] != a:
                orbit_of[a] = orbit_of[orbit_of[a]]
                a = orbit_of[a]
            return a

        for m in Lambda.members:
            for x in range(data.size):
                a, b = find(x), find(rrho[m][x])
                if a != b:
                    orbit_of[max(a, b)] = min(a, b)
        roots = sorted({find(x) for x in range(data.size)})
        pos = {r: i for i, r in enumerate(roots)}
        cls = tuple(pos[find(x)] for x in range(data.size))
        rho = {}
        for m, img in data.rho.items():
            rho[m] = tuple(
                cls[img[roots[i]]] for i in range(len(roots))
            )
        levels[n][rep] = LevelData(len(roots), rho)
        proj[n][rep] = cls
    Q = EqSymSeq(X.colors, X.arity_bound, tuple(levels))
    return QuotientResult(Q, SymSeqMap(X, Q, tuple(proj)))


# -------------------------------------------------------------- fixed points


def fixed_points(X: EqSymSeq, sig: Signature, Lambda: Subgroup) -> list[int]:
    """Indices of the level at the signature fixed by every transport from
    the subgroup.  The subgroup must stabilize the signature."""
    if not stabilizes(Lambda, sig):
        raise ValueError("subgroup does not stabilize the signature")
    n = sig.arity
    sp = X.space(n)
    i = sp.sig_index(sig)
    rep = sp.rep_of(i)
    data = X.levels[n].get(rep)
    if data is None:
        return []
    P = sp.group
    t = sp.transporter[i]
    t_inv = P.inv[t]
    out = []
    for x in range(data.size):
        if all(
            data.rho[P.mul[t_inv][P.mul[m][t]]][x] == x for m in Lambda.members
        ):
            out.append(x)
    return out


# ------------------------------------------------------------------ hom sets


def _orbit_choices(sp: SigSpace, rep: int, xdata: LevelData, ydata):
    """Per stabilizer-orbit of the source level: (orbit as dicts, list of
    admissible images for the orbit representative)."""
    stab = sp.stabs[rep]
    size = xdata.size
    seen = [False] * size
    out = []
    for x0 in range(size):
        if seen[x0]:
            continue
        orbit = {}
        for m in stab:
            orbit.setdefault(xdata.rho[m][x0], m)
        for x in orbit:
            seen[x] = True
        stab_x = [m for m in stab if xdata.rho[m][x0] == x0]
        if ydata is None:
            candidates = []
        else:
            candidates = [
                y
                for y in range(ydata.size)
                if all(ydata.rho[m][y] == y for m in stab_x)
            ]
        out.append((x0, orbit, candidates))
    return out


def count_hom_maps(X: EqSymSeq, Y: EqSymSeq) -> int:
    """|hom(X, Y)| without enumerating the maps."""
    assert X.colors == Y.colors and X.arity_bound == Y.arity_bound
    total = 1
    for n in range(X.arity_bound + 1):
        sp = X.space(n)
        for rep, xdata in X.levels[n].items():
            ydata = Y.levels[n].get(rep)
            for _, _, candidates in _orbit_choices(sp, rep, xdata, ydata):
                total *= len(candidates)
                if total == 0:
                    return 0
    return total


def hom_maps(X: EqSymSeq, Y: EqSymSeq, budget: int = HOM_BUDGET_DEFAULT) -> list[SymSeqMap]:
    """Every equivariant map X -> Y, deterministically ordered."""
    estimate = count_hom_maps(X, Y)
    if estimate > budget:
        raise BudgetExceeded(estimate, budget)
    slots = []  # (n, rep, orbit, candidates)
    for n in range(X.arity_bound + 1):
        sp = X.space(n)
        for rep in sorted(X.levels[n]):
            xdata = X.levels[n][rep]
            ydata = Y.levels[n].get(rep)
            for x0, orbit, candidates in _orbit_choices(sp, rep, xdata, ydata):
                if not candidates:
                    return []
                slots.append((n, rep, orbit, sorted(candidates)))
    maps = []
    for combo in iproduct(*(cands for (_, _, _, cands) in slots)):
        functions = [
            {rep: [None] * data.size for rep, data in X.levels[n].items()}
            for n in range(X.arity_bound + 1)
        ]
        ok = True
        for (n, rep, orbit, _), y0 in zip(slots, combo):
            ydata = Y.levels[n][rep]
            for x, m in orbit.items():
                functions[n][rep][x] = ydata.rho[m][y0]
        for n in range(X.arity_bound + 1):
            for rep in functions[n]:
                functions[n][rep] = tuple(functions[n][rep])
        maps.append(SymSeqMap(X, Y, tuple(functions)))
    return maps


# ----------------------------------------------------------- change of color


@dataclass(frozen=True)
class ColorMap:
    """A G-equivariant map between color sets over the same group."""

    src: GSet
    dst: GSet
    table: tuple[int, ...]

    def __post_init__(self):
        assert self.src.group is self.dst.group
        assert len(self.table) == self.src.size
        G = self.src.group
        for g in G.elements():
            for c in range(self.src.size):
                assert self.table[self.src.action[g][c]] == self.dst.action[g][self.table[c]], (
                    "color map is not equivariant"
                )

    @property
    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def apply_sig(self, sig: Signature) -> Signature:
        return Signature(
            self.dst,
            tuple(self.table[c] for c in sig.sources),
            self.table[sig.target],
        )


def pullback(phi: ColorMap, Y: EqSymSeq) -> EqSymSeq:
    """Reindex levels along the color map: (phi* Y)(D) = Y(phi D)."""
    assert Y.colors == phi.dst
    levels = []
    for n in range(Y.arity_bound + 1):
        sp_src = space(phi.src, n)
        sp_dst = space(phi.dst, n)
        P = sp_src.group
        per = {}
        for rep in sp_src.reps():
            img = phi.apply_sig(sp_src.sigs[rep])
            size = Y.level_size(img)
            if size == 0:
                continue
            j = sp_dst.sig_index(img)
            jrep = sp_dst.rep_of(j)
            ydata = Y.levels[n][jrep]
            t = sp_dst.transporter[j]
            t_inv = P.inv[t]
            rho = {
                m: ydata.rho[P.mul[t_inv][P.mul[m][t]]] for m in sp_src.stabs[rep]
            }
            per[rep] = LevelData(size, rho)
        levels.append(per)
    return EqSymSeq(phi.src, Y.arity_bound, tuple(levels))


@dataclass(frozen=True)
class PushforwardResult:
    seq: EqSymSeq
    # class_of[n][dst rep][(src sig index, member, x)] -> level index
    class_of: tuple


def pushforward(phi: ColorMap, X: EqSymSeq) -> PushforwardResult:
    """Left Kan extension along the color map, as an explicit finite
    colimit: nodes (D, e, x) with e a morphism phi(D) -> R, glued along
    (D, e, x) ~ (u . D, e u^{-1}, u . x) for every member u."""
    assert X.colors == phi.src
    levels = []
    class_tables = []
    for n in range(X.arity_bound + 1):
        sp_src = space(phi.src, n)
        sp_dst = space(phi.dst, n)
        P = sp_src.group
        per = {}
        tables = {}
        phi_of = [sp_dst.sig_index(phi.apply_sig(s)) for s in sp_src.sigs]
        nonempty = [
            i
            for i in range(len(sp_src.sigs))
            if X.levels[n].get(sp_src.rep_of(i)) is not None
        ]
        for rep in sp_dst.reps():
            nodes = []
            for i in nonempty:
                size = X.levels[n][sp_src.rep_of(i)].size
                for e in range(P.order):
                    if sp_dst.act[e][phi_of[i]] == rep:
                        nodes.extend((i, e, x) for x in range(size))
            if not nodes:
                continue
            pos = {node: k for k, node in enumerate(nodes)}
            parent = list(range(len(nodes)))

            def find(a):
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                return a

            def union(a, b):
                ra, rb = find(a), find(b)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)

            for (i, e, x), k in pos.items():
                sig_i = sp_src.sigs[i]
                for u in range(P.order):
                    j = sp_src.act[u][i]
                    _, x2 = X.transport_index(u, sig_i, x)
                    e2 = P.mul[e][P.inv[u]]
                    union(k, pos[(j, e2, x2)])
            roots = sorted({find(k) for k in range(len(nodes))})
            root_pos = {r: c for c, r in enumerate(roots)}
            cls = {node: root_pos[find(k)] for node, k in pos.items()}
            rho = {}
            for m in sp_dst.stabs[rep]:
                img = [None] * len(roots)
                for (i, e, x), c in cls.items():
                    img[c] = cls[(i, P.mul[m][e], x)]
                rho[m] = tuple(img)
            per[rep] = LevelData(len(roots), rho)
            tables[rep] = cls
        levels.append(per)
        class_tables.append(tables)
    seq = EqSymSeq(phi.dst, X.arity_bound, tuple(levels))
    return PushforwardResult(seq, tuple(class_tables))


def pushforward_injective(phi: ColorMap, X: EqSymSeq) -> EqSymSeq:
    """Extension along an injective color map: levels carry over on
    signatures whose colors all come from the source, all others are empty."""
    assert phi.is_injective
    assert X.colors == phi.src
    back = {d: c for c, d in enumerate(phi.table)}
    levels = []
    for n in range(X.arity_bound + 1):
        sp_src = space(phi.src, n)
        sp_dst = space(phi.dst, n)
        P = sp_src.group
        per = {}
        for rep in sp_dst.reps():
            d = sp_dst.sigs[rep]
            if any(c not in back for c in d.sources) or d.target not in back:
                continue
            pre = Signature(
                phi.src, tuple(back[c] for c in d.sources), back[d.target]
            )
            size = X.level_size(pre)
            if size == 0:
                continue
            i = sp_src.sig_index(pre)
            irep = sp_src.rep_of(i)
            xdata = X.levels[n][irep]
            t = sp_src.transporter[i]
            t_inv = P.inv[t]
            rho = {
                m: xdata.rho[P.mul[t_inv][P.mul[m][t]]] for m in sp_dst.stabs[rep]
            }
            per[rep] = LevelData(size, rho)
        levels.append(per)
    return EqSymSeq(phi.dst, X.arity_bound, tuple(levels))


def pushforward_unit(phi: ColorMap, X: EqSymSeq, push: PushforwardResult | None = None) -> SymSeqMap:
    """The adjunction unit X -> phi* phi_! X."""
    if push is None:
        push = pushforward(phi, X)
    pull = pullback(phi, push.seq)
    functions = []
    for n in range(X.arity_bound + 1):
        sp_src = space(phi.src, n)
        sp_dst = space(phi.dst, n)
        P = sp_src.group
        per = {}
        for rep, data in X.levels[n].items():
            img = phi.apply_sig(sp_src.sigs[rep])
            j = sp_dst.sig_index(img)
            jrep = sp_dst.rep_of(j)
            t_inv = P.inv[sp_dst.transporter[j]]
            cls = push.class_of[n][jrep]
            per[rep] = tuple(cls[(rep, t_inv, x)] for x in range(data.size))
        functions.append(per)
    return SymSeqMap(X, pull, tuple(functions))


def adjunction_mate(phi: ColorMap, X: EqSymSeq, g: SymSeqMap, push: PushforwardResult) -> SymSeqMap:
    """Turn g: phi_! X -> Y into its mate X -> phi* Y."""
    Y = g.target
    pull = pullback(phi, Y)
    unit = pushforward_unit(phi, X, push)
    pull_g = pullback_map(phi, g)
    return compose_maps(pull_g, unit)


def pullback_map(phi: ColorMap, g: SymSeqMap) -> SymSeqMap:
    """Apply the pullback functor to a map between sequences over dst."""
    src = pullback(phi, g.source)
    dst = pullback(phi, g.target)
    functions = []
    for n in range(src.arity_bound + 1):
        sp_src = space(phi.src, n)
        sp_dst = space(phi.dst, n)
        per = {}
        for rep in src.levels[n]:
            img = phi.apply_sig(sp_src.sigs[rep])
            j = sp_dst.sig_index(img)
            jrep = sp_dst.rep_of(j)
            per[rep] = g.functions[n][jrep]
        functions.append(per)
    return SymSeqMap(src, dst, tuple(functions))


# --------------------------------------------------------------- interchange


def seq_to_json(X: EqSymSeq) -> dict:
    levels = []
    for n in range(X.arity_bound + 1):
        sp = X.space(n)
        for rep, data in sorted(X.levels[n].items()):
            sig = sp.sigs[rep]
            levels.append(
                {
                    "signature": list(sig.sources) + [sig.target],
                    "elements": data.size,
                    "transports": {
                        str(m): list(img) for m, img in sorted(data.rho.items())
                    },
                }
            )
    return {"arity_bound": X.arity_bound, "levels": levels}


def seq_from_json(colors: GSet, blob: dict) -> EqSymSeq:
    """Inverse of seq_to_json over an already-built color G-set.

    Serialized levels sit at orbit representatives; a signature that is
    not its own representative is rejected rather than silently moved."""
    N = blob["arity_bound"]
    levels: list[dict] = [dict() for _ in range(N + 1)]
    for entry in blob["levels"]:
        raw = entry["signature"]
        sig = Signature(colors, tuple(raw[:-1]), raw[-1])
        sp = space(colors, sig.arity)
        j = sp.sig_index(sig)
        if sp.rep_of(j) != j:
            raise ValueError(
                f"level stored at non-representative signature {sig.pretty()}"
            )
        rho = {int(m): tuple(img) for m, img in entry["transports"].items()}
        levels[sig.arity][j] = LevelData(entry["elements"], rho)
    return EqSymSeq(colors, N, tuple(levels))
