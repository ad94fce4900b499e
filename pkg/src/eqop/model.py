"""Decision procedures for the three map classes of truncated equivariant
operads in finite sets: weak equivalences, fibrations, and trivial
fibrations relative to a family of stabilizer subgroups.

Everything is finite and exact.  Weak equivalences are levelwise
bijections on fixed points over the family together with essential
surjectivity on fixed colors; fibrations reduce to isomorphism lifting
on fixed underlying categories; trivial fibrations are characterized
twice (weak equivalence and fibration, versus fixed-point bijections
plus fixed-color surjectivity) and the two verdicts are asserted equal.
Generating cells carry exact lifting oracles, interval attachments
realize the cell pushouts with explicit retractions, and the seeded
suites replay the closure laws on randomized instances.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .cat import equivalent_objects, is_isofibration, pi0_setenriched
from .fam import (
    GSigmaFamily,
    conjugacy_class_representatives,
    family_graph,
    has_enough_units,
    stabilizer_family,
    stabilizes,
)
from .grp import (
    FiniteGroup,
    GSet,
    Subgroup,
    conjugate,
    cyclic_group,
    enumerate_subgroups,
    fixed_points_gset,
    left_cosets,
    trivial_group,
)
from .oper import (
    OperadMap,
    TruncatedOperad,
    _build_compose,
    _single_color_set,
    adjunction_transpose,
    compose_operad_maps,
    compose_signature,
    enumerate_operad_maps,
    fixed_colors_set,
    free_operad,
    functor_on_fixed,
    identity_operad_map,
    pullback_operad,
    pushforward_operad_injective,
    pushforward_operad_unit,
    terminal_operad,
    underlying_category,
    validate,
)
from .sym import (
    ColorMap,
    EqSymSeq,
    LevelData,
    SymSeqMap,
    disjoint_union,
    empty_seq,
    fixed_points,
    free_orbit,
    space,
)
from .tree import Signature


# ------------------------------------------------------------- seeded stream


_MASK64 = (1 << 64) - 1


class SplitMix64:
    """Deterministic 64-bit generator: the state walks by the golden-ratio
    increment and each output is finalized by the two-round xor-shift
    multiply mixer (constants 0xbf58476d1ce4e5b9, 0x94d049bb133111eb).
    Small, splittable, and stable across platforms, which is all the
    suites need from a source of randomness."""

    GAMMA = 0x9E3779B97F4A7C15

    def __init__(self, seed: int):
        self.seed = seed & _MASK64
        self._state = seed & _MASK64

    @staticmethod
    def _mix(z: int) -> int:
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
        return z ^ (z >> 31)

    def next64(self) -> int:
        self._state = (self._state + self.GAMMA) & _MASK64
        return self._mix(self._state)

    def randrange(self, n: int) -> int:
        assert n > 0
        # rejection keeps the draw unbiased for any modulus
        lim = _MASK64 + 1 - ((_MASK64 + 1) % n)
        while True:
            v = self.next64()
            if v < lim:
                return v % n

    def choice(self, seq):
        return seq[self.randrange(len(seq))]

    def chance(self, num: int, den: int) -> bool:
        return self.randrange(den) < num

    def derive(self, label: int) -> "SplitMix64":
        """An independent child stream; children with distinct labels can
        run in any order without affecting each other."""
        return SplitMix64(self._mix(self.seed ^ self._mix(label + self.GAMMA)))


# ------------------------------------------------------- fixture operads


def _identity_functions(levels: EqSymSeq) -> tuple:
    return tuple(
        {rep: tuple(range(data.size)) for rep, data in per_rep.items()}
        for per_rep in levels.levels
    )


def union_colors(A: GSet, B: GSet) -> GSet:
    """Disjoint union of two actions of the same group, B's points after A's."""
    assert A.group is B.group
    s = A.size
    rows = tuple(
        tuple(A.action[g]) + tuple(s + x for x in B.action[g])
        for g in A.group.elements()
    )
    la = A.labels or tuple(str(x) for x in range(A.size))
    lb = B.labels or tuple(str(x) for x in range(B.size))
    return GSet(A.group, rows, la + lb)


def fixed_color(G: FiniteGroup, label: str = "*") -> GSet:
    return GSet(G, tuple((0,) for _ in G.elements()), (label,))


def coset_colors(G: FiniteGroup, H: Subgroup, suffix: str = "") -> GSet:
    """Left cosets of H as a transitive action, labeled by representatives."""
    cosets = left_cosets(G, H)
    pos = {c: i for i, c in enumerate(cosets)}
    rows = []
    for g in G.elements():
        row = []
        for c in cosets:
            moved = tuple(sorted(G.mul[g][x] for x in c))
            row.append(pos[moved])
        rows.append(tuple(row))
    labels = tuple(f"[{G.element_label(c[0])}]{suffix}" for c in cosets)
    return GSet(G, tuple(rows), labels)


def blocks_operad(colors: GSet, block: tuple[int, ...], N: int) -> TruncatedOperad:
    """The operad of a partition of the colors into indiscrete blocks:
    exactly one unary element between colors in the same block, nothing
    anywhere else.  The partition must be compatible with the action."""
    G = colors.group
    for g in G.elements():
        for c in range(colors.size):
            for d in range(colors.size):
                same = block[c] == block[d]
                moved = block[colors.apply(g, c)] == block[colors.apply(g, d)]
                assert same == moved, "partition not preserved by the action"
    sp = space(colors, 1)
    data = {}
    for rep in sp.reps():
        sig = sp.sigs[rep]
        if block[sig.sources[0]] != block[sig.target]:
            continue
        data[rep] = LevelData(1, {s: (0,) for s in sp.stabs[rep]})
    levels = EqSymSeq(colors, N, tuple([{}, data] + [{} for _ in range(N - 1)]))
    compose = _build_compose(colors, N, levels, lambda *a: 0)
    units = tuple(0 for _ in range(colors.size))
    return TruncatedOperad(colors, N, levels, units, compose)


def discrete_operad(colors: GSet, N: int) -> TruncatedOperad:
    """Units only: the identity-arrows operad on the given colors."""
    return blocks_operad(colors, tuple(range(colors.size)), N)


def empty_operad(G: FiniteGroup, N: int) -> TruncatedOperad:
    """The operad on no colors at all."""
    colors = GSet(G, tuple(() for _ in G.elements()), ())
    return TruncatedOperad(colors, N, empty_seq(colors, N), (), {})


_POINT_GROUP = trivial_group()
"""Shared trivial group for the plain-set fixtures below; level spaces
and families compare groups by instance, so the fixture operads must
agree on one."""


def unit_operad(N: int) -> TruncatedOperad:
    """One color, one identity, nothing else."""
    return discrete_operad(GSet(_POINT_GROUP, ((0,),), ("*",)), N)


def interval_operad(N: int) -> TruncatedOperad:
    """Two colors joined by a unary isomorphism pair; the generating
    interval for isomorphism lifting."""
    colors = GSet(_POINT_GROUP, ((0, 1),), ("x0", "x1"))
    return blocks_operad(colors, (0, 0), N)


def interval_endpoint_map(N: int) -> OperadMap:
    """The endpoint inclusion of the one-color operad into the interval:
    a weak equivalence that fails isomorphism lifting."""
    eta = unit_operad(N)
    tilde = interval_operad(N)
    cm = ColorMap(eta.colors, tilde.colors, (0,))
    functions = tuple(
        {rep: (0,) for rep in per_rep} for per_rep in eta.levels.levels
    )
    return OperadMap(eta, tilde, cm, functions)


def parallel_endpoints_map(N: int) -> OperadMap:
    """Both endpoints at once: two discrete colors onto the interval.
    Levelwise a fibration everywhere it can be tested, yet isomorphism
    lifting fails, so it is not a fibration of operads."""
    colors = GSet(_POINT_GROUP, ((0, 1),), ("e0", "e1"))
    two = discrete_operad(colors, N)
    tilde = interval_operad(N)
    cm = ColorMap(two.colors, tilde.colors, (0, 1))
    functions = tuple(
        {rep: (0,) for rep in per_rep} for per_rep in two.levels.levels
    )
    return OperadMap(two, tilde, cm, functions)


# --------------------------------------------------------- classification


class FamilyUnitsError(ValueError):
    """Raised when a family cannot classify maps because some member's
    projection to the group is missing from the unary level."""


LOCAL_FIBRATION_CONSTANT = True
"""In finite sets every levelwise map is a fibration, so the local
fibration flag is identically true.  Kept explicit so the report shape
survives richer level structures."""


@dataclass(frozen=True)
class Classification:
    """Verdict table for one operad map against one family.

    The composite verdicts are assembled from the flags: a weak
    equivalence is local_we plus ess_surj, a fibration is local_fib plus
    path_lifting, and a trivial fibration is both at once.  ``witnesses``
    carries a failing signature/subgroup pair or color for every flag
    that came out false."""

    local_we: bool
    local_fib: bool
    local_trivfib: bool
    ess_surj: bool
    pi0_ess_surj: bool
    path_lifting: bool
    we: bool
    fib: bool
    trivfib: bool
    witnesses: dict = field(default_factory=dict)

    def __post_init__(self):
        assert self.we == (self.local_we and self.ess_surj)
        assert self.fib == (self.local_fib and self.path_lifting)
        assert self.trivfib == (self.we and self.fib)

    def flags(self) -> dict:
        return {
            "local_we": self.local_we,
            "local_fib": self.local_fib,
            "local_trivfib": self.local_trivfib,
            "ess_surj": self.ess_surj,
            "pi0_ess_surj": self.pi0_ess_surj,
            "path_lifting": self.path_lifting,
            "we": self.we,
            "fib": self.fib,
            "trivfib": self.trivfib,
        }


def _check_family(F: OperadMap, Fam: GSigmaFamily):
    O = F.source
    if Fam.group is not O.colors.group:
        raise ValueError("family and operad colors live over different groups")
    if Fam.arity_bound < O.arity_bound:
        raise ValueError(
            f"family bound {Fam.arity_bound} below operad bound {O.arity_bound}"
        )


def family_one_subgroups(Fam: GSigmaFamily) -> list[Subgroup]:
    """The unary family members, read as subgroups of the base group."""
    P1 = Fam.product(1)
    G = Fam.group
    out = []
    for sub in Fam.level(1):
        members = tuple(sorted(P1.project(m) for m in sub.members))
        out.append(Subgroup(G, members))
    return out


def _local_instances(F: OperadMap, Fam: GSigmaFamily):
    """Signature/subgroup pairs to test, with fixed points on both sides.

    Only orbit representatives are visited: families are closed under
    conjugation and transports give compatible bijections of fixed
    points, so the verdict at a representative settles its whole orbit.
    """
    O, P = F.source, F.target
    for n in range(O.arity_bound + 1):
        sp = space(O.colors, n)
        for idx in sp.reps():
            sig = sp.sigs[idx]
            for Lam in stabilizer_family(Fam, sig):
                fix_src = fixed_points(O.levels, sig, Lam)
                img = F.color_map.apply_sig(sig)
                fix_dst = fixed_points(P.levels, img, Lam)
                images = [F.apply(sig, x)[1] for x in fix_src]
                yield sig, Lam, fix_src, fix_dst, images


def is_local_weak_equivalence(F: OperadMap, Fam: GSigmaFamily):
    """Whether every induced map of fixed points over the family is a
    bijection.  Returns the verdict and a failing (signature, subgroup)
    pair when false."""
    _check_family(F, Fam)
    for sig, Lam, fix_src, fix_dst, images in _local_instances(F, Fam):
        if len(fix_src) != len(fix_dst) or len(set(images)) != len(fix_src):
            return False, (sig, Lam)
    return True, None


def is_local_trivial_fibration(F: OperadMap, Fam: GSigmaFamily):
    """Fixed-point surjectivity and injectivity over the family, checked
    separately; in finite sets this coincides with the local weak
    equivalence predicate and the suites exploit that as a cross-check."""
    _check_family(F, Fam)
    for sig, Lam, fix_src, fix_dst, images in _local_instances(F, Fam):
        seen = set()
        for y in images:
            if y in seen:
                return False, (sig, Lam, "fixed points identified")
            seen.add(y)
        for y in fix_dst:
            if y not in seen:
                return False, (sig, Lam, "fixed point not hit")
    return True, None


def is_F_essentially_surjective(F: OperadMap, Fam: GSigmaFamily):
    """Essential surjectivity of the induced functor on every fixed
    underlying category of the family's unary members."""
    _check_family(F, Fam)
    for H in family_one_subgroups(Fam):
        fun = functor_on_fixed(F, H)
        CP = fun.target
        hit = set(fun.obj_map)
        for d in CP.objects():
            if not any(equivalent_objects(CP, c, d) for c in hit):
                _, embed_p = fixed_colors_set(F.target.colors, H)
                return False, (H, embed_p[d])
    return True, None


def is_pi0_essentially_surjective(F: OperadMap, Fam: GSigmaFamily):
    """Surjectivity up to isomorphism through the homotopy-category
    pipeline stage.  A separate route from the functor-based check; for
    finite sets the two must agree and classify() asserts they do."""
    _check_family(F, Fam)
    for H in family_one_subgroups(Fam):
        CP0 = pi0_setenriched(underlying_category(F.target, H))
        _, embed_o = fixed_colors_set(F.source.colors, H)
        _, embed_p = fixed_colors_set(F.target.colors, H)
        pos = {c: i for i, c in enumerate(embed_p)}
        image_objects = {pos[F.color_map.table[c]] for c in embed_o}
        for d in CP0.objects():
            if d in image_objects:
                continue
            if not any(CP0.isos(c, d) for c in image_objects):
                return False, (H, embed_p[d])
    return True, None


def _path_lifting_witness(F: OperadMap, Fam: GSigmaFamily):
    for H in family_one_subgroups(Fam):
        if not is_isofibration(functor_on_fixed(F, H)):
            return H
    return None


def is_path_lifting(F: OperadMap, Fam: GSigmaFamily) -> bool:
    """Isomorphism lifting on every fixed underlying category: each iso
    out of an image object lifts with prescribed source and exact image."""
    _check_family(F, Fam)
    return _path_lifting_witness(F, Fam) is None


def _fixed_color_surjective(F: OperadMap, Fam: GSigmaFamily):
    for H in family_one_subgroups(Fam):
        image = {
            F.color_map.table[c] for c in fixed_points_gset(F.source.colors, H)
        }
        for d in fixed_points_gset(F.target.colors, H):
            if d not in image:
                return False, (H, d)
    return True, None


def classify(F: OperadMap, Fam: GSigmaFamily) -> Classification:
    """The full verdict table.  Requires the family to have enough units,
    since without them essential surjectivity is not even well behaved
    under composition.  The trivial-fibration verdict is computed twice,
    as weak-equivalence-and-fibration and as fixed-point bijections plus
    fixed-color surjectivity, and the two are asserted equal."""
    eu = has_enough_units(Fam)
    if not eu:
        n, sub = eu.witness
        raise FamilyUnitsError(
            f"family does not have enough units: the arity-{n} member with"
            f" elements {sub.members} projects to a subgroup of the base"
            " group that is missing from the unary level"
        )
    lw, wit_lw = is_local_weak_equivalence(F, Fam)
    lt, wit_lt = is_local_trivial_fibration(F, Fam)
    es, wit_es = is_F_essentially_surjective(F, Fam)
    p0, wit_p0 = is_pi0_essentially_surjective(F, Fam)
    assert es == p0, "the two essential-surjectivity routes disagree"
    wit_pl = _path_lifting_witness(F, Fam)
    pl = wit_pl is None
    cs, wit_cs = _fixed_color_surjective(F, Fam)

    we = lw and es
    fib = LOCAL_FIBRATION_CONSTANT and pl
    trivfib = we and fib
    assert trivfib == (lt and cs), (
        "dual trivial-fibration characterizations disagree"
    )

    witnesses = {}
    if wit_lw is not None:
        witnesses["local_we"] = wit_lw
    if wit_lt is not None:
        witnesses["local_trivfib"] = wit_lt
    if wit_es is not None:
        witnesses["ess_surj"] = wit_es
    if wit_p0 is not None:
        witnesses["pi0_ess_surj"] = wit_p0
    if wit_pl is not None:
        witnesses["path_lifting"] = wit_pl
    if wit_cs is not None:
        witnesses["fixed_color_surjectivity"] = wit_cs
    return Classification(
        local_we=lw,
        local_fib=LOCAL_FIBRATION_CONSTANT,
        local_trivfib=lt,
        ess_surj=es,
        pi0_ess_surj=p0,
        path_lifting=pl,
        we=we,
        fib=fib,
        trivfib=trivfib,
        witnesses=witnesses,
    )


def is_dwyer_kan(F: OperadMap, Fam: GSigmaFamily) -> bool:
    """Local weak equivalence plus surjectivity up to isomorphism through
    the homotopy-category route.  Must coincide with the weak-equivalence
    verdict; the equality with the direct route is asserted here and the
    acceptance suite compares against classify() wholesale."""
    lw, _ = is_local_weak_equivalence(F, Fam)
    p0, _ = is_pi0_essentially_surjective(F, Fam)
    es, _ = is_F_essentially_surjective(F, Fam)
    assert (lw and p0) == (lw and es)
    return lw and p0


# ----------------------------------------------------------- generating set


@dataclass(frozen=True)
class Cell:
    """One generating cell.  C1 cells add a free orbit of colors, TC1
    cells attach an interval along an orbit of colors, and C2 cells are
    the free-operad maps on an orbit of level elements; C2 instances keep
    their adjoint description (arity, stabilizer quotient, and which
    finite-set generator they tensor) so lifting is tested directly on
    fixed points instead of materializing free operads."""

    tag: str
    params: tuple
    description: str
    pair: tuple | None = None  # (source, target, map) when materialized

    def __post_init__(self):
        assert self.tag in ("C1", "C2", "TC1")


@dataclass(frozen=True)
class GeneratingSet:
    family: GSigmaFamily
    arity_bound: int
    cells: tuple[Cell, ...]

    def by_tag(self, tag: str) -> tuple[Cell, ...]:
        return tuple(c for c in self.cells if c.tag == tag)


def generating_cells(Fam: GSigmaFamily, N: int | None = None) -> GeneratingSet:
    """The generating cells for the family up to the arity bound.

    C1 and TC1 cells are materialized as actual operad maps over coset
    colors; C2 cells are recorded per conjugacy class of family members
    and per finite-set generator (empty-to-point for surjectivity,
    two-points-to-point for injectivity).  There are no cells of a
    fourth kind here: every map of finite sets is a fibration, so the
    trivial-cofibration side needs only the interval attachments."""
    if N is None:
        N = Fam.arity_bound
    if N > Fam.arity_bound:
        raise ValueError(f"requested bound {N} above family bound {Fam.arity_bound}")
    G = Fam.group
    cells = []
    for H in family_one_subgroups(Fam):
        src = empty_operad(G, N)
        dst = discrete_operad(coset_colors(G, H), N)
        cm = ColorMap(src.colors, dst.colors, ())
        mapping = OperadMap(src, dst, cm, tuple({} for _ in range(N + 1)))
        cells.append(
            Cell(
                "C1",
                (H,),
                f"no colors -> free orbit of colors at {H.members}",
                (src, dst, mapping),
            )
        )
    for n in range(N + 1):
        for Lam in conjugacy_class_representatives(Fam, n):
            for piece, shape in (("onto", "0 -> 1"), ("mono", "2 -> 1")):
                cells.append(
                    Cell(
                        "C2",
                        (n, Lam, piece),
                        f"arity-{n} orbit cell with quotient {Lam.members},"
                        f" tensored with {shape}",
                    )
                )
    for H in family_one_subgroups(Fam):
        src = discrete_operad(coset_colors(G, H, suffix="0"), N)
        both = union_colors(
            coset_colors(G, H, suffix="0"), coset_colors(G, H, suffix="1")
        )
        k = src.colors.size
        dst = blocks_operad(both, tuple(range(k)) + tuple(range(k)), N)
        cm = ColorMap(src.colors, both, tuple(range(k)))
        functions = tuple(
            {rep: (0,) for rep in per_rep} for per_rep in src.levels.levels
        )
        mapping = OperadMap(src, dst, cm, functions)
        cells.append(
            Cell(
                "TC1",
                (H,),
                f"orbit of colors at {H.members} -> orbit of intervals",
                (src, dst, mapping),
            )
        )
    return GeneratingSet(Fam, N, tuple(cells))


def materialize_orbit_cell(colors: GSet, sig: Signature, Lam: Subgroup,
                           piece: str, vertex_bound: int) -> OperadMap:
    """A concrete instance of a C2 cell at a stabilized signature: the
    free-operad map on (empty or doubled) orbit generators, truncated at
    the vertex bound."""
    n = sig.arity
    sp = space(colors, n)
    P = sp.group
    idx = sp.sig_index(sig)
    rep = sp.rep_of(idx)
    t = sp.transporter[idx]
    # move the quotient subgroup into the stabilizer of the representative
    members = tuple(
        sorted(P.mul[P.inv[t]][P.mul[s][t]] for s in Lam.members)
    )
    N = max(n, 1)
    X = free_orbit(colors, N, sp.sigs[rep], sub_members=members)
    tgt = free_operad(X, vertex_bound, N)
    if piece == "onto":
        src = free_operad(empty_seq(colors, N), vertex_bound, N)
        f = SymSeqMap(
            src.generators, tgt.operad.levels, tuple({} for _ in range(N + 1))
        )
        return adjunction_transpose(src, tgt.operad, f)
    assert piece == "mono"
    X2 = disjoint_union(X, X)
    src = free_operad(X2, vertex_bound, N)
    f = SymSeqMap(X2, tgt.operad.levels, _fold_functions(X2, tgt))
    return adjunction_transpose(src, tgt.operad, f)


def _fold_functions(X2: EqSymSeq, tgt) -> tuple:
    """Send both halves of doubled generators to the single copy inside
    the free operad's levels."""
    functions = []
    for m in range(X2.arity_bound + 1):
        per = {}
        for r, data in X2.levels[m].items():
            half = data.size // 2
            incl = tgt.inclusion.functions[m][r]
            per[r] = tuple(incl[x % half] for x in range(data.size))
        functions.append(per)
    return tuple(functions)


# ------------------------------------------------------------ lifting oracles


_CONJUGATES: dict = {}


def _conjugates(Lam: Subgroup) -> tuple[Subgroup, ...]:
    key = (id(Lam.parent), Lam.members)
    if key not in _CONJUGATES:
        P = Lam.parent
        seen = {}
        for t in P.elements():
            c = conjugate(Lam, t)
            seen[c.members] = c
        _CONJUGATES[key] = tuple(seen.values())
    return _CONJUGATES[key]


def _iso_lift_failure(F: OperadMap, H: Subgroup):
    """Direct search for an unliftable isomorphism on H-fixed categories."""
    fun = functor_on_fixed(F, H)
    C, D = fun.source, fun.target
    for c in C.objects():
        for d in D.objects():
            for phi in D.isos(fun.obj_map[c], d):
                found = False
                for c2 in C.objects():
                    if fun.obj_map[c2] != d:
                        continue
                    if any(fun.arr_map[psi] == phi for psi in C.isos(c, c2)):
                        found = True
                        break
                if not found:
                    return (c, d, phi)
    return None


def rlp(F: OperadMap, cells) -> tuple[bool, tuple | None]:
    """Exact right lifting property against a list of generating cells.

    C1 cells test surjectivity on fixed colors, TC1 cells run the direct
    isomorphism-lift search, and C2 cells test fixed-point surjectivity
    or injectivity over every conjugate of the cell's quotient subgroup
    that stabilizes a signature; orbit representatives suffice since the
    conjugates sweep each orbit.  Returns the verdict and, when false,
    the failing cell with its square data."""
    O, P = F.source, F.target
    cells = list(getattr(cells, "cells", cells))
    for cell in cells:
        if cell.tag == "C1":
            (H,) = cell.params
            image = {
                F.color_map.table[c]
                for c in fixed_points_gset(O.colors, H)
            }
            for d in fixed_points_gset(P.colors, H):
                if d not in image:
                    return False, (cell, (H, d))
        elif cell.tag == "TC1":
            (H,) = cell.params
            wit = _iso_lift_failure(F, H)
            if wit is not None:
                return False, (cell, (H,) + wit)
        elif cell.tag == "C2":
            n, Lam, piece = cell.params
            if n > O.arity_bound:
                raise ValueError(
                    f"cell arity {n} above operad bound {O.arity_bound}"
                )
            sp = space(O.colors, n)
            for idx in sp.reps():
                sig = sp.sigs[idx]
                for Lam2 in _conjugates(Lam):
                    if not stabilizes(Lam2, sig):
                        continue
                    fix_src = fixed_points(O.levels, sig, Lam2)
                    img = F.color_map.apply_sig(sig)
                    fix_dst = fixed_points(P.levels, img, Lam2)
                    images = [F.apply(sig, x)[1] for x in fix_src]
                    if piece == "onto":
                        if any(y not in images for y in fix_dst):
                            return False, (cell, (sig, Lam2))
                    else:
                        if len(set(images)) != len(images):
                            return False, (cell, (sig, Lam2))
        else:
            raise ValueError(f"unknown cell tag {cell.tag}")
    return True, None


def llp_sample(F: OperadMap, candidates, budget: int = 64,
               hom_budget: int = 200_000) -> dict:
    """Sampled left lifting property of F against a list of maps.

    This is explicitly not exhaustive: lifting squares are enumerated up
    to the budget and the report says how many were tried.  A False
    verdict is definite (a square with no filler is returned); True only
    means no counterexample within budget."""
    tried = 0
    for Gm in candidates:
        # squares F -> Gm: top O -> source(Gm), bottom target(F) -> target(Gm)
        tops = enumerate_operad_maps(F.source, Gm.source, budget=hom_budget)
        bottoms = enumerate_operad_maps(F.target, Gm.target, budget=hom_budget)
        for top in tops:
            for bottom in bottoms:
                lhs = compose_operad_maps(Gm, top)
                rhs = compose_operad_maps(bottom, F)
                if not _same_map(lhs, rhs):
                    continue
                tried += 1
                if tried > budget:
                    return {
                        "ok": True,
                        "exhaustive": False,
                        "squares_tested": tried - 1,
                        "witness": None,
                    }
                fillers = enumerate_operad_maps(F.target, Gm.source,
                                                budget=hom_budget)
                if not any(
                    _same_map(compose_operad_maps(f, F), top)
                    and _same_map(compose_operad_maps(Gm, f), bottom)
                    for f in fillers
                ):
                    return {
                        "ok": False,
                        "exhaustive": False,
                        "squares_tested": tried,
                        "witness": (Gm, top, bottom),
                    }
    return {"ok": True, "exhaustive": False, "squares_tested": tried, "witness": None}


def _same_map(a: OperadMap, b: OperadMap) -> bool:
    if a.color_map.table != b.color_map.table:
        return False
    return all(
        {r: tuple(v) for r, v in pa.items()} == {r: tuple(v) for r, v in pb.items()}
        for pa, pb in zip(a.functions, b.functions)
    )


# ------------------------------------------------------------- attachments


def attach_colors(O: TruncatedOperad, H: Subgroup) -> OperadMap:
    """Glue in a free orbit of colors with nothing but their units:
    the pushout along a C1 cell, returned as the inclusion of O."""
    G = O.colors.group
    assert H.parent is G
    big = union_colors(O.colors, coset_colors(G, H, suffix="+"))
    phi = ColorMap(O.colors, big, tuple(range(O.colors.size)))
    pushed = pushforward_operad_injective(phi, O)
    return pushforward_operad_unit(phi, O, pushed)


def pullback_operad_counit(psi: ColorMap, O: TruncatedOperad) -> OperadMap:
    """The projection from the pullback of O along a color map down to O.
    Levels of the pullback are stored at matching representatives, so the
    functions are identities."""
    P = pullback_operad(psi, O)
    return OperadMap(P, O, psi, _identity_functions(P.levels))


def attach_interval_pair(O: TruncatedOperad, H: Subgroup, a: int):
    """Interval attachment at an H-fixed color, with its retraction.

    New colors form a free orbit of cosets; every level over the enlarged
    colors is the old level at the signature with each new color replaced
    by its destination, so the inclusion is levelwise an isomorphism onto
    the old signatures and the whole map is a weak equivalence.  The
    retraction substitutes the new colors away; composed with the
    inclusion it is the identity of O, which makes these pairs the
    retract-closure probes for the suites."""
    G = O.colors.group
    assert H.parent is G
    if any(O.colors.apply(h, a) != a for h in H.members):
        raise ValueError(f"attachment color {a} is not fixed by {H.members}")
    cosets = left_cosets(G, H)
    big = union_colors(O.colors, coset_colors(G, H, suffix="~"))
    s = O.colors.size
    subst = ColorMap(
        big,
        O.colors,
        tuple(range(s)) + tuple(O.colors.apply(c[0], a) for c in cosets),
    )
    retr = pullback_operad_counit(subst, O)
    P = retr.source
    incl_cm = ColorMap(O.colors, big, tuple(range(s)))
    incl = OperadMap(O, P, incl_cm, _identity_functions(O.levels))
    return incl, retr


def attach_interval(O: TruncatedOperad, H: Subgroup, a: int) -> OperadMap:
    """The inclusion half of attach_interval_pair."""
    incl, _ = attach_interval_pair(O, H, a)
    return incl


# --------------------------------------------------------- random instances


_SUBGROUP_CACHE: dict = {}


def _subgroups(G: FiniteGroup) -> list[Subgroup]:
    if id(G) not in _SUBGROUP_CACHE:
        _SUBGROUP_CACHE[id(G)] = enumerate_subgroups(G)
    return _SUBGROUP_CACHE[id(G)]


def random_colors(G: FiniteGroup, rng: SplitMix64, max_orbits: int = 2) -> GSet:
    """A small color set assembled from fixed points and coset orbits."""
    parts = []
    n_orbits = 1 + rng.randrange(max_orbits)
    for i in range(n_orbits):
        if rng.chance(2, 3):
            parts.append(fixed_color(G, label=f"c{i}"))
        else:
            parts.append(coset_colors(G, rng.choice(_subgroups(G)), suffix=str(i)))
    colors = parts[0]
    for p in parts[1:]:
        colors = union_colors(colors, p)
    return colors


def _random_generators(colors: GSet, N: int, rng: SplitMix64,
                       pieces: int = 2) -> EqSymSeq:
    # the free operad must keep unary composition total under a vertex
    # bound, so its unary level may hold nothing beyond units: generators
    # are either all nullary or all of arity two and up (mixing the two,
    # or any unary generator, builds unary composites past every bound)
    if N >= 2 and rng.chance(2, 3):
        arities = list(range(2, N + 1))
    else:
        arities = [0]
    X = empty_seq(colors, N)
    for _ in range(1 + rng.randrange(pieces)):
        n = rng.choice(arities)
        sp = space(colors, n)
        rep = rng.choice(sp.reps())
        sub = sp.stabs[rep] if rng.chance(1, 2) else None
        X = disjoint_union(X, free_orbit(colors, N, sp.sigs[rep], sub_members=sub))
    return X


def _random_table_operad(colors: GSet, N: int, rng: SplitMix64,
                         tries: int = 40) -> TruncatedOperad | None:
    """Rejection sampling of small composition tables against the operad
    laws.  Random entries only make sense where equivariance cannot
    constrain them, so this arm runs on trivially-acted colors; the
    structured arms supply the genuinely equivariant instances."""
    if colors.group.order != 1:
        return None
    for _ in range(tries):
        levels_data: list[dict] = [dict() for _ in range(N + 1)]
        for n in range(N + 1):
            sp = space(colors, n)
            for rep in sp.reps():
                sig = sp.sigs[rep]
                diagonal = n == 1 and sig.sources[0] == sig.target
                if diagonal:
                    size = 1 + rng.randrange(2)
                elif rng.chance(1, 3):
                    size = 1 + rng.randrange(3)
                else:
                    continue
                levels_data[n][rep] = LevelData(
                    size, {s: tuple(range(size)) for s in sp.stabs[rep]}
                )
        levels = EqSymSeq(colors, N, tuple(levels_data))
        units = tuple(0 for _ in range(colors.size))

        def entry(outer, i, inner, x, y):
            if (
                inner.arity == 1
                and inner.sources[0] == inner.target
                and y == units[inner.target]
            ):
                return x
            if (
                outer.arity == 1
                and outer.sources[0] == outer.target
                and x == units[outer.target]
            ):
                return y
            out = levels.level_size(compose_signature(outer, i, inner))
            return rng.randrange(out)

        try:
            O = TruncatedOperad(
                colors, N, levels, units, _build_compose(colors, N, levels, entry)
            )
        except AssertionError:
            continue
        if validate(O).valid:
            return O
    return None


def random_operad(colors: GSet, N: int, rng: SplitMix64) -> TruncatedOperad:
    """One random valid operad over the given colors: terminal, discrete,
    free on random generators, or a rejection-sampled composition table
    (with the free arm as fallback when sampling keeps failing)."""
    arm = rng.randrange(4)
    if arm == 0:
        return terminal_operad(colors, N)
    if arm == 1:
        return discrete_operad(colors, N)
    if arm == 3:
        O = _random_table_operad(colors, N, rng)
        if O is not None:
            return O
    X = _random_generators(colors, N, rng)
    return free_operad(X, 2, N).operad


def _collapse_to_terminal(O: TruncatedOperad) -> OperadMap:
    T = terminal_operad(O.colors, O.arity_bound)
    cm = ColorMap(O.colors, O.colors, tuple(range(O.colors.size)))
    functions = tuple(
        {rep: tuple(0 for _ in range(data.size)) for rep, data in per_rep.items()}
        for per_rep in O.levels.levels
    )
    return OperadMap(O, T, cm, functions)


def _fold_free_map(colors: GSet, N: int, rng: SplitMix64) -> OperadMap:
    """Free operad on doubled generators folding onto the free operad on
    one copy; a color-fixing map that is usually not a weak equivalence."""
    X = _random_generators(colors, N, rng, pieces=1)
    tgt = free_operad(X, 2, N)
    X2 = disjoint_union(X, X)
    src = free_operad(X2, 2, N)
    f = SymSeqMap(X2, tgt.operad.levels, _fold_functions(X2, tgt))
    return adjunction_transpose(src, tgt.operad, f)


def _fixed_attachment_choices(O: TruncatedOperad, rng: SplitMix64):
    G = O.colors.group
    options = []
    for H in _subgroups(G):
        fixed = fixed_points_gset(O.colors, H)
        if fixed:
            options.append((H, fixed))
    if not options:
        return None
    H, fixed = rng.choice(options)
    return H, rng.choice(fixed)


def random_fixed_color_map(G: FiniteGroup, N: int, rng: SplitMix64) -> OperadMap:
    """A random operad map whose color map is an identity."""
    colors = random_colors(G, rng)
    arm = rng.randrange(4)
    if arm == 0:
        return identity_operad_map(random_operad(colors, N, rng))
    if arm == 1:
        return _collapse_to_terminal(random_operad(colors, N, rng))
    if arm == 2:
        return _fold_free_map(colors, N, rng)
    F = _fold_free_map(colors, N, rng)
    return compose_operad_maps(_collapse_to_terminal(F.target), F)


def random_map_from(O: TruncatedOperad, rng: SplitMix64) -> OperadMap:
    """A random map out of the given operad."""
    arm = rng.randrange(4)
    if arm == 0:
        return identity_operad_map(O)
    if arm == 1:
        return _collapse_to_terminal(O)
    choice = _fixed_attachment_choices(O, rng)
    if choice is None:
        return _collapse_to_terminal(O)
    H, a = choice
    if arm == 2:
        return attach_interval(O, H, a)
    return attach_colors(O, H)


def random_composable_pair(G: FiniteGroup, N: int, rng: SplitMix64,
                           hard: bool = False):
    """A composable pair of random operad maps.

    With ``hard`` set the pair is an interval attachment followed by its
    retraction: the target of the first leg has a whole orbit of colors
    outside the image, reachable only through the attached equivariant
    isomorphisms, and the composite is an identity.  This is the shape
    that exercises the right-leg two-out-of-three direction."""
    O = random_operad(random_colors(G, rng), N, rng)
    if hard:
        choice = _fixed_attachment_choices(O, rng)
        if choice is not None:
            H, a = choice
            proper = [S for S in _subgroups(G) if S.order < G.order
                      and all(O.colors.apply(h, a) == a for h in S.members)]
            if proper:
                H = rng.choice(proper)
            incl, retr = attach_interval_pair(O, H, a)
            return incl, retr
    first = random_map_from(O, rng)
    second = random_map_from(first.target, rng)
    return first, second


# ------------------------------------------------------------------- suites


@dataclass
class SuiteReport:
    """Aggregated pass/fail counts per check plus verbatim violations,
    ordered by trial index so reruns are comparable."""

    seed: int
    trials: int
    checks: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def record(self, trial: int, name: str, passed: bool, detail: str = ""):
        bucket = self.checks.setdefault(name, [0, 0])
        if passed:
            bucket[0] += 1
        else:
            bucket[1] += 1
            self.violations.append((trial, name, detail))

    def summary_lines(self) -> list[str]:
        lines = [f"seed={self.seed} trials={self.trials}"]
        for name in sorted(self.checks):
            p, f = self.checks[name]
            lines.append(f"{name}: {p} passed, {f} failed")
        for key in sorted(self.notes):
            lines.append(f"note {key}: {self.notes[key]}")
        lines.append("OK" if self.ok else f"{len(self.violations)} violations")
        return lines


def _two_of_three(report: SuiteReport, trial: int, kind: str,
                  left: bool, right: bool, comp: bool, context: str):
    if right and left:
        report.record(trial, f"{kind}-composite", comp,
                      f"{context}: legs hold, composite fails")
    if right and comp:
        report.record(trial, f"{kind}-left-leg", left,
                      f"{context}: right leg and composite hold, left fails")
    if left and comp:
        report.record(trial, f"{kind}-right-leg", right,
                      f"{context}: left leg and composite hold, right fails")


def two_out_of_three_suite(seed: int, trials: int, G: FiniteGroup | None = None,
                           Fam: GSigmaFamily | None = None,
                           N: int = 2) -> SuiteReport:
    """Randomized two-out-of-three check for weak equivalences and for
    the homotopy-route equivalences.  Every fifth trial uses the hard
    attachment/retraction pair.  Any violation is an implementation bug;
    the report lists them verbatim."""
    if G is None:
        G = cyclic_group(2)
    if Fam is None:
        Fam = family_graph(G, N)
    root = SplitMix64(seed)
    report = SuiteReport(seed, trials)
    for t in range(trials):
        rng = root.derive(t)
        F, Gm = random_composable_pair(G, N, rng, hard=(t % 5 == 0))
        Hm = compose_operad_maps(Gm, F)
        cf, cg, ch = classify(F, Fam), classify(Gm, Fam), classify(Hm, Fam)
        context = (
            f"colors {F.source.colors.size}->{F.target.colors.size}"
            f"->{Gm.target.colors.size}"
        )
        _two_of_three(report, t, "we", cf.we, cg.we, ch.we, context)
        dks = (
            is_dwyer_kan(F, Fam),
            is_dwyer_kan(Gm, Fam),
            is_dwyer_kan(Hm, Fam),
        )
        _two_of_three(report, t, "dk", dks[0], dks[1], dks[2], context)
        report.record(
            t, "dk-agrees-with-we",
            dks == (cf.we, cg.we, ch.we),
            f"{context}: homotopy route disagrees with the direct verdicts",
        )
    return report


def axiom_suite(seed: int, trials: int, G: FiniteGroup | None = None,
                Fam: GSigmaFamily | None = None, N: int = 2) -> SuiteReport:
    """Randomized closure checks: fiber-versus-global agreement on
    color-fixing maps, retract closure along attachment retractions, and
    closure of each class under composition.

    Fiber comparisons assert the two iff directions (weak equivalences
    and trivial fibrations) and the single forward direction for
    fibrations; how often the fibration converse fails is recorded as a
    note, never asserted."""
    if G is None:
        G = cyclic_group(2)
    if Fam is None:
        Fam = family_graph(G, N)
    root = SplitMix64(seed)
    report = SuiteReport(seed, trials)
    converse_failures = 0
    for t in range(trials):
        rng = root.derive(t)

        F = random_fixed_color_map(G, N, rng)
        c = classify(F, Fam)
        report.record(t, "fiber-we-iff", c.we == c.local_we,
                      "color-fixing map: global and fiber verdicts differ")
        report.record(t, "fiber-trivfib-iff", c.trivfib == c.local_trivfib,
                      "color-fixing map: trivial-fibration verdicts differ")
        report.record(t, "fiber-fib-forward", (not c.fib) or c.local_fib,
                      "a fibration must stay one in the fiber")
        if c.local_fib and not c.fib:
            converse_failures += 1

        base = random_map_from(random_operad(random_colors(G, rng), N, rng), rng)
        cs = _fixed_attachment_choices(base.source, rng)
        ct = _fixed_attachment_choices(base.target, rng)
        if cs is not None and ct is not None:
            i_s, r_s = attach_interval_pair(base.source, *cs)
            i_t, r_t = attach_interval_pair(base.target, *ct)
            big = compose_operad_maps(i_t, compose_operad_maps(base, r_s))
            back = compose_operad_maps(
                r_t, compose_operad_maps(big, i_s)
            )
            report.record(t, "retract-diagram", _same_map(back, base),
                          "retraction does not recover the original map")
            cb, c0 = classify(big, Fam), classify(base, Fam)
            for flag in ("we", "fib", "trivfib"):
                report.record(
                    t, f"retract-closure-{flag}",
                    (not cb.flags()[flag]) or c0.flags()[flag],
                    f"retract of a {flag} map lost the property",
                )

        F1, G1 = random_composable_pair(G, N, rng)
        H1 = compose_operad_maps(G1, F1)
        c1, c2, c3 = classify(F1, Fam), classify(G1, Fam), classify(H1, Fam)
        for flag in ("we", "fib", "trivfib"):
            report.record(
                t, f"compose-closure-{flag}",
                (not (c1.flags()[flag] and c2.flags()[flag])) or c3.flags()[flag],
                f"composite of two {flag} maps lost the property",
            )
    report.notes["fibration_fiber_converse_failures"] = converse_failures
    report.notes["group_order"] = G.order
    return report
