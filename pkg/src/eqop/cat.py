"""Finite categories and functors, with the checks the operad layer needs:
equivalences, isofibrations, the walking isomorphism, and amalgamation of
intervals by word rewriting."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product


@dataclass(frozen=True)
class FinCategory:
    """A finite category as explicit tables.

    ``arrows[i]`` is the (source, target) pair of arrow i, ``identities[c]``
    the identity arrow of object c, and ``compose[g][f]`` the composite
    g after f, or None when the pair is not composable.
    """

    n_objects: int
    arrows: tuple[tuple[int, int], ...]
    identities: tuple[int, ...]
    compose: tuple[tuple[int | None, ...], ...]
    object_labels: tuple[str, ...] | None = None

    def __post_init__(self):
        n, arr = self.n_objects, self.arrows
        assert len(self.identities) == n
        assert all(0 <= s < n and 0 <= t < n for s, t in arr)
        for c, i in enumerate(self.identities):
            assert arr[i] == (c, c)
        assert len(self.compose) == len(arr)
        for g in range(len(arr)):
            assert len(self.compose[g]) == len(arr)
            for f in range(len(arr)):
                gf = self.compose[g][f]
                composable = arr[f][1] == arr[g][0]
                assert (gf is not None) == composable
                if gf is not None:
                    assert self.arrows[gf] == (arr[f][0], arr[g][1])
        for f in range(len(arr)):
            s, t = arr[f]
            assert self.compose[f][self.identities[s]] == f
            assert self.compose[self.identities[t]][f] == f
        for f in range(len(arr)):
            for g in range(len(arr)):
                if arr[f][1] != arr[g][0]:
                    continue
                for h in range(len(arr)):
                    if arr[g][1] != arr[h][0]:
                        continue
                    left = self.compose[h][self.compose[g][f]]
                    right = self.compose[self.compose[h][g]][f]
                    assert left == right, "composition not associative"

    def objects(self) -> range:
        return range(self.n_objects)

    def hom(self, x: int, y: int) -> list[int]:
        return [i for i, (s, t) in enumerate(self.arrows) if s == x and t == y]

    def inverse(self, f: int) -> int | None:
        s, t = self.arrows[f]
        for g in self.hom(t, s):
            if (
                self.compose[g][f] == self.identities[s]
                and self.compose[f][g] == self.identities[t]
            ):
                return g
        return None

    def is_iso(self, f: int) -> bool:
        return self.inverse(f) is not None

    def isos(self, x: int, y: int) -> list[int]:
        return [f for f in self.hom(x, y) if self.is_iso(f)]

    def object_label(self, c: int) -> str:
        return self.object_labels[c] if self.object_labels else str(c)


@dataclass(frozen=True)
class Functor:
    source: FinCategory
    target: FinCategory
    obj_map: tuple[int, ...]
    arr_map: tuple[int, ...]

    def __post_init__(self):
        C, D = self.source, self.target
        assert len(self.obj_map) == C.n_objects
        assert len(self.arr_map) == len(C.arrows)
        for f, (s, t) in enumerate(C.arrows):
            assert D.arrows[self.arr_map[f]] == (self.obj_map[s], self.obj_map[t])
        for c in C.objects():
            assert self.arr_map[C.identities[c]] == D.identities[self.obj_map[c]]
        for f in range(len(C.arrows)):
            for g in range(len(C.arrows)):
                if C.arrows[f][1] != C.arrows[g][0]:
                    continue
                lhs = self.arr_map[C.compose[g][f]]
                rhs = D.compose[self.arr_map[g]][self.arr_map[f]]
                assert lhs == rhs, "functor does not preserve composition"


def identity_functor(C: FinCategory) -> Functor:
    return Functor(C, C, tuple(C.objects()), tuple(range(len(C.arrows))))


def compose_functors(G: Functor, F: Functor) -> Functor:
    assert F.target == G.source
    return Functor(
        F.source,
        G.target,
        tuple(G.obj_map[c] for c in F.obj_map),
        tuple(G.arr_map[f] for f in F.arr_map),
    )


# ----------------------------------------------------------- small shapes


def _category_from_homs(n: int, homs, labels=None) -> FinCategory:
    """Category with every hom a singleton whenever homs[(x, y)] is True;
    composition is then forced."""
    arrows = []
    index = {}
    for x in range(n):
        for y in range(n):
            if homs(x, y):
                index[(x, y)] = len(arrows)
                arrows.append((x, y))
    identities = tuple(index[(x, x)] for x in range(n))
    compose = []
    for g, (gs, gt) in enumerate(arrows):
        row = []
        for f, (fs, ft) in enumerate(arrows):
            row.append(index[(fs, gt)] if ft == gs else None)
        compose.append(tuple(row))
    return FinCategory(n, tuple(arrows), identities, tuple(compose), labels)


def point() -> FinCategory:
    """One object, one arrow."""
    return _category_from_homs(1, lambda x, y: True)


def walking_arrow() -> FinCategory:
    """Objects 0, 1 and a single non-identity arrow 0 -> 1."""
    return _category_from_homs(2, lambda x, y: x <= y)


def walking_iso() -> FinCategory:
    """Objects 0, 1 with exactly one arrow in every hom set."""
    return _category_from_homs(2, lambda x, y: True)


def discrete_category(n: int) -> FinCategory:
    return _category_from_homs(n, lambda x, y: x == y)


def disjoint_union_cat(C: FinCategory, D: FinCategory) -> FinCategory:
    no, na = C.n_objects, len(C.arrows)
    arrows = C.arrows + tuple((s + no, t + no) for s, t in D.arrows)
    identities = C.identities + tuple(i + na for i in D.identities)
    compose = []
    for g in range(len(arrows)):
        row = []
        for f in range(len(arrows)):
            if g < na and f < na:
                row.append(C.compose[g][f])
            elif g >= na and f >= na:
                v = D.compose[g - na][f - na]
                row.append(None if v is None else v + na)
            else:
                row.append(None)
        compose.append(tuple(row))
    return FinCategory(C.n_objects + D.n_objects, arrows, identities, tuple(compose))


# ------------------------------------------------------------- the checks


def essentially_surjective(F: Functor) -> bool:
    D = F.target
    hit = set(F.obj_map)
    return all(
        any(D.isos(c, d) for c in hit) for d in D.objects()
    )


def fully_faithful(F: Functor) -> bool:
    C, D = F.source, F.target
    for x in C.objects():
        for y in C.objects():
            images = [F.arr_map[f] for f in C.hom(x, y)]
            if len(set(images)) != len(images):
                return False
            if set(images) != set(D.hom(F.obj_map[x], F.obj_map[y])):
                return False
    return True


def is_equivalence(F: Functor) -> bool:
    return fully_faithful(F) and essentially_surjective(F)


def is_isofibration(F: Functor) -> bool:
    """Every isomorphism out of an image object lifts to an isomorphism
    with the prescribed source and exact image."""
    C, D = F.source, F.target
    for c in C.objects():
        for d in D.objects():
            for phi in D.isos(F.obj_map[c], d):
                lifted = any(
                    F.arr_map[psi] == phi
                    for c2 in C.objects()
                    if F.obj_map[c2] == d
                    for psi in C.isos(c, c2)
                )
                if not lifted:
                    return False
    return True


def pi0_setenriched(C: FinCategory) -> FinCategory:
    """For Set enrichment the homotopy-category construction is the
    identity: every object is fibrant and hom objects are their own sets
    of points.  Kept as an explicit pipeline stage."""
    return C


def equivalent_objects(C: FinCategory, c: int, d: int) -> bool:
    P = pi0_setenriched(C)
    return c == d or bool(P.isos(c, d))


def virtually_equivalent(C: FinCategory, c: int, d: int) -> bool:
    return equivalent_objects(C, c, d)


def homotopy_equivalent(C: FinCategory, c: int, d: int) -> bool:
    return equivalent_objects(C, c, d)


def categories_isomorphic(C: FinCategory, D: FinCategory) -> bool:
    if C.n_objects != D.n_objects or len(C.arrows) != len(D.arrows):
        return False
    for obj in permutations(range(C.n_objects)):
        homs_match = all(
            len(C.hom(x, y)) == len(D.hom(obj[x], obj[y]))
            for x in range(C.n_objects)
            for y in range(C.n_objects)
        )
        if not homs_match:
            continue
        slots = [
            (f, D.hom(obj[C.arrows[f][0]], obj[C.arrows[f][1]]))
            for f in range(len(C.arrows))
        ]
        for combo in product(*(cands for _, cands in slots)):
            if len(set(combo)) != len(combo):
                continue
            arr = [None] * len(C.arrows)
            for (f, _), img in zip(slots, combo):
                arr[f] = img
            ok = all(
                arr[C.identities[c]] == D.identities[obj[c]] for c in C.objects()
            ) and all(
                arr[C.compose[g][f]] == D.compose[arr[g]][arr[f]]
                for f in range(len(C.arrows))
                for g in range(len(C.arrows))
                if C.arrows[f][1] == C.arrows[g][0]
            )
            if ok:
                return True
    return False


# -------------------------------------------------------------- intervals


def is_interval(C: FinCategory) -> bool:
    """The Set-enriched intervals on objects {0, 1}: both objects present
    and every hom a singleton, which forces the two cross arrows to be
    mutually inverse."""
    return C.n_objects == 2 and all(
        len(C.hom(x, y)) == 1 for x in range(2) for y in range(2)
    )


def amalgamate_intervals(I: FinCategory, J: FinCategory) -> FinCategory:
    """Glue two intervals end to end and restrict to the outer objects.

    Builds the three-object amalgam generated by I on {0,1} and J on
    {1,2}, reduces words with the four inverse-pair rules, and returns the
    full subcategory on {0,2} relabeled to {0,1}."""
    if not (is_interval(I) and is_interval(J)):
        raise ValueError("amalgamation needs two intervals")
    # generators: a: 0->1, A: 1->0 from I; b: 1->2, B: 2->1 from J
    gen_src = {"a": 0, "A": 1, "b": 1, "B": 2}
    gen_tgt = {"a": 1, "A": 0, "b": 2, "B": 1}
    cancel = {("A", "a"), ("a", "A"), ("B", "b"), ("b", "B")}

    def reduce(word: tuple[str, ...]) -> tuple[str, ...]:
        out = []
        for s in word:
            if out and (s, out[-1]) in cancel:
                out.pop()
            else:
                out.append(s)
        return tuple(out)

    words = {(): None}
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            here = gen_tgt[w[-1]] if w else None
            for s in gen_src:
                if w and gen_src[s] != here:
                    continue
                r = reduce(w + (s,))
                assert len(r) <= 4, "interval amalgam rewriting escaped its bound"
                if r not in words:
                    words[r] = None
                    nxt.append(r)
        frontier = nxt

    homs = {}
    for w in words:
        if w:
            homs.setdefault((gen_src[w[0]], gen_tgt[w[-1]]), []).append(w)
    # identities are the empty word; nonempty reduced endo-words must vanish
    assert not homs.get((0, 0)) and not homs.get((2, 2))
    assert len(homs.get((0, 2), [])) == 1 and len(homs.get((2, 0), [])) == 1
    return _category_from_homs(2, lambda x, y: True)


def cat_to_json(C: FinCategory) -> dict:
    triples = [
        [g, f, C.compose[g][f]]
        for g in range(len(C.arrows))
        for f in range(len(C.arrows))
        if C.compose[g][f] is not None
    ]
    return {
        "objects": C.n_objects,
        "arrows": [list(a) for a in C.arrows],
        "identities": list(C.identities),
        "compose": triples,
    }


def cat_from_json(blob: dict) -> FinCategory:
    n = blob["objects"]
    arrows = tuple(tuple(a) for a in blob["arrows"])
    identities = tuple(blob["identities"])
    table = [[None] * len(arrows) for _ in arrows]
    for g, f, gf in blob["compose"]:
        table[g][f] = gf
    return FinCategory(n, arrows, identities, tuple(tuple(r) for r in table))
