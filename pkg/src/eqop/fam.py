"""Per-arity families of subgroups of G x Sigma_n^op.

A family assigns to every arity n up to a bound a set of subgroups of
the product group, closed under passing to subgroups and under
conjugation.  Families decide which fixed-point data counts: a map is a
local weak equivalence when it is a bijection on Lambda-fixed points
for every family member Lambda stabilizing the signature at hand.

Closure is enforced exhaustively at construction, so family values are
canonical: two families are equal exactly when their member lists agree.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iproduct

from .grp import (
    FiniteGroup,
    GSet,
    Permutation,
    ProductSigmaOpGroup,
    Subgroup,
    conjugate,
    enumerate_subgroups,
    group_homomorphisms,
    product_sigma_op,
    symmetric_group,
)
from .tree import Signature, act_signature, all_signatures

# product groups G x Sigma_n^op are cached so subgroups built by different
# operations share a parent and compare equal
_PRODUCTS: dict[tuple[int, int], ProductSigmaOpGroup] = {}


def sigma_product(G: FiniteGroup, n: int) -> ProductSigmaOpGroup:
    key = (id(G), n)
    if key not in _PRODUCTS:
        _PRODUCTS[key] = product_sigma_op(G, n)
    return _PRODUCTS[key]


def _close_family_level(P: ProductSigmaOpGroup, seeds) -> tuple[Subgroup, ...]:
    """Smallest subgroup- and conjugation-closed set containing the seeds
    and the trivial subgroup."""
    found: set[tuple[int, ...]] = {(P.identity,)}
    frontier = [Subgroup(P, s.members) for s in seeds]
    found.update(s.members for s in frontier)
    while frontier:
        nxt = []
        for sub in frontier:
            grown = []
            induced, back = sub.induced_group()
            for small in enumerate_subgroups(induced, bound=P.order):
                grown.append(tuple(sorted(back[i] for i in small.members)))
            for x in P.elements():
                grown.append(conjugate(sub, x).members)
            for members in grown:
                if members not in found:
                    found.add(members)
                    nxt.append(Subgroup(P, members))
        frontier = nxt
    subs = [Subgroup(P, m) for m in found]
    subs.sort(key=lambda s: (len(s.members), s.members))
    return tuple(subs)


@dataclass(frozen=True)
class GSigmaFamily:
    """A family of subgroups of G x Sigma_n^op for each arity n <= bound."""

    group: FiniteGroup
    arity_bound: int
    per_arity: tuple[tuple[Subgroup, ...], ...]

    def __post_init__(self):
        assert len(self.per_arity) == self.arity_bound + 1
        for n, level in enumerate(self.per_arity):
            P = sigma_product(self.group, n)
            members = {s.members for s in level}
            assert len(members) == len(level), "duplicate family members"
            assert (P.identity,) in members, "family level must contain the trivial subgroup"
            ordered = sorted(level, key=lambda s: (len(s.members), s.members))
            assert list(level) == ordered, "family levels are stored sorted"
            for sub in level:
                assert sub.parent is P, "family member has a foreign parent group"
                induced, back = sub.induced_group()
                for small in enumerate_subgroups(induced, bound=P.order):
                    assert tuple(sorted(back[i] for i in small.members)) in members, (
                        "family level not closed under subgroups"
                    )
                for x in P.elements():
                    assert conjugate(sub, x).members in members, (
                        "family level not closed under conjugation"
                    )

    def level(self, n: int) -> tuple[Subgroup, ...]:
        if not 0 <= n <= self.arity_bound:
            raise ValueError(f"arity {n} outside family bound {self.arity_bound}")
        return self.per_arity[n]

    def product(self, n: int) -> ProductSigmaOpGroup:
        return sigma_product(self.group, n)

    def __eq__(self, other):
        return (
            isinstance(other, GSigmaFamily)
            and self.group is other.group
            and self.arity_bound == other.arity_bound
            and tuple(tuple(s.members for s in lvl) for lvl in self.per_arity)
            == tuple(tuple(s.members for s in lvl) for lvl in other.per_arity)
        )

    def __hash__(self):
        return hash(
            (
                id(self.group),
                self.arity_bound,
                tuple(tuple(s.members for s in lvl) for lvl in self.per_arity),
            )
        )


def family_all(G: FiniteGroup, N: int) -> GSigmaFamily:
    """Every subgroup of G x Sigma_n^op at each arity n <= N."""
    levels = []
    for n in range(N + 1):
        P = sigma_product(G, n)
        levels.append(tuple(enumerate_subgroups(P)))
    return GSigmaFamily(G, N, tuple(levels))


def family_graph(G: FiniteGroup, N: int) -> GSigmaFamily:
    """The graph subgroups: those meeting the permutation factor trivially.

    Built from pairs (H <= G, homomorphism H -> Sigma_n), which avoids
    enumerating the subgroup lattice of the full product group.
    """
    levels = []
    for n in range(N + 1):
        P = sigma_product(G, n)
        Sn = symmetric_group(n)
        found: set[tuple[int, ...]] = set()
        for H in enumerate_subgroups(G):
            induced, back = H.induced_group()
            for hom in group_homomorphisms(induced, Sn):
                members = tuple(
                    sorted(
                        P.index_of(back[i], Sn.perms[hom[i]].inverse())
                        for i in range(induced.order)
                    )
                )
                found.add(members)
        subs = [Subgroup(P, m) for m in found]
        subs.sort(key=lambda s: (len(s.members), s.members))
        levels.append(tuple(subs))
    return GSigmaFamily(G, N, tuple(levels))


def family_from_generators(G: FiniteGroup, N: int, seeds) -> GSigmaFamily:
    """Smallest family containing the seed subgroups."""
    per_arity_seeds: list[list[Subgroup]] = [[] for _ in range(N + 1)]
    for seed in seeds:
        parent = seed.parent
        if not isinstance(parent, ProductSigmaOpGroup) or parent.base is not G:
            raise ValueError("seed subgroup does not live over the given group")
        if parent.arity > N:
            raise ValueError("seed arity exceeds the family bound")
        per_arity_seeds[parent.arity].append(seed)
    levels = tuple(
        _close_family_level(sigma_product(G, n), per_arity_seeds[n])
        for n in range(N + 1)
    )
    return GSigmaFamily(G, N, levels)


@dataclass(frozen=True)
class EnoughUnitsResult:
    """Truthy iff every member's projection to G shows up at arity one;
    otherwise ``witness`` is the offending (arity, member)."""

    ok: bool
    witness: tuple[int, Subgroup] | None = None

    def __bool__(self):
        return self.ok


def has_enough_units(F: GSigmaFamily) -> EnoughUnitsResult:
    P1 = F.product(1)
    level_one = {s.members for s in F.level(1)}
    id1 = Permutation.identity(1)
    for n in range(F.arity_bound + 1):
        Pn = F.product(n)
        for sub in F.level(n):
            image = sorted({Pn.project(m) for m in sub.members})
            embedded = tuple(sorted(P1.index_of(g, id1) for g in image))
            if embedded not in level_one:
                return EnoughUnitsResult(False, (n, sub))
    return EnoughUnitsResult(True)


def stabilizes(Lambda: Subgroup, sig: Signature) -> bool:
    """Whether every (g, sigma) in the subgroup sends the signature to itself."""
    P = Lambda.parent
    if not isinstance(P, ProductSigmaOpGroup):
        raise TypeError("stabilizer test needs a product-with-permutations parent")
    if P.arity != sig.arity:
        raise ValueError("subgroup arity does not match signature arity")
    assert P.base is sig.colors.group
    return all(act_signature(P.part(m), sig) == sig for m in Lambda.members)


def stabilizer_family(F: GSigmaFamily, sig: Signature) -> list[Subgroup]:
    """The family members at the signature's arity that stabilize it."""
    return [sub for sub in F.level(sig.arity) if stabilizes(sub, sig)]


def enumerate_stabilized_signatures(Lambda: Subgroup, colors: GSet) -> list[Signature]:
    """All signatures a subgroup of G x Sigma_n^op stabilizes.

    The subgroup acts on positions {0..n} through its permutation parts
    (position 0 never moves).  A stabilized signature is determined by an
    independent choice, for each position orbit, of a color fixed by the
    projection of the position's stabilizer; the choice propagates along
    the orbit by c_{sigma(i)} = g^{-1} . c_i.
    """
    P = Lambda.parent
    if not isinstance(P, ProductSigmaOpGroup):
        raise TypeError("signature enumeration needs a product-with-permutations parent")
    assert P.base is colors.group
    n = P.arity
    G = colors.group
    positions = list(range(n + 1))

    def move(i: int, m: int) -> int:
        _, sigma = P.part(m)
        return i if i == 0 else sigma(i)

    remaining = set(positions)
    orbit_data = []
    while remaining:
        rep = min(remaining)
        orbit = {move(rep, m) for m in Lambda.members}
        remaining -= orbit
        stab_g = sorted(
            {P.project(m) for m in Lambda.members if move(rep, m) == rep}
        )
        fixed = [
            c
            for c in range(colors.size)
            if all(colors.action[g][c] == c for g in stab_g)
        ]
        # one transporting element per orbit position: rep -> j via (g, sigma)
        transport = {}
        for m in Lambda.members:
            j = move(rep, m)
            if j not in transport:
                transport[j] = G.inv[P.project(m)]
        orbit_data.append((rep, fixed, transport))

    out = []
    for combo in iproduct(*(fixed for _, fixed, _ in orbit_data)):
        values = [None] * (n + 1)
        for (rep, _, transport), c in zip(orbit_data, combo):
            for j, ginv in transport.items():
                values[j] = colors.action[ginv][c]
        sig = Signature(colors, tuple(values[1:]), values[0])
        out.append(sig)
    out.sort(key=lambda s: (s.target, s.sources))
    return out


def conjugacy_class_representatives(F: GSigmaFamily, n: int) -> list[Subgroup]:
    """One member per conjugacy class of the family's level at arity n."""
    P = F.product(n)
    seen: set[tuple[int, ...]] = set()
    reps = []
    for sub in F.level(n):
        if sub.members in seen:
            continue
        reps.append(sub)
        for x in P.elements():
            seen.add(conjugate(sub, x).members)
    return reps


def family_to_json(F: GSigmaFamily) -> dict:
    return {
        "arity_bound": F.arity_bound,
        "subgroups": {
            str(n): [list(s.members) for s in F.level(n)]
            for n in range(F.arity_bound + 1)
        },
    }


def family_from_json(G: FiniteGroup, blob: dict) -> GSigmaFamily:
    N = blob["arity_bound"]
    levels = []
    for n in range(N + 1):
        P = sigma_product(G, n)
        subs = [Subgroup(P, tuple(m)) for m in blob["subgroups"][str(n)]]
        subs.sort(key=lambda s: (len(s.members), s.members))
        levels.append(tuple(subs))
    return GSigmaFamily(G, N, tuple(levels))
