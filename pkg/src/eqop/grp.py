"""Finite groups as multiplication tables, permutations, products with a
reversed symmetric factor, subgroup enumeration, and finite group actions.

Every group here is a table: elements are indices ``0..order-1``, the
product of ``x`` and ``y`` is ``mul[x][y]``.  Sizes in this library stay
below a hundred elements, so tables keep every operation constant-time
and let invariants be checked exhaustively at construction.

Convention used throughout the package: a permutation stores its images
on positions ``1..n`` only.  Position ``0`` (the target slot of a
signature) is never moved; code acting on signatures handles it
separately.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product

SYMMETRIC_BOUND = 6
SUBGROUP_ENUM_BOUND = 48
ASSOC_CHECK_BOUND = 64


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of {1..n}, stored as the tuple (sigma(1), ..., sigma(n))."""

    image: tuple[int, ...]

    def __post_init__(self):
        n = len(self.image)
        assert sorted(self.image) == list(range(1, n + 1)), "image must be a bijection"

    @property
    def n(self) -> int:
        return len(self.image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    def __call__(self, i: int) -> int:
        assert 1 <= i <= self.n
        return self.image[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        # (self * other)(i) = self(other(i))
        assert self.n == other.n
        return Permutation(tuple(self.image[j - 1] for j in other.image))

    def inverse(self) -> "Permutation":
        out = [0] * self.n
        for i, j in enumerate(self.image, start=1):
            out[j - 1] = i
        return Permutation(tuple(out))

    def is_identity(self) -> bool:
        return all(self.image[i] == i + 1 for i in range(self.n))

    def cycle_string(self) -> str:
        seen, parts = set(), []
        for start in range(1, self.n + 1):
            if start in seen or self.image[start - 1] == start:
                continue
            cyc, cur = [start], self.image[start - 1]
            while cur != start:
                cyc.append(cur)
                cur = self.image[cur - 1]
            seen.update(cyc)
            parts.append("(" + " ".join(map(str, cyc)) + ")")
        return "".join(parts) or "e"


class FiniteGroup:
    """A finite group given by its multiplication table.

    Associativity, the identity laws, and the inverse table are verified
    exhaustively at construction for orders up to ASSOC_CHECK_BOUND.
    """

    def __init__(self, mul, labels=None, identity=None):
        self.mul: tuple[tuple[int, ...], ...] = tuple(tuple(row) for row in mul)
        self.order = len(self.mul)
        assert all(len(row) == self.order for row in self.mul)
        assert all(0 <= v < self.order for row in self.mul for v in row)
        if identity is None:
            identity = next(
                e
                for e in range(self.order)
                if all(self.mul[e][x] == x == self.mul[x][e] for x in range(self.order))
            )
        self.identity = identity
        assert all(
            self.mul[self.identity][x] == x == self.mul[x][self.identity]
            for x in range(self.order)
        )
        inv = []
        for x in range(self.order):
            y = next(y for y in range(self.order) if self.mul[x][y] == self.identity)
            assert self.mul[y][x] == self.identity
            inv.append(y)
        self.inv: tuple[int, ...] = tuple(inv)
        if self.order <= ASSOC_CHECK_BOUND:
            rng = range(self.order)
            for a in rng:
                row_a = self.mul[a]
                for b in rng:
                    ab = row_a[b]
                    row_b = self.mul[b]
                    for c in rng:
                        assert self.mul[ab][c] == row_a[row_b[c]], "mul not associative"
        self.labels: tuple[str, ...] | None = tuple(labels) if labels else None

    def element_label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)

    def elements(self) -> range:
        return range(self.order)

    def conjugate_element(self, x: int, y: int) -> int:
        """x y x^{-1}."""
        return self.mul[self.mul[x][y]][self.inv[x]]

    def __repr__(self):
        return f"{type(self).__name__}(order={self.order})"


class SymmetricGroup(FiniteGroup):
    """All permutations of {1..n} in lexicographic order of image tuples."""

    def __init__(self, n: int):
        perms = [Permutation(p) for p in permutations(range(1, n + 1))]
        index = {p: k for k, p in enumerate(perms)}
        mul = [[index[a * b] for b in perms] for a in perms]
        super().__init__(mul, labels=[p.cycle_string() for p in perms])
        self.degree = n
        self.perms: tuple[Permutation, ...] = tuple(perms)
        self._index = index

    def index_of_permutation(self, p: Permutation) -> int:
        return self._index[p]


class ProductSigmaOpGroup(FiniteGroup):
    """G x Sigma_n with the permutation factor multiplying in reversed order:

        (g, sigma) . (h, tau) = (g h, tau o sigma)

    so acting twice on a signature composes the permutation parts the way a
    right Sigma_n-action demands.  Carries the projection to G.
    """

    def __init__(self, base: FiniteGroup, arity: int):
        perms = [Permutation(p) for p in permutations(range(1, arity + 1))]
        parts = [(g, p) for g in base.elements() for p in perms]
        index = {part: k for k, part in enumerate(parts)}
        mul = [
            [index[(base.mul[g][h], tau * sigma)] for (h, tau) in parts]
            for (g, sigma) in parts
        ]
        labels = [
            f"({base.element_label(g)}, {sigma.cycle_string()})" for (g, sigma) in parts
        ]
        super().__init__(mul, labels=labels)
        self.base = base
        self.arity = arity
        self._parts: tuple[tuple[int, Permutation], ...] = tuple(parts)
        self._index = index

    def part(self, x: int) -> tuple[int, Permutation]:
        return self._parts[x]

    def index_of(self, g: int, sigma: Permutation) -> int:
        return self._index[(g, sigma)]

    def project(self, x: int) -> int:
        """The projection pi_n: G x Sigma_n^op -> G."""
        return self._parts[x][0]


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of a table group, stored as a sorted member list."""

    parent: FiniteGroup
    members: tuple[int, ...]

    def __post_init__(self):
        G = self.parent
        assert self.members == tuple(sorted(set(self.members)))
        assert G.identity in self.members
        s = set(self.members)
        for x in self.members:
            assert G.inv[x] in s
            for y in self.members:
                assert G.mul[x][y] in s, "member list not closed under mul"

    @classmethod
    def generated(cls, parent: FiniteGroup, generators) -> "Subgroup":
        got = {parent.identity}
        frontier = [x for x in generators if x not in got]
        got.update(frontier)
        while frontier:
            nxt = []
            for x in frontier:
                for y in list(got):
                    for z in (parent.mul[x][y], parent.mul[y][x]):
                        if z not in got:
                            got.add(z)
                            nxt.append(z)
            frontier = nxt
        return cls(parent, tuple(sorted(got)))

    @property
    def order(self) -> int:
        return len(self.members)

    def contains(self, x: int) -> bool:
        return x in set(self.members)

    def is_contained_in(self, other: "Subgroup") -> bool:
        assert self.parent is other.parent
        return set(self.members) <= set(other.members)

    def induced_group(self) -> tuple[FiniteGroup, tuple[int, ...]]:
        """The subgroup as a group in its own right, plus the member map
        from new indices back to parent indices."""
        pos = {m: i for i, m in enumerate(self.members)}
        mul = [
            [pos[self.parent.mul[a][b]] for b in self.members] for a in self.members
        ]
        labels = [self.parent.element_label(m) for m in self.members]
        return FiniteGroup(mul, labels=labels), self.members

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.members == other.members
        )

    def __hash__(self):
        return hash((id(self.parent), self.members))

    def __repr__(self):
        return f"Subgroup(order={len(self.members)}, members={self.members})"


def trivial_group() -> FiniteGroup:
    return cyclic_group(1)


def cyclic_group(m: int, labels=None) -> FiniteGroup:
    assert m >= 1
    mul = [[(i + j) % m for j in range(m)] for i in range(m)]
    if labels is None:
        labels = ["e"] if m == 1 else [str(k) for k in range(m)]
    return FiniteGroup(mul, labels=labels)


def symmetric_group(n: int, bound: int = SYMMETRIC_BOUND) -> SymmetricGroup:
    if n > bound:
        raise ValueError(f"symmetric group degree {n} exceeds bound {bound}")
    return SymmetricGroup(n)


def product_sigma_op(G: FiniteGroup, n: int) -> ProductSigmaOpGroup:
    import math

    if G.order * math.factorial(n) > 10_000:
        raise ValueError("product group too large")
    return ProductSigmaOpGroup(G, n)


def enumerate_subgroups(G: FiniteGroup, bound: int = SUBGROUP_ENUM_BOUND) -> list[Subgroup]:
    """All subgroups, ordered by (order, member list).

    Below order 16 this sweeps every subset containing the identity and
    keeps the closed ones; at and above 16 it grows subgroups by joining
    with cyclic subgroups until no new ones appear.
    """
    if G.order > bound:
        raise ValueError(f"group order {G.order} exceeds subgroup enumeration bound {bound}")
    if G.order < 16:
        found = []
        others = [x for x in G.elements() if x != G.identity]
        for mask in range(1 << len(others)):
            members = [G.identity] + [x for i, x in enumerate(others) if (mask >> i) & 1]
            s = set(members)
            if all(G.mul[x][y] in s for x in members for y in members):
                found.append(tuple(sorted(members)))
    else:
        found = set()
        cyclics = {Subgroup.generated(G, [x]).members for x in G.elements()}
        frontier = list(cyclics)
        found.update(frontier)
        found.add((G.identity,))
        while frontier:
            nxt = []
            for base in frontier:
                for cyc in cyclics:
                    if set(cyc) <= set(base):
                        continue
                    joined = Subgroup.generated(G, set(base) | set(cyc)).members
                    if joined not in found:
                        found.add(joined)
                        nxt.append(joined)
            frontier = nxt
    subs = [Subgroup(G, members) for members in found]
    subs.sort(key=lambda s: (len(s.members), s.members))
    return subs


@dataclass(frozen=True)
class GraphSubgroupResult:
    """Outcome of the graph-subgroup test.  Truthy iff the subgroup meets
    the permutation factor trivially; then ``h`` is its projection to G and
    ``phi`` the homomorphism h -> Sigma_n whose inverted graph it is."""

    is_graph: bool
    h: Subgroup | None = None
    phi: dict[int, Permutation] | None = None

    def __bool__(self):
        return self.is_graph


def is_graph_subgroup(gamma: Subgroup) -> GraphSubgroupResult:
    G = gamma.parent
    if not isinstance(G, ProductSigmaOpGroup):
        raise TypeError("graph-subgroup test needs a product-with-permutations parent")
    phi: dict[int, Permutation] = {}
    for m in gamma.members:
        g, sigma = G.part(m)
        if g == G.base.identity and not sigma.is_identity():
            return GraphSubgroupResult(False)
        # members have pairwise distinct G-parts once the line above passes
        assert g not in phi
        phi[g] = sigma.inverse()
    h = Subgroup(G.base, tuple(sorted(phi)))
    return GraphSubgroupResult(True, h, phi)


@dataclass(frozen=True)
class GSet:
    """A finite left action: ``action[g][x]`` is g applied to the point x."""

    group: FiniteGroup
    action: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        G = self.group
        assert len(self.action) == G.order
        size = self.size
        assert all(len(row) == size for row in self.action)
        assert self.action[G.identity] == tuple(range(size))
        for g in G.elements():
            for h in G.elements():
                gh = G.mul[g][h]
                for x in range(size):
                    assert self.action[gh][x] == self.action[g][self.action[h][x]]

    @property
    def size(self) -> int:
        return len(self.action[0]) if self.action else 0

    @classmethod
    def from_function(cls, group: FiniteGroup, size: int, f, labels=None) -> "GSet":
        rows = tuple(tuple(f(g, x) for x in range(size)) for g in group.elements())
        return cls(group, rows, tuple(labels) if labels else None)

    def apply(self, g: int, x: int) -> int:
        return self.action[g][x]

    def point_label(self, x: int) -> str:
        return self.labels[x] if self.labels else str(x)


def conjugate(sub: Subgroup, x: int) -> Subgroup:
    G = sub.parent
    return Subgroup(G, tuple(sorted(G.conjugate_element(x, m) for m in sub.members)))


def orbits(X: GSet) -> list[tuple[int, ...]]:
    remaining = set(range(X.size))
    out = []
    while remaining:
        seed = min(remaining)
        orbit = {X.action[g][seed] for g in X.group.elements()}
        remaining -= orbit
        out.append(tuple(sorted(orbit)))
    return out


def stabilizer(X: GSet, point: int) -> Subgroup:
    assert 0 <= point < X.size
    members = tuple(g for g in X.group.elements() if X.action[g][point] == point)
    return Subgroup(X.group, members)


def fixed_points_gset(X: GSet, H: Subgroup) -> tuple[int, ...]:
    assert H.parent is X.group
    return tuple(
        x for x in range(X.size) if all(X.action[h][x] == x for h in H.members)
    )


def left_cosets(G: FiniteGroup, sub: Subgroup) -> list[tuple[int, ...]]:
    assert sub.parent is G
    remaining = set(G.elements())
    out = []
    while remaining:
        r = min(remaining)
        coset = tuple(sorted(G.mul[r][h] for h in sub.members))
        remaining -= set(coset)
        out.append(coset)
    return out


def _greedy_generators(G: FiniteGroup) -> list[int]:
    gens: list[int] = []
    span = {G.identity}
    while len(span) < G.order:
        x = min(set(G.elements()) - span)
        gens.append(x)
        span = set(Subgroup.generated(G, gens).members)
    return gens


def group_homomorphisms(A: FiniteGroup, B: FiniteGroup) -> list[tuple[int, ...]]:
    """Every homomorphism A -> B, each returned as an image tuple indexed
    by elements of A.  Found by assigning images to a generating set and
    propagating along the multiplication table."""
    gens = _greedy_generators(A)
    if not gens:
        return [(B.identity,)]
    homs = []
    for images in product(B.elements(), repeat=len(gens)):
        h: dict[int, int] = {A.identity: B.identity}
        stack = [A.identity]
        ok = True
        while stack and ok:
            x = stack.pop()
            for gen, img in zip(gens, images):
                y = A.mul[x][gen]
                v = B.mul[h[x]][img]
                if y in h:
                    if h[y] != v:
                        ok = False
                        break
                else:
                    h[y] = v
                    stack.append(y)
        if not ok or len(h) != A.order:
            continue
        # propagation along a spanning tree fixed each value; recheck every
        # edge so the result is multiplicative everywhere
        if all(
            h[A.mul[x][gen]] == B.mul[h[x]][h[gen]]
            for x in A.elements()
            for gen in gens
        ):
            homs.append(tuple(h[x] for x in A.elements()))
    return homs


def group_to_json(G: FiniteGroup) -> dict:
    blob = {"order": G.order, "mul": [list(row) for row in G.mul]}
    if G.labels:
        blob["labels"] = list(G.labels)
    return blob


def group_from_json(blob: dict) -> FiniteGroup:
    return FiniteGroup(blob["mul"], labels=blob.get("labels"))
