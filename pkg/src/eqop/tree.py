"""Signatures, their group action, colored rooted trees and forests.

A signature is an ordered list of source colors plus one target color,
written (c1,...,cn;c0).  The product group G x Sigma_n^op acts on
signatures on the left by

    act((g,sigma), C)_i = g . c_{sigma(i)}        (positions 1..n)
    act((g,sigma), C)_0 = g . c_0                 (sigma never moves 0)

Trees are stored planar as nested nodes.  A bare edge (children=None) is
a leaf; a childless vertex (children=()) is a stump, an ordinary vertex
of arity zero.  The vertex-free tree, a single bare edge of color c, is
admitted and has leaf-root signature (c;c); it indexes operad units.

Leaves may carry integer labels (markers into the positions of a fixed
signature) and vertices may carry opaque decorations; both ride along
through grafting, canonicalization, and isomorphism search.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from itertools import permutations, product

from .grp import GSet, Permutation

TREE_VERTEX_BOUND = 4


@dataclass(frozen=True)
class Signature:
    """Source colors plus target color, indices into a fixed color G-set."""

    colors: GSet
    sources: tuple[int, ...]
    target: int

    def __post_init__(self):
        size = self.colors.size
        assert 0 <= self.target < size
        assert all(0 <= c < size for c in self.sources)

    @property
    def arity(self) -> int:
        return len(self.sources)

    def pretty(self) -> str:
        names = [self.colors.point_label(c) for c in self.sources]
        return "(" + ",".join(names) + ";" + self.colors.point_label(self.target) + ")"


def act_signature(e: tuple[int, Permutation], sig: Signature) -> Signature:
    """Left action of (g, sigma) on a signature; sigma fixes position 0."""
    g, sigma = e
    if sigma.n != sig.arity:
        raise ValueError("permutation arity does not match signature arity")
    rows = sig.colors.action[g]
    return Signature(
        sig.colors,
        tuple(rows[sig.sources[sigma(i) - 1]] for i in range(1, sig.arity + 1)),
        rows[sig.target],
    )


def all_signatures(colors: GSet, n: int):
    """Every arity-n signature over the color set, in lexicographic order."""
    for target in range(colors.size):
        for sources in product(range(colors.size), repeat=n):
            yield Signature(colors, sources, target)


def sigma_isomorphism(a: Signature, b: Signature) -> Permutation | None:
    """A permutation sigma with act((e,sigma), a) == b, if one exists."""
    if a.arity != b.arity or a.target != b.target:
        return None
    if Counter(a.sources) != Counter(b.sources):
        return None
    e = a.colors.group.identity
    for img in permutations(range(1, a.arity + 1)):
        sigma = Permutation(img)
        if act_signature((e, sigma), a) == b:
            return sigma
    return None


# ------------------------------------------------------------------ trees


@dataclass(frozen=True)
class Tree:
    """A planar colored rooted tree.

    ``color`` is the color of the edge below this node.  ``children`` is
    None for a bare edge (a leaf) and a tuple of subtrees for a vertex.
    """

    color: int
    children: tuple["Tree", ...] | None = None
    label: int | None = None
    dec: object = None

    def __post_init__(self):
        if self.children is None:
            assert self.dec is None, "bare edges carry no decoration"
        else:
            assert self.label is None, "only leaves carry labels"

    @property
    def is_leaf(self) -> bool:
        return self.children is None

    def n_vertices(self) -> int:
        if self.children is None:
            return 0
        return 1 + sum(ch.n_vertices() for ch in self.children)

    def leaves(self) -> list["Tree"]:
        if self.children is None:
            return [self]
        return [leaf for ch in self.children for leaf in ch.leaves()]

    def leaf_colors(self) -> tuple[int, ...]:
        return tuple(leaf.color for leaf in self.leaves())

    @property
    def arity(self) -> int:
        return len(self.leaves())

    def vertices(self) -> list["Tree"]:
        """All vertex subtrees in planar (root-first) order."""
        if self.children is None:
            return []
        out = [self]
        for ch in self.children:
            out.extend(ch.vertices())
        return out

    def strip(self) -> "Tree":
        """The same shape with labels and decorations removed."""
        if self.children is None:
            return Tree(self.color)
        return Tree(self.color, tuple(ch.strip() for ch in self.children))


def edge(color: int, label: int | None = None) -> Tree:
    return Tree(color, None, label)


def corolla(sig: Signature, labeled: bool = False, dec: object = None) -> Tree:
    kids = tuple(
        edge(c, i + 1 if labeled else None) for i, c in enumerate(sig.sources)
    )
    return Tree(sig.target, kids, dec=dec)


@dataclass(frozen=True)
class ColoredForest:
    """A formal list of colored trees over a shared color G-set."""

    colors: GSet
    trees: tuple[Tree, ...]

    def single(self) -> Tree:
        if len(self.trees) != 1:
            raise ValueError("expected a single-component forest")
        return self.trees[0]


def leaf_root(forest: ColoredForest) -> Signature:
    """The signature (leaf colors in planar order; root color) of a tree."""
    t = forest.single()
    return Signature(forest.colors, t.leaf_colors(), t.color)


def graft_tree(t: Tree, leaf_position: int, s: Tree) -> Tree:
    """Replace the leaf at the given planar position (1-based) by a tree
    whose root color matches the leaf color."""
    n = t.arity
    if not 1 <= leaf_position <= n:
        raise ValueError(f"leaf position {leaf_position} out of range 1..{n}")

    def go(node: Tree, pos: int) -> tuple[Tree, int]:
        if node.children is None:
            pos += 1
            if pos == leaf_position:
                if node.color != s.color:
                    raise ValueError("leaf color does not match root color of graft")
                return s, pos
            return node, pos
        new_children = []
        for ch in node.children:
            new, pos = go(ch, pos)
            new_children.append(new)
        return replace(node, children=tuple(new_children)), pos

    out, _ = go(t, 0)
    return out


def graft(t: ColoredForest, leaf_position: int, s: ColoredForest) -> ColoredForest:
    assert t.colors == s.colors
    return ColoredForest(t.colors, (graft_tree(t.single(), leaf_position, s.single()),))


# ------------------------------------------------- canonical forms, isos


def _dec_tuple(dec) -> tuple:
    if dec is None:
        return ()
    if isinstance(dec, tuple):
        return dec
    return (dec,)


def tree_key(t: Tree) -> tuple:
    """A total order on trees; equal keys mean equal stored values."""
    if t.children is None:
        return (0, t.color, -1 if t.label is None else t.label)
    return (
        1,
        t.color,
        len(t.children),
        _dec_tuple(t.dec),
        tuple(tree_key(ch) for ch in t.children),
    )


def _block_permutations(keys: list) -> list[Permutation]:
    """All permutations of positions 1..m preserving the key at each slot."""
    m = len(keys)
    groups: dict = {}
    for i, k in enumerate(keys):
        groups.setdefault(k, []).append(i)
    pools = [list(permutations(g)) for g in groups.values()]
    out = []
    for combo in product(*pools):
        img = [0] * m
        for grp, perm in zip(groups.values(), combo):
            for src, dst in zip(grp, perm):
                img[src] = dst + 1
        out.append(Permutation(tuple(img)))
    return out


def canonical(t: Tree, act_dec=None) -> Tree:
    """Canonical representative of the isomorphism class of a tree.

    Isomorphisms preserve edge colors, root, leaf labels, and decorations
    up to transport: permuting the children of a vertex by tau turns its
    decoration x into act_dec(x, source_colors, tau).  Two trees are
    isomorphic exactly when their canonical forms are equal.
    """
    if t.children is None:
        return t
    kids = tuple(canonical(ch, act_dec) for ch in t.children)
    m = len(kids)
    keys = [tree_key(ch) for ch in kids]
    order = sorted(range(m), key=lambda i: keys[i])
    tau = Permutation(tuple(i + 1 for i in order))
    sources = tuple(ch.color for ch in kids)
    dec = t.dec
    if act_dec is not None and dec is not None and not tau.is_identity():
        dec = act_dec(dec, sources, tau)
    kids = tuple(kids[i] for i in order)
    keys = [keys[i] for i in order]
    if act_dec is not None and dec is not None:
        new_sources = tuple(ch.color for ch in kids)
        best = dec
        for beta in _block_permutations(keys):
            if beta.is_identity():
                continue
            cand = act_dec(dec, new_sources, beta)
            if _dec_tuple(cand) < _dec_tuple(best):
                best = cand
        dec = best
    return Tree(t.color, kids, dec=dec)


@dataclass(frozen=True)
class TreeMap:
    """A structural isomorphism t1 -> t2.

    ``perm`` says which child of t1 lands on each child slot of t2: slot i
    of t2 receives child perm(i) of t1, transformed by subs[i].
    """

    perm: Permutation | None
    subs: tuple["TreeMap", ...] = ()

    def leaf_image(self, t1: Tree) -> Permutation:
        """lambda with: leaf p of t2 is the image of leaf lambda(p) of t1."""

        def go(node: Tree, m: "TreeMap") -> list[int]:
            if node.children is None:
                return [1]
            offsets, acc = [], 0
            for ch in node.children:
                offsets.append(acc)
                acc += ch.arity
            out = []
            for slot in range(len(node.children)):
                src = m.perm(slot + 1) - 1
                inner = go(node.children[src], m.subs[slot])
                out.extend(offsets[src] + q for q in inner)
            return out

        return Permutation(tuple(go(t1, self)))


def tree_isomorphisms(t1: Tree, t2: Tree, act_dec=None) -> list[TreeMap]:
    """All isomorphisms t1 -> t2 preserving colors, labels, decorations."""
    if t1.children is None or t2.children is None:
        if t1.children is None and t2.children is None:
            ok = t1.color == t2.color and t1.label == t2.label
            return [TreeMap(None)] if ok else []
        return []
    if t1.color != t2.color or len(t1.children) != len(t2.children):
        return []
    m = len(t1.children)
    canon1 = [canonical(ch, act_dec) for ch in t1.children]
    canon2 = [canonical(ch, act_dec) for ch in t2.children]
    out = []
    for img in permutations(range(m)):
        # slot i of t2 receives child img[i] of t1
        if any(canon1[img[i]] != canon2[i] for i in range(m)):
            continue
        tau = Permutation(tuple(j + 1 for j in img))
        if t1.dec is not None or t2.dec is not None:
            sources = tuple(ch.color for ch in t1.children)
            moved = t1.dec if act_dec is None else act_dec(t1.dec, sources, tau)
            if moved != t2.dec:
                continue
        pools = [
            tree_isomorphisms(t1.children[img[i]], t2.children[i], act_dec)
            for i in range(m)
        ]
        if any(not p for p in pools):
            continue
        for combo in product(*pools):
            out.append(TreeMap(tau, tuple(combo)))
    return out


def tree_automorphisms(t: Tree) -> list[TreeMap]:
    """All color- and root-preserving self-isomorphisms of the underlying
    colored tree, ignoring labels and decorations."""
    s = t.strip()
    return tree_isomorphisms(s, s)


def apply_tree_map(m: TreeMap, t: Tree, act_dec=None) -> Tree:
    """Push labels and decorations of t along an automorphism of its shape."""
    if t.children is None:
        return t
    assert m.perm is not None
    sources = tuple(ch.color for ch in t.children)
    dec = t.dec
    if dec is not None and act_dec is not None and not m.perm.is_identity():
        dec = act_dec(dec, sources, m.perm)
    kids = tuple(
        apply_tree_map(m.subs[i], t.children[m.perm(i + 1) - 1], act_dec)
        for i in range(len(t.children))
    )
    return Tree(t.color, kids, dec=dec)


# ------------------------------------------------------ G . corolla forest


@dataclass(frozen=True)
class GDotCorolla:
    """The G-indexed forest of translated corollas of a signature.

    Component g is the corolla of act((g, id), sig).  Its edge set is
    G x {0..n} (0 the root edge, i >= 1 the i-th leaf), with a right
    G x Sigma_n^op action (gbar, i) . (g, sigma) = (gbar g, sigma(i)).
    """

    sig: Signature
    forest: ColoredForest

    @property
    def colors(self) -> GSet:
        return self.sig.colors

    def component(self, g: int) -> Tree:
        return self.forest.trees[g]

    def edges(self) -> list[tuple[int, int]]:
        G = self.colors.group
        return [(g, i) for g in G.elements() for i in range(self.sig.arity + 1)]

    def edge_color(self, e: tuple[int, int]) -> int:
        g, i = e
        comp = act_signature((g, Permutation.identity(self.sig.arity)), self.sig)
        return comp.target if i == 0 else comp.sources[i - 1]

    def edge_right_action(self, e: tuple[int, int], x: tuple[int, Permutation]) -> tuple[int, int]:
        (gbar, i), (g, sigma) = e, x
        G = self.colors.group
        return (G.mul[gbar][g], i if i == 0 else sigma(i))

    def component_action(self, g: int, h: int) -> int:
        """The G-action permuting components: g sends component h to gh."""
        return self.colors.group.mul[g][h]


def g_dot_corolla(colors: GSet, sig: Signature) -> GDotCorolla:
    assert sig.colors == colors
    G = colors.group
    ident = Permutation.identity(sig.arity)
    trees = tuple(
        corolla(act_signature((g, ident), sig)) for g in G.elements()
    )
    return GDotCorolla(sig, ColoredForest(colors, trees))


# ------------------------------------------- enumeration of tree classes


def _tree_pool(n_colors: int, leaf_support: frozenset[int], max_vertices: int,
               max_arity: int, max_leaves: int) -> list[Tree]:
    """All canonical plain trees with at most the given number of vertices,
    leaf colors inside the support, vertex arities bounded, and at most
    max_leaves leaves.  Root colors range over the whole color set."""
    by_vertices: list[list[Tree]] = [[edge(c) for c in sorted(leaf_support)]]
    for v in range(1, max_vertices + 1):
        level: set[Tree] = set()
        smaller = [t for lvl in by_vertices for t in lvl]
        for m in range(0, max_arity + 1):
            for kids in _child_tuples(smaller, m, v - 1, max_leaves):
                if sum(k.arity for k in kids) > max_leaves:
                    continue
                for c in range(n_colors):
                    level.add(canonical(Tree(c, kids)))
        by_vertices.append(sorted(level, key=tree_key))
    return [t for lvl in by_vertices for t in lvl]


def _child_tuples(pool: list[Tree], m: int, vertex_budget: int, max_leaves: int):
    """Key-sorted m-tuples from the pool with total vertex count equal to
    the budget (so every vertex count is hit exactly once overall)."""
    pool = sorted(pool, key=tree_key)

    def go(start: int, m_left: int, v_left: int, l_left: int):
        if m_left == 0:
            if v_left == 0:
                yield ()
            return
        for i in range(start, len(pool)):
            t = pool[i]
            v = t.n_vertices()
            if v > v_left or t.arity > l_left:
                continue
            for rest in go(i, m_left - 1, v_left - v, l_left - t.arity):
                yield (t,) + rest

    yield from go(0, m, vertex_budget, max_leaves)


@dataclass(frozen=True)
class TreeIsoClass:
    """An isomorphism class of trees marked by a fixed signature.

    The representative carries leaf labels: the leaf labeled j has the
    color of the j-th source.  ``marker`` is the permutation sending each
    planar leaf position to the signature position it realizes, and
    ``automorphisms`` are the self-maps of the unlabeled colored tree.
    """

    representative: Tree
    marker: Permutation
    automorphisms: tuple[TreeMap, ...]


def _label_assignments(t: Tree, sig: Signature):
    positions = t.leaf_colors()
    n = len(positions)
    slots: dict[int, list[int]] = {}
    for j, c in enumerate(sig.sources, start=1):
        slots.setdefault(c, []).append(j)
    by_color: dict[int, list[int]] = {}
    for p, c in enumerate(positions, start=1):
        by_color.setdefault(c, []).append(p)
    if {c: len(v) for c, v in slots.items()} != {c: len(v) for c, v in by_color.items()}:
        return
    colors_in_play = sorted(slots)
    pools = [list(permutations(slots[c])) for c in colors_in_play]
    for combo in product(*pools):
        labels = [0] * n
        for c, perm in zip(colors_in_play, combo):
            for p, j in zip(by_color[c], perm):
                labels[p - 1] = j
        yield tuple(labels)


def _attach_labels(t: Tree, labels: tuple[int, ...]) -> Tree:
    def go(node: Tree, pos: int) -> tuple[Tree, int]:
        if node.children is None:
            return replace(node, label=labels[pos]), pos + 1
        kids = []
        for ch in node.children:
            new, pos = go(ch, pos)
            kids.append(new)
        return replace(node, children=tuple(kids)), pos

    out, pos = go(t, 0)
    assert pos == len(labels)
    return out


def enumerate_tree_classes(
    colors: GSet,
    sig: Signature,
    max_vertices: int,
    max_arity: int | None = None,
    bound: int = TREE_VERTEX_BOUND,
) -> list[TreeIsoClass]:
    """All isomorphism classes of marked colored trees with at most the
    given number of vertices whose leaf-root signature matches the marker.

    Vertex arities are capped by max_arity (default: the larger of the
    signature arity and the enumeration bound is NOT assumed; pass what
    the consumer supports).
    """
    if max_vertices > bound:
        raise ValueError(f"vertex bound {max_vertices} exceeds limit {bound}")
    if max_arity is None:
        max_arity = max(sig.arity, 1)
    support = frozenset(sig.sources)
    pool = _tree_pool(colors.size, support, max_vertices, max_arity, sig.arity)
    want = Counter(sig.sources)
    seen: set[Tree] = set()
    out: list[TreeIsoClass] = []
    for t in pool:
        if t.color != sig.target or Counter(t.leaf_colors()) != want:
            continue
        for labels in _label_assignments(t, sig):
            rep = canonical(_attach_labels(t, labels))
            if rep in seen:
                continue
            seen.add(rep)
            marker = Permutation(tuple(leaf.label for leaf in rep.leaves()))
            out.append(TreeIsoClass(rep, marker, tuple(tree_automorphisms(rep))))
    out.sort(key=lambda cls: tree_key(cls.representative))
    return out


# -------------------------------------------------------------- interchange


def tree_to_json(t: Tree) -> dict:
    blob: dict = {"color": t.color}
    if t.children is None:
        if t.label is not None:
            blob["label"] = t.label
        blob["children"] = None
    else:
        blob["children"] = [tree_to_json(ch) for ch in t.children]
    return blob


def tree_from_json(blob: dict) -> Tree:
    if blob.get("children") is None:
        return Tree(blob["color"], None, blob.get("label"))
    return Tree(blob["color"], tuple(tree_from_json(ch) for ch in blob["children"]))
