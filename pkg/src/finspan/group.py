"""Finite groups as explicit multiplication tables.

Elements are the integers ``0 .. order-1``. Permutation groups keep their
permutations around (``perms``) so that they can be printed and acted with;
the permutation convention is ``(p*q)[i] == p[q[i]]`` (apply ``q`` first).
"""

from __future__ import annotations

import itertools
import re
from functools import cached_property

from .errors import InvalidStructure


def closure(group: "FiniteGroup", gens) -> frozenset:
    """Subgroup generated by ``gens``."""
    els = {group.identity}
    frontier = [group.identity]
    gens = list(gens)
    while frontier:
        new = []
        for a in frontier:
            for s in gens:
                c = group.mul(a, s)
                if c not in els:
                    els.add(c)
                    new.append(c)
        frontier = new
    return frozenset(els)


def _perm_mul(p, q):
    return tuple(p[i] for i in q)


class FiniteGroup:
    """A finite group given by its Cayley table.

    >>> G = cyclic(3)
    >>> G.mul(2, 2)
    1
    """

    def __init__(self, table, identity=0, generators=None, perms=None, name=None,
                 check=True):
        self.table = tuple(tuple(row) for row in table)
        self.order = len(self.table)
        self.identity = identity
        self.perms = None if perms is None else tuple(tuple(p) for p in perms)
        self.name = name
        if check:
            self._check()
        inv = [None] * self.order
        for a in range(self.order):
            for b in range(self.order):
                if self.table[a][b] == identity:
                    inv[a] = b
                    break
        self.inverses = tuple(inv)
        if generators is None:
            generators = self._greedy_generators()
        self.generators = tuple(generators)
        self._subgroup_groups = {}
        self._hash = hash((self.table, self.identity))

    def _check(self):
        n, e, t = self.order, self.identity, self.table
        if n == 0 or not 0 <= e < n:
            raise InvalidStructure("group needs an identity element")
        for row in t:
            if len(row) != n or sorted(row) != list(range(n)):
                raise InvalidStructure("multiplication table is not a Latin square")
        for a in range(n):
            if t[e][a] != a or t[a][e] != a:
                raise InvalidStructure(f"identity {e} is not a unit for {a}")
        for a in range(n):
            ta = t[a]
            for b in range(n):
                tab = t[ta[b]]
                tb = t[b]
                for c in range(n):
                    if tab[c] != ta[tb[c]]:
                        raise InvalidStructure(f"associativity fails on ({a}, {b}, {c})")

    def _greedy_generators(self):
        gens = []
        H = frozenset([self.identity])
        for g in range(self.order):
            if g not in H:
                gens.append(g)
                H = closure(self, gens)
        return gens

    def __repr__(self):
        return f"FiniteGroup({self.name or self.order})"

    def __len__(self):
        return self.order

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, FiniteGroup) and self._hash == other._hash
                and self.table == other.table and self.identity == other.identity)

    def __hash__(self):
        return self._hash

    @property
    def elements(self):
        return range(self.order)

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverses[a]

    def conj(self, g, h):
        """``g h g^-1``."""
        return self.table[self.table[g][h]][self.inverses[g]]

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    def is_abelian(self):
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.elements for b in self.elements)

    # -- subgroups -----------------------------------------------------

    def closure(self, gens) -> frozenset:
        return closure(self, gens)

    @cached_property
    def subgroups(self) -> tuple:
        """All subgroups, sorted by (order, sorted element list)."""
        cyclic_subs = {closure(self, [g]) for g in self.elements}
        found = set(cyclic_subs)
        frontier = list(cyclic_subs)
        while frontier:
            new = []
            for A in frontier:
                for C in cyclic_subs:
                    if C <= A:
                        continue
                    J = closure(self, A | C)
                    if J not in found:
                        found.add(J)
                        new.append(J)
            frontier = new
        return tuple(sorted(found, key=subgroup_key))

    def conjugate(self, H, g) -> frozenset:
        return frozenset(self.conj(g, h) for h in H)

    def conjugates(self, H) -> list:
        return sorted({self.conjugate(H, g) for g in self.elements}, key=subgroup_key)

    @cached_property
    def subgroup_classes(self) -> tuple:
        """Conjugacy classes of subgroups in canonical order.

        Each class is a tuple of subgroups whose first entry is the
        representative: the lexicographically least conjugate. Classes are
        ordered by (order, representative element list), which makes the
        table of marks upper triangular.
        """
        seen = set()
        classes = []
        for H in self.subgroups:
            if H in seen:
                continue
            cl = self.conjugates(H)
            seen.update(cl)
            classes.append(tuple(cl))
        classes.sort(key=lambda cl: subgroup_key(cl[0]))
        return tuple(classes)

    @cached_property
    def _class_of(self) -> dict:
        return {H: i for i, cl in enumerate(self.subgroup_classes) for H in cl}

    def class_index(self, H) -> int:
        """Index of the conjugacy class containing subgroup ``H``."""
        return self._class_of[frozenset(H)]

    def class_rep(self, i) -> frozenset:
        return self.subgroup_classes[i][0]

    def class_label(self, i) -> str:
        H = self.class_rep(i)
        return f"H{i}[{len(H)}]"

    def is_subgroup(self, H) -> bool:
        H = frozenset(H)
        return (self.identity in H
                and all(self.mul(a, self.inv(b)) in H for a in H for b in H))

    def is_normal(self, H) -> bool:
        return all(self.conjugate(H, g) == frozenset(H) for g in self.generators)

    def normalizer(self, H) -> frozenset:
        H = frozenset(H)
        return frozenset(g for g in self.elements if self.conjugate(H, g) == H)

    def left_cosets(self, H) -> list:
        """Left cosets ``gH`` sorted by least element."""
        H = frozenset(H)
        seen = set()
        out = []
        for g in self.elements:
            if g in seen:
                continue
            c = frozenset(self.mul(g, h) for h in H)
            seen |= c
            out.append(c)
        return out

    def double_cosets(self, K, H) -> list:
        """Double cosets ``K g H``, each as a frozenset, sorted by least element."""
        seen = set()
        out = []
        for g in self.elements:
            if g in seen:
                continue
            d = frozenset(self.mul(self.mul(k, g), h) for k in K for h in H)
            seen |= d
            out.append(d)
        return out

    def subgroup_group(self, H):
        """``H`` as a group in its own right, with its inclusion ``H -> self``."""
        H = frozenset(H)
        cached = self._subgroup_groups.get(H)
        if cached is not None:
            return cached
        els = sorted(H)
        if els[0] != self.identity:
            els.remove(self.identity)
            els.insert(0, self.identity)
        idx = {g: i for i, g in enumerate(els)}
        table = [[idx[self.mul(a, b)] for b in els] for a in els]
        perms = None if self.perms is None else [self.perms[g] for g in els]
        sub = FiniteGroup(table, 0, perms=perms, check=False,
                          name=f"{self.name or 'G'}<{len(H)}>")
        inc = GroupHom(sub, self, els)
        self._subgroup_groups[H] = (sub, inc)
        return sub, inc

    def quotient(self, N):
        """``G/N`` together with the projection ``G -> G/N``."""
        N = frozenset(N)
        if not self.is_normal(N):
            raise InvalidStructure("quotient by a non-normal subgroup")
        cosets = self.left_cosets(N)
        which = {}
        for i, c in enumerate(cosets):
            for g in c:
                which[g] = i
        reps = [min(c) for c in cosets]
        table = [[which[self.mul(a, b)] for b in reps] for a in reps]
        Q = FiniteGroup(table, which[self.identity], check=False,
                        name=f"{self.name or 'G'}/{len(N)}")
        return Q, GroupHom(self, Q, [which[g] for g in self.elements], check=False)


def subgroup_key(H):
    return (len(H), tuple(sorted(H)))


class GroupHom:
    """A homomorphism given by the image of every element."""

    def __init__(self, source: FiniteGroup, target: FiniteGroup, images, check=True):
        self.source = source
        self.target = target
        self.images = tuple(images)
        if check:
            s, t = source, target
            if len(self.images) != s.order:
                raise InvalidStructure("homomorphism needs one image per element")
            for a in s.generators:
                for b in s.elements:
                    if self.images[s.mul(b, a)] != t.mul(self.images[b], self.images[a]):
                        raise InvalidStructure("not a homomorphism")

    def __call__(self, g):
        return self.images[g]

    def __eq__(self, other):
        return (isinstance(other, GroupHom) and self.source == other.source
                and self.target == other.target and self.images == other.images)

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        return f"GroupHom({self.source!r} -> {self.target!r}, {list(self.images)})"

    def kernel(self) -> frozenset:
        e = self.target.identity
        return frozenset(g for g in self.source.elements if self.images[g] == e)

    def image(self) -> frozenset:
        return frozenset(self.images)

    def is_injective(self):
        return len(set(self.images)) == self.source.order

    def is_surjective(self):
        return len(set(self.images)) == self.target.order

    def then(self, other: "GroupHom") -> "GroupHom":
        """``other ∘ self``."""
        return GroupHom(self.source, other.target,
                        [other.images[i] for i in self.images], check=False)

    def preimage(self, S) -> frozenset:
        S = set(S)
        return frozenset(g for g in self.source.elements if self.images[g] in S)

    @classmethod
    def identity(cls, G):
        return cls(G, G, G.elements, check=False)


# -- constructors -------------------------------------------------------


def from_permutations(gens, degree=None, name=None) -> FiniteGroup:
    """Permutation group generated by ``gens`` (tuples mapping i -> p[i])."""
    gens = [tuple(g) for g in gens]
    if degree is None:
        degree = len(gens[0]) if gens else 0
    e = tuple(range(degree))
    els = {e}
    frontier = [e]
    while frontier:
        new = []
        for a in frontier:
            for s in gens:
                c = _perm_mul(a, s)
                if c not in els:
                    els.add(c)
                    new.append(c)
        frontier = new
    perms = sorted(els)
    idx = {p: i for i, p in enumerate(perms)}
    table = [[idx[_perm_mul(p, q)] for q in perms] for p in perms]
    gen_idx = [idx[g] for g in gens if g != e]
    return FiniteGroup(table, idx[e], generators=gen_idx or None, perms=perms,
                       name=name, check=False)


def trivial() -> FiniteGroup:
    return FiniteGroup([[0]], perms=[()], name="1", check=False)


def cyclic(n: int) -> FiniteGroup:
    if n == 1:
        return trivial()
    rot = tuple((i + 1) % n for i in range(n))
    return from_permutations([rot], n, name=f"C{n}")


def symmetric(n: int) -> FiniteGroup:
    """Symmetric group on ``{0, ..., n-1}``."""
    if n <= 1:
        return FiniteGroup([[0]], perms=[tuple(range(n))], name=f"S{n}", check=False)
    swap = tuple([1, 0] + list(range(2, n)))
    cyc = tuple((i + 1) % n for i in range(n))
    gens = [swap] if n == 2 else [swap, cyc]
    return from_permutations(gens, n, name=f"S{n}")


def alternating(n: int) -> FiniteGroup:
    """Even permutations of ``{0, ..., n-1}``, generated by 3-cycles ``(0 1 k)``."""
    if n <= 2:
        return FiniteGroup([[0]], perms=[tuple(range(n))], name=f"A{n}", check=False)
    gens = []
    for k in range(2, n):
        g = list(range(n))
        g[0], g[1], g[k] = 1, k, 0
        gens.append(tuple(g))
    return from_permutations(gens, n, name=f"A{n}")


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the regular n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return from_permutations([rot, ref], n, name=f"D{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """``G × H`` with element ``(g, h)`` stored at index ``g*|H| + h``."""
    m = H.order
    table = [[G.mul(a // m, b // m) * m + H.mul(a % m, b % m)
              for b in range(G.order * m)] for a in range(G.order * m)]
    gens = [g * m + H.identity for g in G.generators]
    gens += [G.identity * m + h for h in H.generators]
    perms = None
    if G.perms is not None and H.perms is not None:
        d = len(G.perms[0])
        perms = [tuple(G.perms[a // m]) + tuple(d + x for x in H.perms[a % m])
                 for a in range(G.order * m)]
    name = f"{G.name or G.order}x{H.name or H.order}"
    return FiniteGroup(table, G.identity * m + H.identity, generators=gens or None,
                       perms=perms, name=name, check=False)


def product_projections(G: FiniteGroup, H: FiniteGroup, GH: FiniteGroup):
    """Projections ``G×H -> G`` and ``G×H -> H`` for ``GH = direct_product(G, H)``."""
    m = H.order
    p1 = GroupHom(GH, G, [a // m for a in GH.elements], check=False)
    p2 = GroupHom(GH, H, [a % m for a in GH.elements], check=False)
    return p1, p2


_NAME = re.compile(r"^(C|S|D|A)(\d+)$")


def by_name(name: str) -> FiniteGroup:
    """Parse names like ``1``, ``e``, ``C4``, ``S3``, ``D4``, ``A4``, ``C2xC3``."""
    name = name.strip()
    if "x" in name:
        parts = [by_name(p) for p in name.split("x")]
        out = parts[0]
        for p in parts[1:]:
            out = direct_product(out, p)
        out.name = name
        return out
    if name in ("1", "e", "trivial"):
        return trivial()
    m = _NAME.match(name)
    if not m:
        raise ValueError(f"unknown group name {name!r}")
    kind, n = m.group(1), int(m.group(2))
    return {"C": cyclic, "S": symmetric, "D": dihedral, "A": alternating}[kind](n)


# -- homomorphism enumeration --------------------------------------------


def _word_tree(G: FiniteGroup):
    """BFS tree over the Cayley graph: (element, parent, generator position)."""
    order = [(G.identity, None, None)]
    seen = {G.identity}
    i = 0
    while i < len(order):
        x = order[i][0]
        for j, s in enumerate(G.generators):
            y = G.mul(x, s)
            if y not in seen:
                seen.add(y)
                order.append((y, x, j))
        i += 1
    return order


def _extend(G: FiniteGroup, H: FiniteGroup, tree, gen_images):
    img = [None] * G.order
    img[G.identity] = H.identity
    for x, parent, j in tree[1:]:
        img[x] = H.mul(img[parent], gen_images[j])
    for x in G.elements:
        for j, s in enumerate(G.generators):
            if img[G.mul(x, s)] != H.mul(img[x], gen_images[j]):
                return None
    return img


def homomorphisms(G: FiniteGroup, H: FiniteGroup):
    """All homomorphisms ``G -> H`` in a deterministic order."""
    tree = _word_tree(G)
    choices = []
    for s in G.generators:
        k = G.element_order(s)
        choices.append([h for h in H.elements if k % H.element_order(h) == 0])
    for gen_images in itertools.product(*choices):
        img = _extend(G, H, tree, gen_images)
        if img is not None:
            yield GroupHom(G, H, img, check=False)


def find_isomorphism(G: FiniteGroup, H: FiniteGroup):
    """An isomorphism ``G -> H`` or ``None``."""
    if G.order != H.order:
        return None
    if sorted(map(G.element_order, G.elements)) != sorted(map(H.element_order, H.elements)):
        return None
    tree = _word_tree(G)
    choices = [[h for h in H.elements if H.element_order(h) == G.element_order(s)]
               for s in G.generators]
    for gen_images in itertools.product(*choices):
        img = _extend(G, H, tree, gen_images)
        if img is not None and len(set(img)) == G.order:
            return GroupHom(G, H, img, check=False)
    return None


def conjugacy_classes_of_homs(G: FiniteGroup, H: FiniteGroup) -> list:
    """Orbits of ``Hom(G, H)`` under conjugation in ``H``, as sorted image tuples."""
    seen = set()
    classes = []
    for phi in homomorphisms(G, H):
        if phi.images in seen:
            continue
        orbit = {tuple(H.conj(h, x) for x in phi.images) for h in H.elements}
        seen |= orbit
        classes.append(min(orbit))
    return sorted(classes)
