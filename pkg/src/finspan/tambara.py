"""Burnside rings, tables of marks and the Burnside Tambara functor.

All arithmetic is exact: coefficients are Python ints, the inverse of the
table of marks is applied with :class:`fractions.Fraction`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod

from . import gset as gs
from .errors import InvalidStructure, NonIntegralError
from .group import FiniteGroup, GroupHom
from .gset import GSet, GSetMap


# -- the ring ------------------------------------------------------------------


@lru_cache(maxsize=None)
def table_of_marks(G: FiniteGroup) -> tuple:
    """``M[i][j] = |(G/H_j)^{H_i}|`` in canonical class order (upper triangular)."""
    reps = [cl[0] for cl in G.subgroup_classes]
    orbits = [GSet.cosets(G, H) for H in reps]
    return tuple(tuple(len(X.fixed_points(K)) for X in orbits) for K in reps)


@lru_cache(maxsize=None)
def _basis_products(G: FiniteGroup) -> tuple:
    reps = [cl[0] for cl in G.subgroup_classes]
    orbits = [GSet.cosets(G, H) for H in reps]
    return tuple(tuple(gs.product(X, Y)[0].orbit_counts for Y in orbits) for X in orbits)


def rank(G: FiniteGroup) -> int:
    """Rank of the Burnside ring: the number of conjugacy classes of subgroups."""
    return len(G.subgroup_classes)


class BurnsideElement:
    """An integer combination of transitive G-sets ``[G/H_i]``."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: FiniteGroup, coeffs):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != len(group.subgroup_classes):
            raise InvalidStructure("one coefficient per subgroup class is required")
        self.group = group
        self.coeffs = coeffs

    @classmethod
    def _make(cls, group, coeffs: tuple):
        x = object.__new__(cls)
        x.group = group
        x.coeffs = coeffs
        return x

    @classmethod
    def zero(cls, G):
        return cls(G, [0] * rank(G))

    @classmethod
    def one(cls, G):
        return cls(G, [0] * (rank(G) - 1) + [1])

    @classmethod
    def basis(cls, G, i):
        c = [0] * rank(G)
        c[i] = 1
        return cls(G, c)

    def _same(self, other):
        if not isinstance(other, BurnsideElement) or other.group != self.group:
            raise InvalidStructure("Burnside elements over different groups")

    def __eq__(self, other):
        return (isinstance(other, BurnsideElement) and self.group == other.group
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        self._same(other)
        return BurnsideElement._make(self.group,
                                     tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return BurnsideElement(self.group, [-a for a in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, int):
            return BurnsideElement(self.group, [other * a for a in self.coeffs])
        self._same(other)
        table = _basis_products(self.group)
        out = [0] * len(self.coeffs)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                for k, c in enumerate(table[i][j]):
                    out[k] += a * b * c
        return BurnsideElement._make(self.group, tuple(out))

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = BurnsideElement.one(self.group)
        for _ in range(n):
            out = out * self
        return out

    def is_effective(self):
        return all(c >= 0 for c in self.coeffs)

    def __repr__(self):
        G = self.group
        terms = [f"{c}[{G.class_label(i)}]" for i, c in enumerate(self.coeffs) if c]
        return f"<{' + '.join(terms) or '0'} in A({G.name or G.order})>"


def burnside_class(X: GSet) -> BurnsideElement:
    return BurnsideElement(X.group, X.orbit_counts)


def burnside_add(x, y):
    return x + y


def burnside_mul(x, y):
    return x * y


def to_gset(x: BurnsideElement) -> GSet:
    """A G-set representing an effective element."""
    if not x.is_effective():
        raise InvalidStructure("only effective elements have G-set representatives")
    return GSet.from_classes(x.group, x.coeffs)


# -- marks ---------------------------------------------------------------------


def marks(x: BurnsideElement) -> tuple:
    """Fixed-point counts ``|X^{H_i}|`` per subgroup class."""
    M = table_of_marks(x.group)
    return tuple(sum(r * c for r, c in zip(row, x.coeffs)) for row in M)


def marks_of_gset(X: GSet) -> tuple:
    """Marks computed directly from fixed points (independent of the table)."""
    return tuple(len(X.fixed_points(cl[0])) for cl in X.group.subgroup_classes)


@lru_cache(maxsize=None)
def _inverse_marks(G: FiniteGroup) -> tuple:
    """Exact inverse of the table of marks, by back substitution on unit vectors."""
    M = table_of_marks(G)
    n = len(M)
    cols = []
    for k in range(n):
        c = [Fraction(0)] * n
        for i in range(n - 1, -1, -1):
            s = Fraction(int(i == k)) - sum(M[i][j] * c[j] for j in range(i + 1, n))
            c[i] = s / M[i][i]
        cols.append(c)
    return tuple(tuple(cols[k][i] for k in range(n)) for i in range(n))


def unmarks_rational(G: FiniteGroup, v) -> tuple:
    """Solve ``M c = v`` exactly over the rationals."""
    inv = _inverse_marks(G)
    if len(v) != len(inv):
        raise InvalidStructure("marks vector has the wrong length")
    return tuple(sum((a * b for a, b in zip(row, v) if b), Fraction(0)) for row in inv)


def unmarks(G: FiniteGroup, v) -> BurnsideElement:
    """Inverse of :func:`marks`; raises :class:`NonIntegralError` off the image."""
    c = unmarks_rational(G, v)
    if any(q.denominator != 1 for q in c):
        raise NonIntegralError(f"marks vector {tuple(v)} is not integral: {c}")
    return BurnsideElement(G, [int(q) for q in c])


# -- change of group -----------------------------------------------------------


def subgroup_inclusion(G: FiniteGroup, H) -> GroupHom:
    """Inclusion of ``H`` (a set of elements of ``G``) as a group homomorphism."""
    return G.subgroup_group(frozenset(H))[1]


def _classes(G):
    return [GSet.cosets(G, cl[0]) for cl in G.subgroup_classes]


def _apply(matrix, x: BurnsideElement, target: FiniteGroup) -> BurnsideElement:
    out = [0] * rank(target)
    for c, row in zip(x.coeffs, matrix):
        if c:
            for k, m in enumerate(row):
                out[k] += c * m
    return BurnsideElement._make(target, tuple(out))


@lru_cache(maxsize=None)
def _restrict_matrix(source: FiniteGroup, target: FiniteGroup, images: tuple) -> tuple:
    alpha = GroupHom(source, target, images, check=False)
    return tuple(gs.restrict(alpha, X).orbit_counts for X in _classes(target))


@lru_cache(maxsize=None)
def _induce_matrix(source: FiniteGroup, target: FiniteGroup, images: tuple) -> tuple:
    inc = GroupHom(source, target, images, check=False)
    return tuple(gs.induce(inc, X).orbit_counts for X in _classes(source))


def restrict_b(alpha: GroupHom, x: BurnsideElement) -> BurnsideElement:
    """Pull back along ``alpha: H -> G`` (restriction if injective, inflation if surjective)."""
    if x.group != alpha.target:
        raise InvalidStructure("element does not live over the target of alpha")
    M = _restrict_matrix(alpha.source, alpha.target, alpha.images)
    return _apply(M, x, alpha.source)


def inflate_b(pi: GroupHom, x: BurnsideElement) -> BurnsideElement:
    if not pi.is_surjective():
        raise InvalidStructure("inflation is along a surjection")
    return restrict_b(pi, x)


def transfer(inc: GroupHom, x: BurnsideElement) -> BurnsideElement:
    """Additive induction along an injective ``inc: H -> G``."""
    if x.group != inc.source:
        raise InvalidStructure("element does not live over the source of inc")
    if not inc.is_injective():
        raise InvalidStructure("transfer needs an injective homomorphism")
    return _apply(_induce_matrix(inc.source, inc.target, inc.images), x, inc.target)


def conjugate_b(G: FiniteGroup, H, g, x: BurnsideElement) -> BurnsideElement:
    """Move ``x ∈ A(H)`` to ``A(gHg^-1)`` (both subgroups of ``G`` given as element sets)."""
    H = frozenset(H)
    K = G.conjugate(H, g)
    Hg, incH = G.subgroup_group(H)
    Kg, incK = G.subgroup_group(K)
    pos = {h: i for i, h in enumerate(incH.images)}
    gi = G.inv(g)
    c = GroupHom(Kg, Hg, [pos[G.conj(gi, incK.images[k])] for k in Kg.elements], check=False)
    return restrict_b(c, x)


def norm_effective(inc: GroupHom, X: GSet) -> GSet:
    """Multiplicative induction ``Map_H(G, X)`` built as a dependent product.

    The sum map is ``G ×_H X -> G/H`` and the norm map is ``G/H -> pt``.
    """
    G = inc.target
    A = gs.induce(inc, X)
    B = GSet.cosets(G, inc.image())
    n_x = X.size
    m = GSetMap(A, B, [p // n_x for p in A.points]) if n_x else GSetMap(A, B, [])
    n = GSetMap.to_point(B)
    return gs.dependent_product(n, m).Y


@lru_cache(maxsize=None)
def _norm_recipe(source: FiniteGroup, target: FiniteGroup, images: tuple) -> tuple:
    """Per class ``K`` of the target: the source classes of ``H ∩ gKg^-1`` over ``H\\G/K``."""
    G, H = target, source
    image = frozenset(images)
    pre = {g: h for h, g in enumerate(images)}
    out = []
    for cl in G.subgroup_classes:
        K = cl[0]
        idx = []
        for d in G.double_cosets(image, K):
            g = min(d)
            L = frozenset(pre[h] for h in image & G.conjugate(K, g))
            idx.append(H.class_index(L))
        out.append(tuple(idx))
    return tuple(out)


@lru_cache(maxsize=65536)
def _norm_cached(source, target, images, coeffs) -> BurnsideElement:
    mx = marks(BurnsideElement(source, coeffs))
    out = [prod(mx[i] for i in idx) for idx in _norm_recipe(source, target, images)]
    try:
        return unmarks(target, out)
    except NonIntegralError as exc:
        raise NonIntegralError(f"internal error: virtual norm is not integral ({exc})") from None


def norm_virtual(inc: GroupHom, x: BurnsideElement) -> BurnsideElement:
    """Norm along ``inc: H -> G`` on virtual elements, defined through marks.

    The mark at ``K`` is the product over double cosets ``H g K`` of the mark
    of ``x`` at ``H ∩ gKg^-1``; the result is recovered with exact inversion
    of the table of marks and must be integral.
    """
    if x.group != inc.source:
        raise InvalidStructure("element does not live over the source of inc")
    if not inc.is_injective():
        raise InvalidStructure("norm needs an injective homomorphism")
    return _norm_cached(inc.source, inc.target, inc.images, x.coeffs)


def deflate_b(pi, x: BurnsideElement, mode: str = "quotient") -> BurnsideElement:
    """Deflation along ``pi: G -> G/N`` (or a normal subgroup ``N``), linear on classes."""
    if not isinstance(pi, GroupHom):
        _, pi = x.group.quotient(pi)
    M = [gs.deflate(pi, X, mode).orbit_counts for X in _classes(x.group)]
    return _apply(M, x, pi.target)


# -- the Burnside Tambara functor as an oracle ------------------------------


class TambaraFunctorOracle:
    """A Set-valued functor on bispans of G-sets, given by its R/N/T actions.

    Values at a G-set ``X`` are opaque; ``samples(X)`` yields test values
    and ``equal`` compares them. ``split``/``join`` witness product
    preservation along a coproduct decomposition.
    """

    grouplike = False

    def restrict(self, f: GSetMap, value):
        raise NotImplementedError

    def norm(self, n: GSetMap, value):
        raise NotImplementedError

    def transfer(self, t: GSetMap, value):
        raise NotImplementedError

    def samples(self, X: GSet):
        raise NotImplementedError

    def equal(self, a, b) -> bool:
        return a == b

    def evaluate(self, f, n, t, value):
        """``T_t N_n R_f`` applied to ``value``."""
        return self.transfer(t, self.norm(n, self.restrict(f, value)))


class ConstantOracle(TambaraFunctorOracle):
    """The terminal Tambara functor: a single value everywhere."""

    grouplike = True

    def restrict(self, f, value):
        return ()

    norm = transfer = restrict

    def samples(self, X):
        return [()]

    def join(self, Z, incs, parts):
        return ()


@dataclass(frozen=True)
class _Level:
    stab: frozenset
    group: FiniteGroup
    inc: GroupHom


class BurnsideTambara(TambaraFunctorOracle):
    """The Burnside Tambara functor of ``G``.

    A value at ``X`` is a tuple with one :class:`BurnsideElement` per orbit
    of ``X`` (in ``X.orbit_list`` order), living over the stabilizer of the
    orbit's least point. Restriction, transfer and norm are assembled from
    :func:`restrict_b`, :func:`transfer` and :func:`norm_virtual` together
    with conjugations between stabilizers.
    """

    grouplike = True

    def __init__(self, G: FiniteGroup):
        self.G = G
        self._incs = {}
        self._conjs = {}

    def level(self, X: GSet, x) -> _Level:
        H = X.stabilizer(x)
        Hg, inc = self.G.subgroup_group(H)
        return _Level(H, Hg, inc)

    def _at(self, X: GSet, value, x):
        """The component of ``value`` at an arbitrary point ``x``, over ``Stab(x)``."""
        o = X.orbit_of[x]
        x0 = X.orbit_list[o][0]
        if x == x0:
            return value[o]
        g = X.transporter(x0, x)
        H = X.stabilizer(x0)
        c = self._conjs.get((H, g))
        if c is None:
            G = self.G
            K = G.conjugate(H, g)
            Hg, incH = G.subgroup_group(H)
            Kg, incK = G.subgroup_group(K)
            pos = {h: i for i, h in enumerate(incH.images)}
            gi = G.inv(g)
            c = GroupHom(Kg, Hg, [pos[G.conj(gi, incK.images[k])] for k in Kg.elements],
                         check=False)
            self._conjs[(H, g)] = c
        return restrict_b(c, value[o])

    def _sub_inclusion(self, L, K) -> GroupHom:
        """``L <= K`` (element sets of G) as an injective hom of subgroup groups."""
        hit = self._incs.get((L, K))
        if hit is not None:
            return hit
        G = self.G
        Lg, incL = G.subgroup_group(L)
        Kg, incK = G.subgroup_group(K)
        pos = {k: i for i, k in enumerate(incK.images)}
        inc = GroupHom(Lg, Kg, [pos[incL.images[l]] for l in Lg.elements], check=False)
        self._incs[(L, K)] = inc
        return inc

    def restrict(self, f: GSetMap, value):
        X2, X = f.source, f.target
        out = []
        for orb in X2.orbit_list:
            x2 = orb[0]
            y = f.images[x2]
            elt = self._at(X, value, y)
            alpha = self._sub_inclusion(X2.stabilizer(x2), X.stabilizer(y))
            out.append(restrict_b(alpha, elt))
        return tuple(out)

    def transfer(self, t: GSetMap, value):
        Y, B = t.source, t.target
        out = []
        for orb in B.orbit_list:
            b = orb[0]
            K = B.stabilizer(b)
            Kg = self.G.subgroup_group(K)[0]
            acc = BurnsideElement.zero(Kg)
            for yorb in Y.orbit_list:
                ys = [y for y in yorb if t.images[y] == b]
                if not ys:
                    continue
                y = ys[0]
                elt = self._at(Y, value, y)
                acc = acc + transfer(self._sub_inclusion(Y.stabilizer(y), K), elt)
            out.append(acc)
        return tuple(out)

    def norm(self, n: GSetMap, value):
        X, Y = n.source, n.target
        G = self.G
        fibers = {}
        for x, y in enumerate(n.images):
            fibers.setdefault(y, []).append(x)
        out = []
        for orb in Y.orbit_list:
            y = orb[0]
            K = Y.stabilizer(y)
            Kg = G.subgroup_group(K)[0]
            acc = BurnsideElement.one(Kg)
            seen = set()
            for x in fibers.get(y, ()):
                if x in seen:
                    continue
                seen |= {X.act[k][x] for k in K}
                elt = self._at(X, value, x)
                acc = acc * norm_virtual(self._sub_inclusion(X.stabilizer(x), K), elt)
            out.append(acc)
        return tuple(out)

    def samples(self, X: GSet):
        """Zero, one, every basis vector, and a few non-additive combinations."""
        levels = [self.level(X, orb[0]).group for orb in X.orbit_list]
        zero = tuple(BurnsideElement.zero(H) for H in levels)
        one = tuple(BurnsideElement.one(H) for H in levels)
        out = [zero, one]
        for i, H in enumerate(levels):
            for c in range(rank(H)):
                b = BurnsideElement.basis(H, c)
                for v in (b, b + BurnsideElement.one(H), b - 2 * BurnsideElement.one(H)):
                    out.append(tuple(v if j == i else one[j] for j in range(len(levels))))
        if levels:
            out.append(tuple(BurnsideElement(H, range(1, rank(H) + 1)) for H in levels))
        uniq = []
        for v in out:
            if v not in uniq:
                uniq.append(v)
        return uniq

    def split(self, Z: GSet, incs, value):
        """Components of a value at ``Z = ⊔ parts`` along the injections."""
        return [self.restrict(i, value) for i in incs]

    def join(self, Z: GSet, incs, parts):
        """Inverse of :meth:`split` (orbits of ``Z`` are orbits of the parts)."""
        out = [None] * len(Z.orbit_list)
        for inc, val in zip(incs, parts):
            for k, orb in enumerate(inc.source.orbit_list):
                out[Z.orbit_of[inc.images[orb[0]]]] = val[k]
        return tuple(out)


def as_tambara_oracle(G: FiniteGroup) -> BurnsideTambara:
    return BurnsideTambara(G)
