"""Bispans ``A <- X -> Y -> B`` of finite G-sets and their composition.

A bispan is read as the word ``T_t ∘ N_n ∘ R_f``: restrict along the left
leg, norm along the middle leg, sum along the right leg. Composition
concatenates words and rewrites them back to that shape:

* ``R_g ∘ T_t  ->  T_p2 ∘ R_p1``   (pullback of ``t`` and ``g``)
* ``R_g ∘ N_n  ->  N_q2 ∘ R_q1``   (pullback of ``n`` and ``g``)
* ``N_n ∘ T_m  ->  T_m' ∘ N_n' ∘ R_eps``   (distributivity diagram)
* two adjacent generators of the same kind merge by composing their maps.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import NamedTuple

from . import gset as gs
from .errors import ClassViolation, InvalidStructure
from .group import FiniteGroup
from .gset import Certificate, GSet, GSetMap
from .spancat import MAP_CLASSES, Span, TripleSpec, _gset_types, _multisets


@dataclass(frozen=True)
class BispanTripleSpec:
    """Ambient world with a norm class ``N`` and a summation class ``M``.

    The left leg is unrestricted. ``E`` is the left class of the (E, M)
    factorization: for ``M = "all"`` it is the isomorphisms, for
    ``M = "injective"`` the surjections.
    """

    world: str = "gset"
    norm: str = "all"
    sum: str = "all"
    group: FiniteGroup | None = None

    def __post_init__(self):
        if self.world != "gset":
            raise ValueError(f"bispans are implemented for G-sets only, not {self.world!r}")
        for c in (self.norm, self.sum):
            if c not in MAP_CLASSES:
                raise ValueError(f"unknown map class {c!r}")

    @property
    def left_class(self) -> str:
        return {"all": "iso", "injective": "surjective", "iso": "all"}.get(self.sum, "all")

    def is_norm(self, f) -> bool:
        return MAP_CLASSES[self.norm](f)

    def is_sum(self, f) -> bool:
        return MAP_CLASSES[self.sum](f)

    def span_spec(self) -> TripleSpec:
        return TripleSpec(self.world, "all", "all", self.group)


def bispan_triple(G, norm="all", sum="all") -> BispanTripleSpec:
    return BispanTripleSpec("gset", norm, sum, G)


@dataclass(frozen=True, eq=False)
class Bispan:
    """``source <-left- X -norm-> Y -sum-> target``."""

    left: GSetMap
    norm: GSetMap
    sum: GSetMap
    spec: BispanTripleSpec

    def __post_init__(self):
        if self.left.source != self.norm.source:
            raise InvalidStructure("left and norm legs need a common source")
        if self.norm.target != self.sum.source:
            raise InvalidStructure("norm leg must land in the source of the sum leg")
        if not self.spec.is_norm(self.norm):
            raise ClassViolation(f"norm leg is not in class {self.spec.norm!r}")
        if not self.spec.is_sum(self.sum):
            raise ClassViolation(f"sum leg is not in class {self.spec.sum!r}")

    @property
    def source(self) -> GSet:
        return self.left.target

    @property
    def target(self) -> GSet:
        return self.sum.target

    @property
    def X(self) -> GSet:
        return self.norm.source

    @property
    def Y(self) -> GSet:
        return self.sum.source

    def __repr__(self):
        return (f"Bispan({self.source.size} <- {self.X.size} -> {self.Y.size}"
                f" -> {self.target.size})")

    def word(self) -> list:
        return [Gen("R", self.left), Gen("N", self.norm), Gen("T", self.sum)]


def identity_bispan(A: GSet, spec: BispanTripleSpec) -> Bispan:
    i = GSetMap.identity(A)
    return Bispan(i, i, i, spec)


def restriction(f: GSetMap, spec) -> Bispan:
    """``R_f``: a bispan from ``f.target`` to ``f.source``."""
    i = GSetMap.identity(f.source)
    return Bispan(f, i, i, spec)


def norm(n: GSetMap, spec) -> Bispan:
    i, j = GSetMap.identity(n.source), GSetMap.identity(n.target)
    return Bispan(i, n, j, spec)


def transfer(t: GSetMap, spec) -> Bispan:
    i = GSetMap.identity(t.source)
    return Bispan(i, i, t, spec)


def from_span(s: Span, spec: BispanTripleSpec) -> Bispan:
    """The bispan with identity norm leg (the forgetful inclusion of spans)."""
    return Bispan(s.left, GSetMap.identity(s.apex), s.right, spec)


def to_span(b: Bispan) -> Span:
    if not b.norm.is_iso():
        raise ClassViolation("only bispans with invertible norm leg are spans")
    inv = [0] * b.Y.size
    for x, y in enumerate(b.norm.images):
        inv[y] = x
    left = GSetMap(b.Y, b.source, [b.left.images[inv[y]] for y in b.Y.points], check=False)
    return Span(left, b.sum, b.spec.span_spec())


# -- generator words -----------------------------------------------------------


class Gen(NamedTuple):
    """One generator: ``R`` along ``map`` runs from ``map.target`` to ``map.source``;
    ``N`` and ``T`` run from ``map.source`` to ``map.target``."""

    kind: str
    map: GSetMap

    @property
    def dom(self):
        return self.map.target if self.kind == "R" else self.map.source

    @property
    def cod(self):
        return self.map.source if self.kind == "R" else self.map.target


_ORDER = {"R": 0, "N": 1, "T": 2}


def _redexes(word):
    return [i for i in range(len(word) - 1)
            if _ORDER[word[i].kind] >= _ORDER[word[i + 1].kind]]


def _rewrite(a: Gen, b: Gen) -> list:
    """Rewrite ``b ∘ a`` (``a`` applied first) into generators in normal order."""
    if a.kind == b.kind:
        if a.kind == "R":
            return [Gen("R", b.map.then(a.map))]
        return [Gen(a.kind, a.map.then(b.map))]
    if b.kind == "R":
        _, p1, p2 = gs.pullback(a.map, b.map)
        return [Gen("R", p1), Gen(a.kind, p2)]
    # a is T, b is N
    d = gs.dependent_product(b.map, a.map)
    return [Gen("R", d.eps), Gen("N", d.n_prime), Gen("T", d.m_prime)]


@dataclass
class RewriteTrace:
    strategy: str
    steps: list = field(default_factory=list)


def normalize(word, strategy: str = "leftmost", seed: int = 0,
              trace: RewriteTrace | None = None) -> list:
    """Rewrite a composable generator word to the shape ``R? N? T?``.

    ``strategy`` picks the redex: ``"leftmost"`` (first applied),
    ``"rightmost"`` or ``"random"`` (seeded).
    """
    word = list(word)
    for a, b in zip(word, word[1:]):
        if a.cod != b.dom:
            raise InvalidStructure("generator word is not composable")
    rng = random.Random(seed)
    while True:
        red = _redexes(word)
        if not red:
            return word
        if strategy == "leftmost":
            i = red[0]
        elif strategy == "rightmost":
            i = red[-1]
        elif strategy == "random":
            i = rng.choice(red)
        else:
            raise ValueError(f"unknown rewrite strategy {strategy!r}")
        new = _rewrite(word[i], word[i + 1])
        if trace is not None:
            trace.steps.append((i, word[i].kind + word[i + 1].kind,
                                "".join(g.kind for g in new)))
        word[i:i + 2] = new


def bispan_of_word(word, source: GSet, spec: BispanTripleSpec) -> Bispan:
    """Assemble a normal-form word (possibly with missing letters) into a bispan."""
    parts = {g.kind: g.map for g in word}
    if len(parts) != len(word) or _redexes(word):
        raise InvalidStructure("word is not in normal form")
    f = parts.get("R") or GSetMap.identity(source)
    n = parts.get("N") or GSetMap.identity(f.source)
    t = parts.get("T") or GSetMap.identity(n.target)
    return Bispan(f, n, t, spec)


def compose_bispans(u: Bispan, v: Bispan, strategy: str = "leftmost",
                    seed: int = 0) -> Bispan:
    """``v ∘ u`` for ``u: A -> B`` and ``v: B -> C``, by word normalization."""
    if u.spec != v.spec:
        raise InvalidStructure("bispans from different triples")
    if u.target != v.source:
        raise InvalidStructure("bispans are not composable")
    return bispan_of_word(normalize(u.word() + v.word(), strategy, seed), u.source, u.spec)


def compose_many(bispans, strategy: str = "leftmost", seed: int = 0) -> Bispan:
    word = [g for b in bispans for g in b.word()]
    return bispan_of_word(normalize(word, strategy, seed), bispans[0].source, bispans[0].spec)


# -- isomorphism and canonical forms -----------------------------------------


def bispan_iso(u: Bispan, v: Bispan) -> bool:
    """Search for apex isomorphisms ``X -> X'``, ``Y -> Y'`` commuting with all legs."""
    if u.spec != v.spec or u.source != v.source or u.target != v.target:
        return False
    if u.X.orbit_counts != v.X.orbit_counts or u.Y.orbit_counts != v.Y.orbit_counts:
        return False
    for beta in gs.find_isos(u.Y, v.Y, over=[(u.sum, v.sum)]):
        bn = u.norm.then(beta)
        if gs.find_iso(u.X, v.X, over=[(u.left, v.left), (bn, v.norm)]) is not None:
            return True
    return False


def _canonical_Y(b: Bispan):
    kt = gs.over_type_key(b.sum)
    tc = gs.from_over_key(kt, b.target)
    return kt, tc


def bispan_key(b: Bispan) -> tuple:
    """Complete iso invariant: equal keys iff :func:`bispan_iso`.

    The sum leg is put in canonical form; the left and norm legs then give a
    G-set over ``A × Y_c``, whose canonical key is minimized over the
    automorphisms of ``Y_c`` over the target.
    """
    kt, tc = _canonical_Y(b)
    Yc = tc.source
    P, _, _ = gs.product(b.source, Yc)
    best = None
    for beta in gs.find_isos(b.Y, Yc, over=[(b.sum, tc)]):
        imgs = [b.left.images[x] * Yc.size + beta.images[b.norm.images[x]]
                for x in b.X.points]
        k = gs.over_type_key(GSetMap(b.X, P, imgs, check=False))
        if best is None or k < best:
            best = k
    return (kt, best)


def bispan_from_key(key, A: GSet, B: GSet, spec: BispanTripleSpec) -> Bispan:
    kt, kx = key
    tc = gs.from_over_key(kt, B)
    P, p1, p2 = gs.product(A, tc.source)
    xm = gs.from_over_key(kx, P)
    return Bispan(xm.then(p1), xm.then(p2), tc, spec)


def canonical_bispan(b: Bispan) -> Bispan:
    return bispan_from_key(bispan_key(b), b.source, b.target, b.spec)


def bispan_enumerate(A: GSet, B: GSet, spec: BispanTripleSpec, cap: int) -> list:
    """Canonical representatives of all bispans ``A -> B`` with ``|X|, |Y| <= cap``."""
    G = A.group
    order = len(G)
    out = {}
    ytypes = _gset_types(B)
    for ky in _multisets(ytypes, [order // len(H) for _, H in ytypes], cap):
        tc = gs.from_over_key(tuple(sorted(ky)), B)
        if not spec.is_sum(tc):
            continue
        Y = tc.source
        P, p1, p2 = gs.product(A, Y)
        xtypes = _gset_types(P)
        for kx in _multisets(xtypes, [order // len(H) for _, H in xtypes], cap):
            xm = gs.from_over_key(tuple(sorted(kx)), P)
            n = xm.then(p2)
            if not spec.is_norm(n):
                continue
            b = Bispan(xm.then(p1), n, tc, spec)
            out.setdefault(bispan_key(b), None)
    return [bispan_from_key(k, A, B, spec) for k in sorted(out)]


# -- functoriality certificates --------------------------------------------


def orbit_endpoints(G: FiniteGroup) -> list:
    return [GSet.cosets(G, cl[0]) for cl in G.subgroup_classes]


def check_functoriality(F, spec: BispanTripleSpec, endpoints, cap: int,
                        pairs=None) -> Certificate:
    """Check ``F(v ∘ u) = F(v) ∘ F(u)`` on every composable pair, plus products.

    ``F(v) ∘ F(u)`` is computed generator by generator; ``F(v ∘ u)`` uses the
    normalized composite. ``pairs`` may restrict the pairs that are tried.
    Product preservation is checked on every binary coproduct of endpoints.
    """
    endpoints = list(endpoints)
    homs = {(i, j): bispan_enumerate(A, B, spec, cap)
            for i, A in enumerate(endpoints) for j, B in enumerate(endpoints)}
    checked = 0
    for i, A in enumerate(endpoints):
        samples = F.samples(A)
        for j in range(len(endpoints)):
            for k in range(len(endpoints)):
                for u in homs[(i, j)]:
                    for v in homs[(j, k)]:
                        if pairs is not None and not pairs(u, v):
                            continue
                        w = compose_bispans(u, v)
                        for x in samples:
                            lhs = F.evaluate(w.left, w.norm, w.sum, x)
                            rhs = F.evaluate(v.left, v.norm, v.sum,
                                             F.evaluate(u.left, u.norm, u.sum, x))
                            checked += 1
                            if not F.equal(lhs, rhs):
                                return Certificate(False, checked, (u, v, x),
                                                   "F(v∘u) differs from F(v)∘F(u)")
    cert = check_products(F, endpoints)
    return Certificate(cert.passed, checked + cert.checked, cert.witness, cert.reason)


def check_products(F, endpoints) -> Certificate:
    """``F(X ⊔ Y) -> F(X) × F(Y)`` (restriction to both summands) is a bijection."""
    checked = 0
    for X in endpoints:
        for Y in endpoints:
            Z, incs = gs.coproduct([X, Y])
            for z in F.samples(Z):
                parts = [F.restrict(i, z) for i in incs]
                checked += 1
                if not F.equal(F.join(Z, incs, parts), z):
                    return Certificate(False, checked, (X, Y, z), "F(X⊔Y) -> F(X)×F(Y) not injective")
            for a in F.samples(X):
                for b in F.samples(Y):
                    z = F.join(Z, incs, [a, b])
                    checked += 1
                    back = [F.restrict(i, z) for i in incs]
                    if not (F.equal(back[0], a) and F.equal(back[1], b)):
                        return Certificate(False, checked, (X, Y, a, b),
                                           "F(X⊔Y) -> F(X)×F(Y) not surjective")
    return Certificate(True, checked)


def check_confluence(u: Bispan, v: Bispan, seeds=(0, 1, 2)) -> Certificate:
    """All rewrite strategies give isomorphic composites."""
    ref = compose_bispans(u, v, "leftmost")
    others = [("rightmost", 0)] + [("random", s) for s in seeds]
    for strat, seed in others:
        w = compose_bispans(u, v, strat, seed)
        if not bispan_iso(ref, w):
            return Certificate(False, len(others), (u, v, strat, seed),
                               f"strategy {strat} (seed {seed}) disagrees with leftmost")
    return Certificate(True, len(others))
