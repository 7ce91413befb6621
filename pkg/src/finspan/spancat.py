"""Span categories of finite G-sets and of finite groupoids, at the level of
iso classes of spans.

Two worlds are supported and never mixed:

* ``"gset"``: spans of finite G-sets, composed by strict pullback;
* ``"groupoid"``: spans of finite groupoids whose forwards leg is faithful,
  composed by iso-comma pullback.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import factorial
from typing import Callable

from . import groupoid as gpd
from . import gset as gs
from .errors import ClassViolation, InvalidStructure
from .group import FiniteGroup, direct_product
from .groupoid import FiniteGroupoid, GroupoidMap
from .gset import GSet, GSetMap


# -- leg classes -------------------------------------------------------------

def _all(f):
    return True


def _iso(f):
    if isinstance(f, GSetMap):
        return f.is_iso()
    return gpd.is_equivalence(f)


def _faithful(f):
    # every map of G-sets is faithful on action groupoids
    return gpd.is_faithful(f) if isinstance(f, GroupoidMap) else True


MAP_CLASSES: dict[str, Callable] = {
    "all": _all,
    "iso": _iso,
    "injective": lambda f: f.is_injective(),
    "surjective": lambda f: f.is_surjective(),
    "faithful": _faithful,
}


@dataclass(frozen=True)
class TripleSpec:
    """An adequate triple: ambient world plus backwards and forwards classes."""

    world: str                      # "gset" or "groupoid"
    backwards: str = "all"
    forwards: str = "all"
    group: FiniteGroup | None = None

    def __post_init__(self):
        if self.world not in ("gset", "groupoid"):
            raise ValueError(f"unknown world {self.world!r}")
        for c in (self.backwards, self.forwards):
            if c not in MAP_CLASSES:
                raise ValueError(f"unknown map class {c!r}")

    @property
    def name(self):
        base = f"F_{self.group.name}" if self.world == "gset" and self.group else self.world
        return f"({base}, {self.backwards}, {self.forwards})"

    def is_backwards(self, f):
        return MAP_CLASSES[self.backwards](f)

    def is_forwards(self, f):
        return MAP_CLASSES[self.forwards](f)

    def opposite(self) -> "TripleSpec":
        return TripleSpec(self.world, self.forwards, self.backwards, self.group)


def gset_triple(G, backwards="all", forwards="all") -> TripleSpec:
    return TripleSpec("gset", backwards, forwards, G)


GROUPOID_ORBITAL = TripleSpec("groupoid", "all", "faithful")


def check_adequate(spec: TripleSpec, cospans) -> gs.Certificate:
    """Spot-check pullback stability on sample cospans ``(b, f)`` with common target.

    ``f`` must stay forwards when pulled back along a backwards ``b``, and vice versa.
    """
    n = 0
    for b, f in cospans:
        if not (spec.is_backwards(b) and spec.is_forwards(f)):
            continue
        n += 1
        if spec.world == "gset":
            _, pb, pf = gs.pullback(b, f)
        else:
            sq = gpd.iso_comma_pullback(b, f)
            pb, pf = sq.p, sq.q
        if not spec.is_forwards(pb):
            return gs.Certificate(False, n, (b, f), "forwards class not stable under pullback")
        if not spec.is_backwards(pf):
            return gs.Certificate(False, n, (b, f), "backwards class not stable under pullback")
    return gs.Certificate(True, n)


# -- spans ---------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Span:
    """``source <-left- apex -right-> target``."""

    left: object
    right: object
    spec: TripleSpec

    def __post_init__(self):
        L, R = self.left, self.right
        want = GSetMap if self.spec.world == "gset" else GroupoidMap
        if not isinstance(L, want) or not isinstance(R, want):
            raise InvalidStructure(f"{self.spec.world} span needs {want.__name__} legs")
        if L.source != R.source:
            raise InvalidStructure("span legs need a common apex")
        if not self.spec.is_backwards(L):
            raise ClassViolation(f"left leg is not in class {self.spec.backwards!r}")
        if not self.spec.is_forwards(R):
            raise ClassViolation(f"right leg is not in class {self.spec.forwards!r}")

    @property
    def apex(self):
        return self.left.source

    @property
    def source(self):
        return self.left.target

    @property
    def target(self):
        return self.right.target

    def __repr__(self):
        return f"Span({self.source!r} <- {self.apex!r} -> {self.target!r})"


def identity_span(X, spec: TripleSpec) -> Span:
    ident = GSetMap.identity(X) if spec.world == "gset" else GroupoidMap.identity(X)
    return Span(ident, ident, spec)


def backwards_span(b, spec) -> Span:
    """``b.target <-b- b.source == b.source``."""
    ident = GSetMap.identity(b.source) if spec.world == "gset" else GroupoidMap.identity(b.source)
    return Span(b, ident, spec)


def forwards_span(f, spec) -> Span:
    """``f.source == f.source -f-> f.target``."""
    ident = GSetMap.identity(f.source) if spec.world == "gset" else GroupoidMap.identity(f.source)
    return Span(ident, f, spec)


def _pullback(spec, f, g):
    if spec.world == "gset":
        return gs.pullback(f, g)
    sq = gpd.iso_comma_pullback(f, g)
    return sq.apex, sq.p, sq.q


def compose_spans(s: Span, t: Span, decompose: bool = False):
    """``t ∘ s`` for ``s: X -> Y`` and ``t: Y -> Z``.

    With ``decompose=True`` the apex is split into its orbits (components)
    and a list of ``(SpanHomClass, multiplicity)`` pairs is returned.
    """
    if s.spec != t.spec:
        raise InvalidStructure("spans live in different triples")
    if s.target != t.source:
        raise InvalidStructure("spans are not composable")
    P, p1, p2 = _pullback(s.spec, s.right, t.left)
    left = p1.then(s.left)
    right = p2.then(t.right)
    try:
        out = Span(left, right, s.spec)
    except ClassViolation as exc:
        raise ClassViolation(f"composite leaves its class ({exc}); triple is not adequate")
    if not decompose:
        return out
    return summands(out)


def summands(s: Span) -> list:
    """Split a span into transitive (connected) pieces, grouped by iso class."""
    pieces = []
    if s.spec.world == "gset":
        for orb in s.apex.orbit_list:
            Z, inc = gs.subset(s.apex, orb)
            pieces.append(Span(inc.then(s.left), inc.then(s.right), s.spec))
    else:
        for comp in gpd.components(s.apex):
            _, inc = gpd.full_subgroupoid(s.apex, comp.objects)
            pieces.append(Span(inc.then(s.left), inc.then(s.right), s.spec))
    counts = Counter()
    reps = {}
    for p in pieces:
        k = span_key(p)
        counts[k] += 1
        reps.setdefault(k, p)
    return [(hom_class(reps[k]), counts[k]) for k in sorted(counts)]


def span_sum(spans) -> Span:
    """Disjoint union of parallel spans."""
    spans = list(spans)
    spec = spans[0].spec
    if spec.world == "gset":
        Z, _ = gs.coproduct([s.apex for s in spans])
        return Span(gs.copair([s.left for s in spans], Z), gs.copair([s.right for s in spans], Z),
                    spec)
    return Span(gpd.copair([s.left for s in spans]), gpd.copair([s.right for s in spans]), spec)


# -- canonical forms -----------------------------------------------------------


def _joint(s: Span):
    X, Y = s.source, s.target
    P, p1, p2 = gs.product(X, Y)
    n = Y.size
    j = GSetMap(s.apex, P, [s.left.images[z] * n + s.right.images[z] for z in s.apex.points],
                check=False)
    return j, p1, p2


def _groupoid_types(s: Span) -> list:
    """Per apex component: (X component, Y component, image subgroup of Aut×Aut)."""
    X, Y = s.source, s.target
    cx, cy = gpd.components(X), gpd.components(Y)
    ix, iy = gpd.component_index(X, cx), gpd.component_index(Y, cy)
    out = []
    for comp in gpd.components(s.apex):
        z0 = comp.basepoint
        x, y = s.left.obj[z0], s.right.obj[z0]
        CX, CY = cx[ix[x]], cy[iy[y]]
        kx, ky = CX.paths[x], CY.paths[y]
        px = {f: i for i, f in enumerate(CX.autos)}
        py = {f: i for i, f in enumerate(CY.autos)}
        GXY = _aut_product(CX, CY)
        m = CY.group.order
        img = []
        for h in comp.autos:
            a = px[X.compose(kx, X.compose(s.left.mor[h], X.inv(kx)))]
            b = py[Y.compose(ky, Y.compose(s.right.mor[h], Y.inv(ky)))]
            img.append(a * m + b)
        if len(set(img)) != len(img):
            raise ClassViolation("groupoid span legs are not jointly faithful")
        S = frozenset(img)
        rep = GXY.class_rep(GXY.class_index(S))
        out.append((ix[x], iy[y], tuple(sorted(rep)), GXY, S))
    return out


_AUT_PRODUCTS = {}


def _aut_product(CX, CY) -> FiniteGroup:
    key = (CX.group, CY.group)
    G = _AUT_PRODUCTS.get(key)
    if G is None:
        G = _AUT_PRODUCTS[key] = direct_product(CX.group, CY.group)
    return G


def span_key(s: Span) -> tuple:
    """Complete iso invariant of a span (equal keys iff ``span_iso``)."""
    if s.spec.world == "gset":
        j, _, _ = _joint(s)
        return gs.over_type_key(j)
    return tuple(sorted((i, j, rep) for i, j, rep, _, _ in _groupoid_types(s)))


def canonical_span(s: Span) -> Span:
    """The deterministic representative of the iso class of ``s``.

    G-set world: the apex is rebuilt orbit by orbit from the sorted list of
    least ``(image point, stabilizer)`` pairs. Groupoid world: one
    component ``B S`` per type, legs through the skeleton basepoints.
    """
    if s.spec.world == "gset":
        j, p1, p2 = _joint(s)
        c = gs.from_over_key(gs.over_type_key(j), j.target)
        return Span(c.then(p1), c.then(p2), s.spec)
    return _groupoid_span_from_types(s.source, s.target, span_key(s), s.spec)


def _groupoid_span_from_types(X, Y, key, spec) -> Span:
    cx, cy = gpd.components(X), gpd.components(Y)
    parts, lobj, lmor, robj, rmor = [], [], [], [], []
    for i, j, rep in key:
        CX, CY = cx[i], cy[j]
        GXY = _aut_product(CX, CY)
        Sg, inc = GXY.subgroup_group(rep)
        m = CY.group.order
        parts.append(FiniteGroupoid.from_group(Sg))
        lobj.append(CX.basepoint)
        robj.append(CY.basepoint)
        lmor += [CX.autos[inc.images[h] // m] for h in Sg.elements]
        rmor += [CY.autos[inc.images[h] % m] for h in Sg.elements]
    Z, _ = gpd.coproduct(parts)
    return Span(GroupoidMap(Z, X, lobj, lmor), GroupoidMap(Z, Y, robj, rmor), spec)


def span_iso(s: Span, t: Span) -> bool:
    """Is there an apex isomorphism (equivalence) commuting with both legs?

    G-set world: explicit backtracking search for the isomorphism.
    Groupoid world: comparison of skeletal types, which classify spans with
    jointly faithful legs up to equivalence over both ends.
    """
    if s.spec != t.spec or s.source != t.source or s.target != t.target:
        return False
    if s.spec.world == "gset":
        return gs.find_iso(s.apex, t.apex, over=[(s.left, t.left), (s.right, t.right)]) is not None
    return span_key(s) == span_key(t)


def span_automorphisms(s: Span) -> int:
    """Number of automorphisms of ``s`` (apex automorphisms over both legs)."""
    if s.spec.world == "gset":
        j, _, _ = _joint(s)
        W = j.target
        key = gs.over_type_key(j)
        total = 1
        for t, k in Counter(key).items():
            w, H = t
            Gw = W.stabilizer(w)
            N = [g for g in Gw if s.apex.group.conjugate(H, g) == frozenset(H)]
            total *= factorial(k) * (len(N) // len(H)) ** k
        return total
    total = 1
    types = _groupoid_types(s)
    counts = Counter((i, j, rep) for i, j, rep, _, _ in types)
    seen = {}
    for i, j, rep, GXY, _ in types:
        seen[(i, j, rep)] = GXY
    for t, k in counts.items():
        GXY = seen[t]
        S = frozenset(t[2])
        total *= factorial(k) * (len(GXY.normalizer(S)) // len(S)) ** k
    return total


@dataclass(frozen=True, eq=False)
class SpanHomClass:
    representative: Span
    automorphisms: int
    key: tuple

    def __eq__(self, other):
        return isinstance(other, SpanHomClass) and self.key == other.key

    def __hash__(self):
        return hash(self.key)


def hom_class(s: Span) -> SpanHomClass:
    c = canonical_span(s)
    return SpanHomClass(c, span_automorphisms(c), span_key(c))


# -- factorization and duality -----------------------------------------------


def factor_span(s: Span):
    """``s = forwards ∘ backwards`` with ``X <- Z == Z`` then ``Z == Z -> Y``."""
    return backwards_span(s.left, s.spec), forwards_span(s.right, s.spec)


def dualize(s: Span) -> Span:
    """The same span read backwards, in the opposite triple."""
    return Span(s.right, s.left, s.spec.opposite())


# -- enumeration ---------------------------------------------------------------


def _gset_types(W: GSet):
    """All G-orbits of pairs ``(w, S)`` with ``S <= stab(w)``, as least representatives."""
    G = W.group
    out = set()
    for w in W.points:
        Gw = W.stabilizer(w)
        for S in G.subgroups:
            if S <= Gw:
                best = min((W.act[g][w], tuple(sorted(G.conj(g, h) for h in S)))
                           for g in G.elements)
                out.add(best)
    return sorted(out, key=lambda t: (len(G) // len(t[1]), t))


def _multisets(types, weights, cap):
    """Multisets of ``types`` (as sorted tuples) with total weight ``<= cap``."""
    out = []

    def rec(i, acc, left):
        if i == len(types):
            out.append(tuple(acc))
            return
        w = weights[i]
        k = 0
        while k * w <= left:
            rec(i + 1, acc + [types[i]] * k, left - k * w)
            k += 1
            if w == 0:
                break

    rec(0, [], cap)
    return out


def hom_enumerate(X, Y, spec: TripleSpec, cap: int) -> list:
    """All iso classes of spans ``X <- Z -> Y`` in ``spec`` with apex size ``<= cap``.

    Apex size is the number of points (G-sets) or of components (groupoids).
    Classes are returned in canonical order: by apex size, then by key.
    """
    if spec.world == "gset":
        P, p1, p2 = gs.product(X, Y)
        types = _gset_types(P)
        weights = [len(X.group) // len(H) for _, H in types]
        out = []
        for key in _multisets(types, weights, cap):
            key = tuple(sorted(key))
            c = gs.from_over_key(key, P)
            left, right = c.then(p1), c.then(p2)
            if not (spec.is_backwards(left) and spec.is_forwards(right)):
                continue
            s = Span(left, right, spec)
            out.append(SpanHomClass(s, span_automorphisms(s), key))
        out.sort(key=lambda h: (h.representative.apex.size, h.key))
        return out
    cx, cy = gpd.components(X), gpd.components(Y)
    types = []
    for i, CX in enumerate(cx):
        for j, CY in enumerate(cy):
            GXY = _aut_product(CX, CY)
            m = CY.group.order
            for cl in GXY.subgroup_classes:
                S = cl[0]
                proj_y_injective = len({h % m for h in S}) == len(S)
                if spec.forwards == "faithful" and not proj_y_injective:
                    continue
                types.append((i, j, tuple(sorted(S))))
    out = []
    for key in _multisets(types, [1] * len(types), cap):
        key = tuple(sorted(key))
        s = _groupoid_span_from_types(X, Y, key, spec)
        if not (spec.is_backwards(s.left) and spec.is_forwards(s.right)):
            continue
        out.append(SpanHomClass(s, span_automorphisms(s), key))
    out.sort(key=lambda h: (len(h.key), h.key))
    return out


# -- arrow-category census -----------------------------------------------------


def arrow_key(a: GSetMap) -> tuple:
    """Complete invariant of an arrow ``S -> T`` up to isomorphism of arrows."""
    T = a.target
    Tc = GSet.from_classes(T.group, T.orbit_counts)
    sigma = gs.find_iso(T, Tc)
    moved = GSetMap(a.source, Tc, [sigma.images[t] for t in a.images], check=False)
    best = min(gs.over_type_key(moved.then(tau)) for tau in gs.find_isos(Tc, Tc))
    return (T.orbit_counts, best)


@dataclass
class EnvReport:
    cap: int
    objects: list = field(default_factory=list)          # arrow keys
    morphisms: dict = field(default_factory=dict)        # (i, j) -> count

    @property
    def n_objects(self):
        return len(self.objects)

    @property
    def n_morphisms(self):
        return sum(self.morphisms.values())


def _arrows_up_to_iso(spec: TripleSpec, cap: int):
    G = spec.group
    seen = {}
    for T in gs.gsets_up_to_iso(G, cap):
        for S in gs.gsets_up_to_iso(G, cap):
            for a in gs.equivariant_maps(S, T):
                if not spec.is_forwards(a):
                    continue
                k = arrow_key(a)
                if k not in seen:
                    seen[k] = a
    return [seen[k] for k in sorted(seen)]


def arrow_env_enumerate(spec: TripleSpec, cap: int, morphisms: bool = True) -> EnvReport:
    """Census of spans of arrows in the forwards class, within ``cap``.

    Objects: forwards-class arrows ``S -> T`` with ``|S|, |T| <= cap`` up to
    iso. A morphism ``a -> a'`` is a span ``a <- a'' -> a'`` of arrows whose
    left square is a pullback, with ``|S''|, |T''| <= cap``, up to iso of the
    middle arrow. This is a diagnostic count only.
    """
    if spec.world != "gset":
        raise InvalidStructure("the arrow census is implemented for the G-set world")
    arrows = _arrows_up_to_iso(spec, cap)
    report = EnvReport(cap, [arrow_key(a) for a in arrows])
    if not morphisms:
        return report
    for i, a in enumerate(arrows):
        for j, a2 in enumerate(arrows):
            report.morphisms[(i, j)] = _count_arrow_spans(spec, a, a2, cap)
    return report


def _count_arrow_spans(spec, a: GSetMap, a2: GSetMap, cap: int) -> int:
    T, T2 = a.target, a2.target
    P, p1, p2 = gs.product(T, T2)
    total = 0
    types = _gset_types(P)
    weights = [len(T.group) // len(H) for _, H in types]
    for key in _multisets(types, weights, cap):
        key = tuple(sorted(key))
        c = gs.from_over_key(key, P)
        v, q = c.then(p1), c.then(p2)            # T'' -> T, T'' -> T'
        Spp, top, mid = gs.pullback(a, v)         # S'' = S ×_T T''
        if Spp.size > cap or not spec.is_forwards(mid):
            continue
        autos = gs.automorphisms(c.source, over=[v, q])
        maps = list(gs.equivariant_maps(Spp, a2.source,
                                        over=[(mid.then(q), a2)]))
        # orbits of the automorphism group of T'' acting on the maps S'' -> S'
        index = {(z, t): k for k, (z, t) in enumerate(zip(top.images, mid.images))}
        seen = set()
        for p in maps:
            if p.images in seen:
                continue
            total += 1
            for tau in autos:
                moved = [None] * Spp.size
                for k in Spp.points:
                    k2 = index[(top.images[k], tau.images[mid.images[k]])]
                    moved[k2] = p.images[k]
                seen.add(tuple(moved))
    return total
