"""Finite G-sets, equivariant maps and the operations of the category F_G.

A :class:`GSet` stores its action as a table ``act[g][x]``. Everything here is
exact enumeration; the caps in :mod:`finspan.caps` guard the constructions
that can explode (products, sections).
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import NamedTuple

from . import caps as _caps
from .errors import InvalidStructure
from .group import FiniteGroup, GroupHom, conjugacy_classes_of_homs, symmetric


class GSet:
    """A finite left G-set."""

    def __init__(self, group: FiniteGroup, act, check=True):
        self.group = group
        self.act = tuple(tuple(row) for row in act)
        if len(self.act) != group.order:
            raise InvalidStructure("action table needs one row per group element")
        self.size = len(self.act[0]) if self.act else 0
        self._hash = hash(self.act)
        if check:
            self._check()

    def _check(self):
        G, n = self.group, self.size
        rng = list(range(n))
        if list(self.act[G.identity]) != rng:
            raise InvalidStructure("identity does not act trivially")
        for row in self.act:
            if len(row) != n or sorted(row) != rng:
                raise InvalidStructure("action row is not a permutation")
        for g in G.elements:
            for h in G.generators:
                gh = G.mul(g, h)
                ag, ah, agh = self.act[g], self.act[h], self.act[gh]
                for x in rng:
                    if agh[x] != ag[ah[x]]:
                        raise InvalidStructure(f"action fails (gh)x = g(hx) at g={g} h={h} x={x}")

    def __repr__(self):
        return f"GSet({self.group!r}, {self.size} pts)"

    def __eq__(self, other):
        if self is other:
            return True
        return (isinstance(other, GSet) and self._hash == other._hash
                and self.act == other.act and self.group == other.group)

    def __hash__(self):
        return self._hash

    def __len__(self):
        return self.size

    @property
    def points(self):
        return range(self.size)

    def __call__(self, g, x):
        return self.act[g][x]

    # -- constructors ----------------------------------------------------

    @classmethod
    def empty(cls, G):
        return cls(G, [()] * G.order, check=False)

    @classmethod
    def trivial(cls, G, n=1):
        return cls(G, [tuple(range(n))] * G.order, check=False)

    @classmethod
    def point(cls, G):
        return cls.trivial(G, 1)

    @classmethod
    def cosets(cls, G, H):
        """``G/H`` with points the left cosets sorted by least element."""
        cs = G.left_cosets(H)
        which = {}
        for i, c in enumerate(cs):
            for g in c:
                which[g] = i
        reps = [min(c) for c in cs]
        act = [[which[G.mul(g, r)] for r in reps] for g in G.elements]
        return cls(G, act, check=False)

    @classmethod
    def regular(cls, G):
        return cls.cosets(G, [G.identity])

    @classmethod
    def tautological(cls, G):
        """A permutation group acting on the points it permutes."""
        return cls(G, [G.perms[g] for g in G.elements])

    @classmethod
    def from_classes(cls, G, class_counts):
        """Disjoint union with ``class_counts[i]`` copies of ``G/H_i``."""
        parts = []
        for i, k in enumerate(class_counts):
            parts += [cls.cosets(G, G.class_rep(i))] * k
        return coproduct(parts)[0] if parts else cls.empty(G)

    # -- structure ------------------------------------------------------

    @cached_property
    def orbit_list(self) -> tuple:
        """Orbits as sorted point tuples, ordered by least point."""
        seen = [False] * self.size
        out = []
        for x in self.points:
            if seen[x]:
                continue
            orb = sorted({row[x] for row in self.act})
            for y in orb:
                seen[y] = True
            out.append(tuple(orb))
        return tuple(out)

    @cached_property
    def orbit_of(self) -> tuple:
        which = [0] * self.size
        for i, orb in enumerate(self.orbit_list):
            for x in orb:
                which[x] = i
        return tuple(which)

    @cached_property
    def _stabilizers(self) -> list:
        return [None] * self.size

    def stabilizer(self, x) -> frozenset:
        st = self._stabilizers[x]
        if st is None:
            st = frozenset(g for g in self.group.elements if self.act[g][x] == x)
            self._stabilizers[x] = st
        return st

    def fixed_points(self, H) -> list:
        return [x for x in self.points if all(self.act[h][x] == x for h in H)]

    def transporter(self, x, y):
        """Some ``g`` with ``g x = y``, or ``None``."""
        for g in self.group.elements:
            if self.act[g][x] == y:
                return g
        return None

    @cached_property
    def orbit_counts(self) -> tuple:
        """Multiplicity of each orbit type, indexed by subgroup class."""
        G = self.group
        counts = [0] * len(G.subgroup_classes)
        for orb in self.orbit_list:
            counts[G.class_index(self.stabilizer(orb[0]))] += 1
        return tuple(counts)

    def is_transitive(self):
        return len(self.orbit_list) == 1


class OrbitType(NamedTuple):
    class_index: int
    orbit: GSet
    stabilizer: frozenset
    multiplicity: int


def orbits(X: GSet) -> list:
    """Orbit decomposition of ``X`` as ``(class, G/H, H, multiplicity)`` entries."""
    G = X.group
    out = []
    for i, k in enumerate(X.orbit_counts):
        if k:
            H = G.class_rep(i)
            out.append(OrbitType(i, GSet.cosets(G, H), H, k))
    return out


def is_isomorphic(X: GSet, Y: GSet) -> bool:
    """G-set isomorphism, decided by orbit-type multisets."""
    return X.group == Y.group and X.orbit_counts == Y.orbit_counts


class GSetMap:
    """An equivariant map ``source -> target``."""

    def __init__(self, source: GSet, target: GSet, images, check=True):
        self.source = source
        self.target = target
        self.images = tuple(images)
        if check:
            if source.group != target.group:
                raise InvalidStructure("map between G-sets over different groups")
            if len(self.images) != source.size:
                raise InvalidStructure("map needs one image per source point")
            if any(not 0 <= y < target.size for y in self.images):
                raise InvalidStructure("image outside target")
            for g in source.group.generators:
                sa, ta = source.act[g], target.act[g]
                for x in source.points:
                    if self.images[sa[x]] != ta[self.images[x]]:
                        raise InvalidStructure(f"map is not equivariant at g={g} x={x}")

    def __call__(self, x):
        return self.images[x]

    def __repr__(self):
        return f"GSetMap({self.source.size} -> {self.target.size}, {list(self.images)})"

    def __eq__(self, other):
        return (isinstance(other, GSetMap) and self.source == other.source
                and self.target == other.target and self.images == other.images)

    def __hash__(self):
        return hash(self.images)

    @classmethod
    def identity(cls, X):
        return cls(X, X, X.points, check=False)

    @classmethod
    def to_point(cls, X):
        return cls(X, GSet.point(X.group), [0] * X.size, check=False)

    def then(self, other: "GSetMap") -> "GSetMap":
        """``other ∘ self``."""
        if other.source != self.target:
            raise InvalidStructure("maps are not composable")
        return GSetMap(self.source, other.target,
                       [other.images[y] for y in self.images], check=False)

    def is_iso(self):
        return self.source.size == self.target.size and len(set(self.images)) == self.source.size

    def is_injective(self):
        return len(set(self.images)) == self.source.size

    def is_surjective(self):
        return len(set(self.images)) == self.target.size

    def fiber(self, y) -> list:
        return [x for x in self.source.points if self.images[x] == y]


# -- limits and colimits ---------------------------------------------------


def coproduct(parts):
    """Disjoint union of a list of G-sets, with the injections."""
    parts = list(parts)
    G = parts[0].group
    offs = list(itertools.accumulate([0] + [p.size for p in parts]))
    act = [sum((tuple(o + y for y in p.act[g]) for p, o in zip(parts, offs)), ())
           for g in G.elements]
    Z = GSet(G, act, check=False)
    incs = [GSetMap(p, Z, [o + x for x in p.points], check=False)
            for p, o in zip(parts, offs)]
    return Z, incs


def copair(maps, Z=None) -> GSetMap:
    """The map out of a coproduct induced by ``maps``."""
    if Z is None:
        Z, _ = coproduct([f.source for f in maps])
    return GSetMap(Z, maps[0].target, sum((f.images for f in maps), ()), check=False)


def product(X: GSet, Y: GSet):
    """``X × Y`` (point ``(x, y)`` at ``x*|Y| + y``) with its projections."""
    n = Y.size
    _caps.current().check("points", X.size * n, "product points")
    act = [[X.act[g][p // n] * n + Y.act[g][p % n] for p in range(X.size * n)]
           for g in X.group.elements]
    P = GSet(X.group, act, check=False)
    p1 = GSetMap(P, X, [p // n for p in P.points], check=False)
    p2 = GSetMap(P, Y, [p % n for p in P.points], check=False)
    return P, p1, p2


def pullback(f: GSetMap, g: GSetMap):
    """Strict pullback ``{(x, y) | f(x) = g(y)}`` with both projections."""
    if f.target != g.target:
        raise InvalidStructure("pullback needs a common target")
    by_image = {}
    for y in g.source.points:
        by_image.setdefault(g.images[y], []).append(y)
    pts = [(x, y) for x in f.source.points for y in by_image.get(f.images[x], ())]
    _caps.current().check("points", len(pts), "pullback points")
    idx = {p: i for i, p in enumerate(pts)}
    A, B = f.source.act, g.source.act
    act = [[idx[(A[h][x], B[h][y])] for x, y in pts] for h in f.source.group.elements]
    P = GSet(f.source.group, act, check=False)
    p1 = GSetMap(P, f.source, [x for x, _ in pts], check=False)
    p2 = GSetMap(P, g.source, [y for _, y in pts], check=False)
    return P, p1, p2


def image_factorization(f: GSetMap):
    """``f = incl ∘ surj`` through the image of ``f``."""
    pts = sorted(set(f.images))
    idx = {y: i for i, y in enumerate(pts)}
    T = f.target
    act = [[idx[T.act[g][y]] for y in pts] for g in T.group.elements]
    I = GSet(T.group, act, check=False)
    surj = GSetMap(f.source, I, [idx[y] for y in f.images], check=False)
    incl = GSetMap(I, T, pts, check=False)
    return surj, incl


def subset(X: GSet, pts):
    """The G-stable subset ``pts`` of ``X`` with its inclusion."""
    pts = sorted(pts)
    idx = {y: i for i, y in enumerate(pts)}
    act = [[idx[X.act[g][y]] for y in pts] for g in X.group.elements]
    S = GSet(X.group, act, check=False)
    return S, GSetMap(S, X, pts, check=False)


# -- maps and isomorphisms -------------------------------------------------


def _orbit_reps(X: GSet):
    return [orb[0] for orb in X.orbit_list]


def _extend_from_reps(S: GSet, T: GSet, reps, targets):
    img = [None] * S.size
    for x, y in zip(reps, targets):
        for g in S.group.elements:
            img[S.act[g][x]] = T.act[g][y]
    return img


def equivariant_maps(S: GSet, T: GSet, over=()):
    """All equivariant maps ``S -> T``, optionally over common bases.

    ``over`` is a sequence of pairs ``(s_leg, t_leg)`` of maps into a common
    target; only maps ``h`` with ``t_leg ∘ h = s_leg`` are produced.
    """
    reps = _orbit_reps(S)
    choices = []
    for x in reps:
        H = S.stabilizer(x)
        cand = [y for y in T.points
                if all(T.act[h][y] == y for h in H)
                and all(tl.images[y] == sl.images[x] for sl, tl in over)]
        choices.append(cand)
    for targets in itertools.product(*choices):
        yield GSetMap(S, T, _extend_from_reps(S, T, reps, targets), check=False)


def count_equivariant_maps(S: GSet, T: GSet, over=()) -> int:
    total = 1
    for x in _orbit_reps(S):
        H = S.stabilizer(x)
        total *= sum(1 for y in T.points
                     if all(T.act[h][y] == y for h in H)
                     and all(tl.images[y] == sl.images[x] for sl, tl in over))
    return total


def find_isos(S: GSet, T: GSet, over=()):
    """Generate all isomorphisms ``S -> T`` commuting with the ``over`` legs.

    Backtracks orbit by orbit: a representative with stabilizer ``H`` must go
    to an unused orbit's point with stabilizer exactly ``H``.
    """
    if S.group != T.group or S.orbit_counts != T.orbit_counts:
        return
    reps = _orbit_reps(S)
    buckets = {}
    for y in T.points:
        k = (T.stabilizer(y), tuple(tl.images[y] for _, tl in over))
        buckets.setdefault(k, []).append(y)
    cands = [buckets.get((S.stabilizer(x), tuple(sl.images[x] for sl, _ in over)), [])
             for x in reps]
    if not all(cands):
        return
    # explicit stack: the number of orbits can exceed the recursion limit
    chosen = []
    used = set()
    stack = [iter(cands[0])] if reps else []
    if not reps:
        yield GSetMap(S, T, [], check=False)
        return
    while stack:
        i = len(stack) - 1
        for y in stack[-1]:
            o = T.orbit_of[y]
            if o not in used:
                break
        else:
            stack.pop()
            if chosen:
                used.discard(T.orbit_of[chosen.pop()])
            continue
        used.add(o)
        chosen.append(y)
        if i + 1 == len(reps):
            yield GSetMap(S, T, _extend_from_reps(S, T, reps, chosen), check=False)
            used.discard(o)
            chosen.pop()
        else:
            stack.append(iter(cands[i + 1]))


def find_iso(S: GSet, T: GSet, over=()):
    return next(find_isos(S, T, over), None)


def automorphisms(X: GSet, over=()) -> list:
    legs = [(l, l) for l in over]
    return list(find_isos(X, X, legs))


def over_type_key(f: GSetMap) -> tuple:
    """Complete invariant of ``f`` as an object of the slice over ``f.target``.

    Each orbit of the source contributes the lexicographically least
    ``(f(x), stabilizer(x))`` over its G-orbit; the key is the sorted list.
    """
    S, W, G = f.source, f.target, f.source.group
    keys = []
    for x in _orbit_reps(S):
        w = f.images[x]
        H = S.stabilizer(x)
        best = None
        for g in G.elements:
            k = (W.act[g][w], tuple(sorted(G.conj(g, h) for h in H)))
            if best is None or k < best:
                best = k
        keys.append(best)
    return tuple(sorted(keys))


def from_over_key(key, W: GSet) -> GSetMap:
    """Materialize the canonical G-set over ``W`` described by ``key``."""
    G = W.group
    parts = [GSet.cosets(G, H) for _, H in key]
    if not parts:
        return GSetMap(GSet.empty(G), W, [], check=False)
    Z, incs = coproduct(parts)
    images = []
    for (w, H), part in zip(key, parts):
        # coset gH -> g w, using the least element of each coset
        for c in G.left_cosets(H):
            images.append(W.act[min(c)][w])
    return GSetMap(Z, W, images)


def gsets_up_to_iso(G: FiniteGroup, max_size: int, min_size: int = 0):
    """Representatives of every iso class with ``min_size <= |X| <= max_size``."""
    idx = [len(G) // len(cl[0]) for cl in G.subgroup_classes]
    for n in range(min_size, max_size + 1):
        for counts in _compositions(idx, n):
            yield GSet.from_classes(G, counts)


def _compositions(sizes, n):
    """All count vectors ``c`` with ``sum(c[i]*sizes[i]) == n``."""
    if not sizes:
        if n == 0:
            yield ()
        return
    *rest, last = sizes
    for k in range(n // last, -1, -1):
        for c in _compositions(rest, n - k * last):
            yield c + (k,)


# -- distributivity diagrams -----------------------------------------------


@dataclass(frozen=True)
class DistributivityDiagram:
    """The diagram ``A <-eps- X -n'-> Y -m'-> C`` over ``A -m-> B -n-> C``.

    ``X`` is the pullback of ``m'`` along ``n`` with projections ``m''``
    (to ``B``) and ``n'`` (to ``Y``).
    """

    m: GSetMap
    n: GSetMap
    m_prime: GSetMap
    n_prime: GSetMap
    m_dprime: GSetMap
    eps: GSetMap

    @property
    def Y(self):
        return self.m_prime.source

    @property
    def X(self):
        return self.n_prime.source


@dataclass
class Certificate:
    passed: bool
    checked: int = 0
    witness: object = None
    reason: str = ""

    def __bool__(self):
        return self.passed


def dependent_product(n: GSetMap, m: GSetMap) -> DistributivityDiagram:
    """Distributivity diagram for ``m: A -> B`` and ``n: B -> C``.

    ``Y`` consists of pairs ``(c, s)`` with ``s`` a section of ``m`` over the
    fiber ``n^{-1}(c)``; ``g`` acts by ``(g s)(b) = g s(g^{-1} b)``. ``eps``
    evaluates a section.
    """
    if m.target != n.source:
        raise InvalidStructure("dependent product needs m: A -> B and n: B -> C")
    A, B, C = m.source, n.source, n.target
    G = B.group
    fib_n = [n.fiber(c) for c in C.points]
    fib_m = [m.fiber(b) for b in B.points]
    count = sum(prod(len(fib_m[b]) for b in fb) for fb in fib_n)
    caps = _caps.current()
    caps.check("sections", count, "dependent product sections")
    caps.check("points", count, "dependent product points")
    pts = []
    for c in C.points:
        for s in itertools.product(*(fib_m[b] for b in fib_n[c])):
            pts.append((c, s))
    idx = {p: i for i, p in enumerate(pts)}
    pos = [None] * B.size
    for fb in fib_n:
        for i, b in enumerate(fb):
            pos[b] = i
    act = []
    for g in G.elements:
        gi = G.inv(g)
        row = []
        for c, s in pts:
            gc = C.act[g][c]
            new = tuple(A.act[g][s[pos[B.act[gi][b]]]] for b in fib_n[gc])
            row.append(idx[(gc, new)])
        act.append(row)
    Y = GSet(G, act, check=False)
    m_prime = GSetMap(Y, C, [c for c, _ in pts], check=False)
    X, m_dprime, n_prime = pullback(n, m_prime)
    eps = GSetMap(X, A, [pts[y][1][pos[b]] for b, y in
                         zip(m_dprime.images, n_prime.images)], check=False)
    return DistributivityDiagram(m, n, m_prime, n_prime, m_dprime, eps)


def _structural_problems(d: DistributivityDiagram):
    m, n, mp, np_, mpp, eps = d.m, d.n, d.m_prime, d.n_prime, d.m_dprime, d.eps
    if m.target != n.source:
        return "m and n are not composable"
    if mp.target != n.target:
        return "m' does not land in C"
    if np_.target != mp.source:
        return "n' does not land in Y"
    if mpp.target != n.source or mpp.source != np_.source or eps.source != np_.source:
        return "X legs have mismatched endpoints"
    if eps.target != m.source:
        return "eps does not land in A"
    for f, name in ((mp, "m'"), (np_, "n'"), (mpp, "m''"), (eps, "eps")):
        try:
            GSetMap(f.source, f.target, f.images)
        except InvalidStructure as exc:
            return f"{name}: {exc}"
    if eps.then(m).images != mpp.images:
        return "m ∘ eps != m''"
    if mpp.then(n).images != np_.then(mp).images:
        return "square does not commute"
    pairs = set(zip(mpp.images, np_.images))
    expected = sum(1 for b in n.source.points for y in mp.source.points
                   if n.images[b] == mp.images[y])
    if len(pairs) != mpp.source.size or len(pairs) != expected:
        return "square is not a pullback"
    return None


def verify_distributivity_diagram(d: DistributivityDiagram, test_cap: int) -> Certificate:
    """Check the defining bijection against every ``phi: D -> C`` with ``|D| <= test_cap``.

    For each test object the map ``Map_C(phi, m') -> Map_B(n*phi, m)``,
    ``u |-> eps ∘ n*(u)``, must be a bijection. Since the property is
    invariant under isomorphism of ``D``, one ``D`` per iso class suffices.
    """
    problem = _structural_problems(d)
    if problem:
        return Certificate(False, 0, None, problem)
    C = d.n.target
    G = C.group
    back = {(b, y): x for x, (b, y) in enumerate(zip(d.m_dprime.images, d.n_prime.images))}
    checked = 0
    for D in gsets_up_to_iso(G, test_cap):
        for phi in equivariant_maps(D, C):
            P, pb, pd = pullback(d.n, phi)
            sources = list(equivariant_maps(D, d.Y, over=[(phi, d.m_prime)]))
            n_targets = count_equivariant_maps(P, d.m.source, over=[(pb, d.m)])
            seen = set()
            for u in sources:
                v = tuple(d.eps.images[back[(b, u.images[x])]]
                          for b, x in zip(pb.images, pd.images))
                seen.add(v)
            checked += 1
            if len(seen) != len(sources) or len(sources) != n_targets:
                return Certificate(False, checked, (D, phi),
                                   f"|Map(phi, m')| = {len(sources)}, "
                                   f"image size {len(seen)}, |Map(n*phi, m)| = {n_targets}")
    return Certificate(True, checked)


# -- change of group -------------------------------------------------------


def restrict(alpha: GroupHom, X: GSet) -> GSet:
    """Pull the action back along ``alpha: H -> G`` (Res or Inf)."""
    if alpha.target != X.group:
        raise InvalidStructure("restriction along a hom into the wrong group")
    return GSet(alpha.source, [X.act[alpha.images[h]] for h in alpha.source.elements],
                check=False)


def restrict_map(alpha: GroupHom, f: GSetMap) -> GSetMap:
    return GSetMap(restrict(alpha, f.source), restrict(alpha, f.target), f.images,
                   check=False)


def induce(inc: GroupHom, X: GSet) -> GSet:
    """``G ×_H X`` for an injective ``inc: H -> G``; point ``(i, x)`` at ``i*|X| + x``."""
    if not inc.is_injective():
        raise InvalidStructure("induction needs an injective homomorphism")
    if inc.source != X.group:
        raise InvalidStructure("X is not a set over the source group")
    G, H = inc.target, inc.source
    image = inc.image()
    cosets = G.left_cosets(image)
    which = {}
    for i, c in enumerate(cosets):
        for g in c:
            which[g] = i
    reps = [min(c) for c in cosets]
    pre = {inc.images[h]: h for h in H.elements}
    n = X.size
    _caps.current().check("points", len(reps) * n, "induced points")
    act = []
    for g in G.elements:
        row = [None] * (len(reps) * n)
        for i, r in enumerate(reps):
            gr = G.mul(g, r)
            j = which[gr]
            h = pre[G.mul(G.inv(reps[j]), gr)]
            for x in X.points:
                row[i * n + x] = j * n + X.act[h][x]
        act.append(row)
    return GSet(G, act, check=False)


def deflate(pi, X: GSet, mode: str = "quotient") -> GSet:
    """Deflate along a surjection ``pi: G -> Q`` (or a normal subgroup ``N``).

    ``mode="quotient"`` gives ``X/N`` (left adjoint to inflation);
    ``mode="fixed"`` gives ``X^N`` (right adjoint).
    """
    if not isinstance(pi, GroupHom):
        _, pi = X.group.quotient(pi)
    if not pi.is_surjective():
        raise InvalidStructure("deflation needs a surjective homomorphism")
    G, Q = pi.source, pi.target
    N = pi.kernel()
    section = {}
    for g in G.elements:
        section.setdefault(pi.images[g], g)
    if mode == "quotient":
        classes = []
        which = {}
        for x in X.points:
            if x in which:
                continue
            cl = sorted({X.act[k][x] for k in N})
            for y in cl:
                which[y] = len(classes)
            classes.append(cl[0])
        act = [[which[X.act[section[q]][x]] for x in classes] for q in Q.elements]
    elif mode == "fixed":
        pts = X.fixed_points(N)
        idx = {x: i for i, x in enumerate(pts)}
        act = [[idx[X.act[section[q]][x]] for x in pts] for q in Q.elements]
    else:
        raise ValueError(f"unknown deflation mode {mode!r}")
    return GSet(Q, act, check=False)


# -- the chi census --------------------------------------------------------


@dataclass
class SigmaCensus:
    n: int
    gset_classes: list = field(default_factory=list)
    hom_classes: list = field(default_factory=list)

    @property
    def agrees(self):
        return len(self.gset_classes) == len(self.hom_classes)


def sigma_classes(G: FiniteGroup, n: int) -> SigmaCensus:
    """Iso classes of ``n``-element G-sets next to ``Hom(G, Σ_n)/conj``.

    The two sides are enumerated independently: the left by orbit-type
    compositions of ``n``, the right by homomorphisms into the symmetric group.
    """
    _caps.current().check("points", n, "sigma degree")
    left = list(gsets_up_to_iso(G, n, n))
    right = conjugacy_classes_of_homs(G, symmetric(n))
    return SigmaCensus(n, left, right)


def gset_from_hom(phi: GroupHom) -> GSet:
    """The G-set ``{0..n-1}`` obtained from ``phi: G -> Σ_n``."""
    S = phi.target
    return GSet(phi.source, [S.perms[phi.images[g]] for g in phi.source.elements])


def fiber_counts(f: GSetMap) -> Counter:
    return Counter(f.images)
