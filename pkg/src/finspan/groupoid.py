"""Finite 1-groupoids, functors between them and iso-comma pullbacks.

A groupoid is stored as explicit tables: objects ``0..k-1``, morphisms
``0..M-1`` with source/target arrays, identities, inverses and a composition
dictionary ``comp[(g, f)] = g ∘ f`` (defined when ``tgt(f) == src(g)``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

from . import caps as _caps
from .errors import InvalidStructure
from .group import FiniteGroup, GroupHom, find_isomorphism
from .gset import Certificate, GSet


class FiniteGroupoid:
    def __init__(self, n_objects, src, tgt, comp, identities, check=True):
        caps = _caps.current()
        caps.check("objects", n_objects, "groupoid objects")
        caps.check("morphisms", len(src), "groupoid morphisms")
        self.n_objects = n_objects
        self.src = tuple(src)
        self.tgt = tuple(tgt)
        self.comp = dict(comp)
        self.identities = tuple(identities)
        homs = {}
        for f, (a, b) in enumerate(zip(self.src, self.tgt)):
            homs.setdefault((a, b), []).append(f)
        self.homs = {k: tuple(v) for k, v in homs.items()}
        outs = [[] for _ in range(n_objects)]
        for f, a in enumerate(self.src):
            outs[a].append(f)
        self.outs = tuple(tuple(o) for o in outs)
        inv = [None] * len(self.src)
        for f in range(len(self.src)):
            a, b = self.src[f], self.tgt[f]
            for g in self.homs.get((b, a), ()):
                if self.comp.get((g, f)) == self.identities[a]:
                    inv[f] = g
                    break
        self.inverses = tuple(inv)
        if check:
            self._check()

    @classmethod
    def build(cls, n_objects, arrows, compose, identities, check=True):
        """Build from ``arrows[i] = (src, tgt)`` and a function ``compose(g, f)``."""
        src = [a for a, _ in arrows]
        tgt = [b for _, b in arrows]
        ins = [[] for _ in range(n_objects)]
        for f, b in enumerate(tgt):
            ins[b].append(f)
        comp = {}
        outs = [[] for _ in range(n_objects)]
        for g, a in enumerate(src):
            outs[a].append(g)
        for b in range(n_objects):
            for f in ins[b]:
                for g in outs[b]:
                    comp[(g, f)] = compose(g, f)
        return cls(n_objects, src, tgt, comp, identities, check=check)

    def _check(self):
        n = self.n_morphisms
        for a, e in enumerate(self.identities):
            if self.src[e] != a or self.tgt[e] != a:
                raise InvalidStructure(f"identity of object {a} is not an endomorphism")
        for (g, f), h in self.comp.items():
            if self.src[h] != self.src[f] or self.tgt[h] != self.tgt[g]:
                raise InvalidStructure(f"composite {g}∘{f} has wrong endpoints")
        for f in range(n):
            a, b = self.src[f], self.tgt[f]
            for g in self.outs[b]:
                if (g, f) not in self.comp:
                    raise InvalidStructure(f"composite {g}∘{f} missing")
            if self.comp[(f, self.identities[a])] != f or self.comp[(self.identities[b], f)] != f:
                raise InvalidStructure(f"identities are not units for {f}")
            g = self.inverses[f]
            if g is None or self.comp[(f, g)] != self.identities[b]:
                raise InvalidStructure(f"morphism {f} has no two-sided inverse")
        for f in range(n):
            for g in self.outs[self.tgt[f]]:
                gf = self.comp[(g, f)]
                for h in self.outs[self.tgt[g]]:
                    if self.comp[(h, gf)] != self.comp[(self.comp[(h, g)], f)]:
                        raise InvalidStructure(f"associativity fails on ({h}, {g}, {f})")

    def __repr__(self):
        return f"FiniteGroupoid({self.n_objects} obj, {self.n_morphisms} mor)"

    def __eq__(self, other):
        return (isinstance(other, FiniteGroupoid) and self.n_objects == other.n_objects
                and self.src == other.src and self.tgt == other.tgt
                and self.identities == other.identities and self.comp == other.comp)

    def __hash__(self):
        return hash((self.n_objects, self.src, self.tgt, self.identities))

    @property
    def n_morphisms(self):
        return len(self.src)

    @property
    def objects(self):
        return range(self.n_objects)

    @property
    def morphisms(self):
        return range(len(self.src))

    def hom(self, a, b):
        return self.homs.get((a, b), ())

    def compose(self, g, f):
        """``g ∘ f``."""
        return self.comp[(g, f)]

    def inv(self, f):
        return self.inverses[f]

    def ident(self, a):
        return self.identities[a]

    # -- constructors --------------------------------------------------

    @classmethod
    def discrete(cls, n):
        return cls(n, range(n), range(n), {(a, a): a for a in range(n)}, range(n), check=False)

    @classmethod
    def point(cls):
        return cls.discrete(1)

    @classmethod
    def empty(cls):
        return cls.discrete(0)

    @classmethod
    def from_group(cls, G: FiniteGroup):
        """The one-object groupoid ``BG``; morphism ids are group elements."""
        comp = {(g, f): G.mul(g, f) for g in G.elements for f in G.elements}
        return cls(1, [0] * G.order, [0] * G.order, comp, [G.identity], check=False)

    @classmethod
    def action(cls, X: GSet):
        """Action groupoid ``X//G``: morphism ``(g, x): x -> gx`` has id ``g*|X| + x``."""
        G, n = X.group, X.size
        arrows = [(x, X.act[g][x]) for g in G.elements for x in X.points]

        def compose(b, a):
            h, _ = divmod(b, n)
            g, x = divmod(a, n)
            return G.mul(h, g) * n + x

        return cls.build(n, arrows, compose, [G.identity * n + x for x in X.points],
                         check=False)


class GroupoidMap:
    """A functor between finite groupoids."""

    def __init__(self, source: FiniteGroupoid, target: FiniteGroupoid, obj, mor, check=True):
        self.source = source
        self.target = target
        self.obj = tuple(obj)
        self.mor = tuple(mor)
        if check:
            self._check()

    def _check(self):
        S, T = self.source, self.target
        if len(self.obj) != S.n_objects or len(self.mor) != S.n_morphisms:
            raise InvalidStructure("functor tables have the wrong length")
        for f in S.morphisms:
            Ff = self.mor[f]
            if T.src[Ff] != self.obj[S.src[f]] or T.tgt[Ff] != self.obj[S.tgt[f]]:
                raise InvalidStructure(f"functor does not respect endpoints of {f}")
        for a in S.objects:
            if self.mor[S.ident(a)] != T.ident(self.obj[a]):
                raise InvalidStructure(f"functor does not preserve the identity of {a}")
        for (g, f), h in S.comp.items():
            if T.comp[(self.mor[g], self.mor[f])] != self.mor[h]:
                raise InvalidStructure(f"functor does not preserve {g}∘{f}")

    def __repr__(self):
        return f"GroupoidMap({self.source!r} -> {self.target!r})"

    def __eq__(self, other):
        return (isinstance(other, GroupoidMap) and self.source == other.source
                and self.target == other.target and self.obj == other.obj
                and self.mor == other.mor)

    def __hash__(self):
        return hash((self.obj, self.mor))

    @classmethod
    def identity(cls, A):
        return cls(A, A, A.objects, A.morphisms, check=False)

    @classmethod
    def from_group_hom(cls, phi: GroupHom):
        return cls(FiniteGroupoid.from_group(phi.source), FiniteGroupoid.from_group(phi.target),
                   [0], phi.images, check=False)

    @classmethod
    def to_point(cls, A):
        return cls(A, FiniteGroupoid.point(), [0] * A.n_objects, [0] * A.n_morphisms,
                   check=False)

    @classmethod
    def action_projection(cls, X: GSet):
        """The faithful functor ``X//G -> BG`` remembering the group element."""
        n = X.size
        return cls(FiniteGroupoid.action(X), FiniteGroupoid.from_group(X.group),
                   [0] * n, [m // n for m in range(X.group.order * n)], check=False)

    def then(self, other: "GroupoidMap") -> "GroupoidMap":
        """``other ∘ self``."""
        if other.source != self.target:
            raise InvalidStructure("functors are not composable")
        return GroupoidMap(self.source, other.target,
                           [other.obj[a] for a in self.obj],
                           [other.mor[f] for f in self.mor], check=False)


# -- connectivity ----------------------------------------------------------


class Component(NamedTuple):
    groupoid: FiniteGroupoid
    group: FiniteGroup
    objects: tuple          # objects of the ambient groupoid, basepoint first
    paths: dict             # ambient object -> ambient morphism to the basepoint
    autos: tuple            # ambient morphisms basepoint -> basepoint, group order

    @property
    def basepoint(self):
        return self.objects[0]


def components(G: FiniteGroupoid) -> list:
    """Connected components, each with a basepoint and its automorphism group.

    The basepoint is the least object of the component; ``paths[a]`` is a
    chosen morphism ``a -> basepoint`` (found breadth first, so deterministic).
    """
    out = []
    seen = set()
    for x0 in G.objects:
        if x0 in seen:
            continue
        # BFS from the basepoint; store path basepoint -> a, invert at the end
        to = {x0: G.ident(x0)}
        queue = [x0]
        while queue:
            a = queue.pop(0)
            for f in G.outs[a]:
                b = G.tgt[f]
                if b not in to:
                    to[b] = G.compose(f, to[a])
                    queue.append(b)
        objs = [x0] + sorted(o for o in to if o != x0)
        seen.update(objs)
        paths = {a: G.inv(to[a]) for a in objs}
        autos = list(G.hom(x0, x0))
        autos.remove(G.ident(x0))
        autos.insert(0, G.ident(x0))
        pos = {f: i for i, f in enumerate(autos)}
        table = [[pos[G.compose(g, f)] for f in autos] for g in autos]
        group = FiniteGroup(table, 0, check=False)
        sub, _ = full_subgroupoid(G, objs)
        out.append(Component(sub, group, tuple(objs), paths, tuple(autos)))
    return out


def full_subgroupoid(G: FiniteGroupoid, objs):
    """Full subgroupoid on ``objs`` (re-indexed in the given order) with its inclusion."""
    objs = list(objs)
    opos = {a: i for i, a in enumerate(objs)}
    mors = [f for f in G.morphisms if G.src[f] in opos and G.tgt[f] in opos]
    mpos = {f: i for i, f in enumerate(mors)}
    comp = {(mpos[g], mpos[f]): mpos[h] for (g, f), h in G.comp.items()
            if f in mpos and g in mpos}
    S = FiniteGroupoid(len(objs), [opos[G.src[f]] for f in mors],
                       [opos[G.tgt[f]] for f in mors], comp,
                       [mpos[G.ident(a)] for a in objs], check=False)
    return S, GroupoidMap(S, G, objs, mors, check=False)


def component_index(G: FiniteGroupoid, comps=None) -> dict:
    comps = components(G) if comps is None else comps
    return {a: i for i, c in enumerate(comps) for a in c.objects}


def coproduct(parts):
    """Disjoint union with the injections."""
    parts = list(parts)
    ooff = list(itertools.accumulate([0] + [p.n_objects for p in parts]))
    moff = list(itertools.accumulate([0] + [p.n_morphisms for p in parts]))
    src, tgt, ids, comp = [], [], [], {}
    for p, oo, mo in zip(parts, ooff, moff):
        src += [oo + a for a in p.src]
        tgt += [oo + b for b in p.tgt]
        ids += [mo + e for e in p.identities]
        comp.update({(mo + g, mo + f): mo + h for (g, f), h in p.comp.items()})
    Z = FiniteGroupoid(ooff[-1], src, tgt, comp, ids, check=False)
    incs = [GroupoidMap(p, Z, [oo + a for a in p.objects], [mo + f for f in p.morphisms],
                        check=False) for p, oo, mo in zip(parts, ooff, moff)]
    return Z, incs


def copair(maps) -> GroupoidMap:
    Z, _ = coproduct([f.source for f in maps])
    obj = sum((f.obj for f in maps), ())
    mor = sum((f.mor for f in maps), ())
    return GroupoidMap(Z, maps[0].target, obj, mor, check=False)


def product(A: FiniteGroupoid, B: FiniteGroupoid):
    """``A × B`` with projections; morphism ``(f, g)`` at ``f*|mor B| + g``."""
    m = B.n_morphisms
    caps = _caps.current()
    caps.check("objects", A.n_objects * B.n_objects, "product objects")
    caps.check("morphisms", A.n_morphisms * m, "product morphisms")
    nb = B.n_objects
    src = [A.src[f // m] * nb + B.src[f % m] for f in range(A.n_morphisms * m)]
    tgt = [A.tgt[f // m] * nb + B.tgt[f % m] for f in range(A.n_morphisms * m)]
    comp = {}
    for (g1, f1), h1 in A.comp.items():
        for (g2, f2), h2 in B.comp.items():
            comp[(g1 * m + g2, f1 * m + f2)] = h1 * m + h2
    ids = [A.ident(a // nb) * m + B.ident(a % nb) for a in range(A.n_objects * nb)]
    P = FiniteGroupoid(A.n_objects * nb, src, tgt, comp, ids, check=False)
    p1 = GroupoidMap(P, A, [a // nb for a in P.objects], [f // m for f in P.morphisms],
                     check=False)
    p2 = GroupoidMap(P, B, [a % nb for a in P.objects], [f % m for f in P.morphisms],
                     check=False)
    return P, p1, p2


# -- properties of functors ------------------------------------------------


def is_faithful(f: GroupoidMap) -> bool:
    """Injective on every hom-set: membership in the orbital class."""
    S = f.source
    return all(len({f.mor[m] for m in ms}) == len(ms) for ms in S.homs.values())


def is_full(f: GroupoidMap) -> bool:
    S, T = f.source, f.target
    for a in S.objects:
        for b in S.objects:
            if len({f.mor[m] for m in S.hom(a, b)}) != len(T.hom(f.obj[a], f.obj[b])):
                return False
    return True


def pi0_map(f: GroupoidMap):
    """Induced map on components as a tuple indexed by source components."""
    cs, ct = component_index(f.source), component_index(f.target)
    n = len(set(cs.values()))
    out = [None] * n
    for a in f.source.objects:
        out[cs[a]] = ct[f.obj[a]]
    return tuple(out)


def is_essentially_surjective(f: GroupoidMap) -> bool:
    ct = component_index(f.target)
    return {ct[b] for b in f.obj} == set(ct.values())


def is_equivalence(f: GroupoidMap) -> bool:
    """Essentially surjective and fully faithful."""
    if not is_essentially_surjective(f):
        return False
    S, T = f.source, f.target
    for a in S.objects:
        for b in S.objects:
            ms = S.hom(a, b)
            if len({f.mor[m] for m in ms}) != len(ms):
                return False
            if len(ms) != len(T.hom(f.obj[a], f.obj[b])):
                return False
    return True


def in_left_class(f: GroupoidMap) -> bool:
    """Membership in E: a coproduct of full functors between connected groupoids.

    Equivalently: full and bijective on components (fold maps are excluded).
    """
    p = pi0_map(f)
    n_tgt = len(components(f.target))
    return is_full(f) and len(set(p)) == len(p) == n_tgt


def natural_isomorphism(F: GroupoidMap, G: GroupoidMap):
    """Components ``theta[a]: F(a) -> G(a)`` of a natural iso, or ``None``."""
    if F.source != G.source or F.target != G.target:
        return None
    A, C = F.source, F.target
    theta = [None] * A.n_objects
    for comp in components(A):
        x0 = comp.basepoint
        found = False
        for t0 in C.hom(F.obj[x0], G.obj[x0]):
            cand = {}
            for a in comp.objects:
                k = comp.paths[a]          # a -> x0
                ki = A.inv(k)              # x0 -> a
                cand[a] = C.compose(G.mor[ki], C.compose(t0, F.mor[k]))
            ok = all(
                C.compose(G.mor[m], cand[A.src[m]]) == C.compose(cand[A.tgt[m]], F.mor[m])
                for a in comp.objects for m in A.outs[a])
            if ok:
                for a in comp.objects:
                    theta[a] = cand[a]
                found = True
                break
        if not found:
            return None
    return tuple(theta)


def find_equivalence(A: FiniteGroupoid, B: FiniteGroupoid):
    """An equivalence ``A -> B`` or ``None``.

    Components are matched by backtracking (in index order) on isomorphism
    of their automorphism groups; the functor is assembled from the chosen
    group isomorphisms and the basepoint paths.
    """
    ca, cb = components(A), components(B)
    if len(ca) != len(cb):
        return None
    assignment = [None] * len(ca)
    used = [False] * len(cb)

    def rec(i):
        if i == len(ca):
            return True
        for j, c in enumerate(cb):
            if used[j] or c.group.order != ca[i].group.order:
                continue
            psi = find_isomorphism(ca[i].group, c.group)
            if psi is None:
                continue
            used[j] = True
            assignment[i] = (j, psi)
            if rec(i + 1):
                return True
            used[j] = False
        return False

    if not rec(0):
        return None
    obj = [None] * A.n_objects
    mor = [None] * A.n_morphisms
    for comp, (j, psi) in zip(ca, assignment):
        tgt = cb[j]
        apos = {f: i for i, f in enumerate(comp.autos)}
        y0 = tgt.basepoint
        for a in comp.objects:
            obj[a] = y0
        for a in comp.objects:
            for m in A.outs[a]:
                b = A.tgt[m]
                # path(b) ∘ m ∘ path(a)^-1 is an automorphism of the basepoint
                loop = A.compose(comp.paths[b], A.compose(m, A.inv(comp.paths[a])))
                mor[m] = tgt.autos[psi.images[apos[loop]]]
    return GroupoidMap(A, B, obj, mor, check=False)


def are_equivalent(A: FiniteGroupoid, B: FiniteGroupoid) -> bool:
    return find_equivalence(A, B) is not None


# -- pullbacks -------------------------------------------------------------


@dataclass(frozen=True)
class IsoCommaSquare:
    """``apex -p-> A``, ``apex -q-> B`` with ``cell[o]: f(p(o)) -> g(q(o))``."""

    f: GroupoidMap
    g: GroupoidMap
    p: GroupoidMap
    q: GroupoidMap
    cell: tuple

    @property
    def apex(self):
        return self.p.source


def iso_comma_pullback(f: GroupoidMap, g: GroupoidMap) -> IsoCommaSquare:
    """The iso-comma groupoid ``A ×_C B`` of ``f: A -> C`` and ``g: B -> C``.

    Objects are triples ``(a, b, γ: f a -> g b)``; a morphism is a pair
    ``(α, β)`` with ``g(β) ∘ γ = γ' ∘ f(α)``.
    """
    if f.target != g.target:
        raise InvalidStructure("iso-comma pullback needs a common target")
    A, B, C = f.source, g.source, f.target
    caps = _caps.current()
    n_obj = sum(len(C.hom(f.obj[a], g.obj[b])) for a in A.objects for b in B.objects)
    caps.check("objects", n_obj, "apex objects")
    objs = [(a, b, c) for a in A.objects for b in B.objects
            for c in C.hom(f.obj[a], g.obj[b])]
    n_mor = sum(len(A.outs[a]) * len(B.outs[b]) for a, b, _ in objs)
    caps.check("morphisms", n_mor, "apex morphisms")
    opos = {o: i for i, o in enumerate(objs)}
    arrows = []
    data = []
    for i, (a, b, c) in enumerate(objs):
        for al in A.outs[a]:
            fal_inv = C.inv(f.mor[al])
            for be in B.outs[b]:
                c2 = C.compose(g.mor[be], C.compose(c, fal_inv))
                j = opos[(A.tgt[al], B.tgt[be], c2)]
                arrows.append((i, j))
                data.append((al, be))
        # identity is the pair of identities; located below
    dpos = {(i, d): k for k, ((i, _), d) in enumerate(zip(arrows, data))}

    def compose(k2, k1):
        (i, _), (a1, b1) = arrows[k1], data[k1]
        a2, b2 = data[k2]
        return dpos[(i, (A.compose(a2, a1), B.compose(b2, b1)))]

    ids = [dpos[(i, (A.ident(a), B.ident(b)))] for i, (a, b, _) in enumerate(objs)]
    P = FiniteGroupoid.build(len(objs), arrows, compose, ids, check=False)
    p = GroupoidMap(P, A, [a for a, _, _ in objs], [al for al, _ in data], check=False)
    q = GroupoidMap(P, B, [b for _, b, _ in objs], [be for _, be in data], check=False)
    return IsoCommaSquare(f, g, p, q, tuple(c for _, _, c in objs))


def square_problems(sq: IsoCommaSquare):
    """First reason the square fails to commute up to its 2-cell, or ``None``."""
    C = sq.f.target
    P = sq.apex
    if sq.p.source != sq.q.source or sq.p.target != sq.f.source or sq.q.target != sq.g.source:
        return "legs have mismatched endpoints"
    for o in P.objects:
        c = sq.cell[o]
        if C.src[c] != sq.f.obj[sq.p.obj[o]] or C.tgt[c] != sq.g.obj[sq.q.obj[o]]:
            return f"2-cell component at {o} has wrong endpoints"
    for m in P.morphisms:
        a, b = P.src[m], P.tgt[m]
        lhs = C.compose(sq.g.mor[sq.q.mor[m]], sq.cell[a])
        rhs = C.compose(sq.cell[b], sq.f.mor[sq.p.mor[m]])
        if lhs != rhs:
            return f"2-cell is not natural at morphism {m}"
    return None


def verify_pullback_up(sq: IsoCommaSquare) -> Certificate:
    """Certify the 2-categorical universal property of a square.

    A square commuting up to a natural isomorphism is a pullback in the
    (2,1)-category of groupoids iff its comparison functor into the iso-comma
    groupoid is an equivalence; that comparison is built and tested here.
    """
    problem = square_problems(sq)
    if problem:
        return Certificate(False, 0, None, problem)
    ref = iso_comma_pullback(sq.f, sq.g)
    R = ref.apex
    P = sq.apex
    opos = {(ref.p.obj[i], ref.q.obj[i], ref.cell[i]): i for i in R.objects}
    mpos = {}
    for k in R.morphisms:
        mpos[(R.src[k], ref.p.mor[k], ref.q.mor[k])] = k
    obj = [opos[(sq.p.obj[o], sq.q.obj[o], sq.cell[o])] for o in P.objects]
    mor = [mpos[(obj[P.src[m]], sq.p.mor[m], sq.q.mor[m])] for m in P.morphisms]
    K = GroupoidMap(P, R, obj, mor, check=False)
    if not is_equivalence(K):
        return Certificate(False, 1, K, "comparison functor is not an equivalence")
    return Certificate(True, 1)


# -- factorization ---------------------------------------------------------


def em_factorize(f: GroupoidMap):
    """Factor ``f = m ∘ e`` with ``e`` in E and ``m`` faithful.

    The middle groupoid has the objects of the source; its morphisms
    ``x -> y`` are the images ``f(Hom(x, y))`` when ``x, y`` share a
    component, so ``e`` is full and bijective on components and ``m`` is an
    inclusion on hom-sets. The composite ``m ∘ e`` equals ``f`` on the nose.
    """
    A, B = f.source, f.target
    cidx = component_index(A)
    arrows, data = [], []
    for x in A.objects:
        for y in A.objects:
            if cidx[x] != cidx[y]:
                continue
            for beta in sorted({f.mor[m] for m in A.hom(x, y)}):
                arrows.append((x, y))
                data.append(beta)
    pos = {(s, t, b): i for i, ((s, t), b) in enumerate(zip(arrows, data))}

    def compose(k2, k1):
        x = arrows[k1][0]
        z = arrows[k2][1]
        return pos[(x, z, B.compose(data[k2], data[k1]))]

    ids = [pos[(x, x, B.ident(f.obj[x]))] for x in A.objects]
    I = FiniteGroupoid.build(A.n_objects, arrows, compose, ids, check=False)
    e = GroupoidMap(A, I, A.objects,
                    [pos[(A.src[m], A.tgt[m], f.mor[m])] for m in A.morphisms], check=False)
    m = GroupoidMap(I, B, f.obj, data, check=False)
    return e, m


def is_em_factorization(f: GroupoidMap, e: GroupoidMap, m: GroupoidMap) -> bool:
    if e.target != m.source:
        return False
    composite = e.then(m)
    return (in_left_class(e) and is_faithful(m)
            and natural_isomorphism(composite, f) is not None)
