"""The acceptance battery: ten numbered checks, each a pass/fail result.

``full`` runs every check at its contractual size; ``small`` shrinks the
groups and caps so the whole battery finishes in about a minute.
"""

from __future__ import annotations

import contextlib
import io
import time
from dataclasses import dataclass

from . import bispan as bs
from . import caps as _caps
from . import groupoid as gpd
from . import gset as gs
from . import spancat as sc
from .freealg import free_underlying
from .group import (FiniteGroup, cyclic, homomorphisms, symmetric, trivial)
from .groupoid import FiniteGroupoid, GroupoidMap
from .gset import GSet, GSetMap
from .tambara import BurnsideTambara, burnside_class, norm_effective, norm_virtual


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    checked: int
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.name}: {self.detail} ({self.checked} checks)"


def _orbits(G: FiniteGroup) -> list:
    return [GSet.cosets(G, cl[0]) for cl in G.subgroup_classes]


# -- 1 ------------------------------------------------------------------------


def burnside_rank(battery: str) -> CriterionResult:
    """Rank of A(S_2), read off the header of the ``tambara marks`` table."""
    from .cli import main

    out = io.StringIO()
    start = time.perf_counter()
    with contextlib.redirect_stdout(out):
        code = main(["tambara", "marks", "--group", "S2", "--format", "table"])
    elapsed = time.perf_counter() - start
    rows = [r for r in out.getvalue().splitlines() if r and not r.startswith("#")]
    rank = len(rows[0].split(",")) - 1 if rows else -1
    ok = code == 0 and rank == 2 and elapsed < 1.0
    return CriterionResult(1, "Burnside rank of A(S2)", ok, 1,
                           f"rank {rank}, {elapsed:.3f}s (need 2, < 1s)")


# -- 2 and 3 ------------------------------------------------------------------


def _span_battery(battery):
    if battery == "full":
        return [cyclic(2), cyclic(3), symmetric(3)], 4
    return [cyclic(2), cyclic(3)], 3


def span_laws(battery: str) -> CriterionResult:
    """Associativity and unitality of span composition up to isomorphism."""
    groups, cap = _span_battery(battery)
    checked = 0
    for G in groups:
        spec = sc.gset_triple(G)
        E = _orbits(G)
        homs = {(i, j): [h.representative for h in sc.hom_enumerate(A, B, spec, cap)]
                for i, A in enumerate(E) for j, B in enumerate(E)}
        pair = {}

        def comp(i, j, k, a, b):
            key = (i, j, k, a, b)
            if key not in pair:
                pair[key] = sc.compose_spans(homs[(i, j)][a], homs[(j, k)][b])
            return pair[key]

        n = len(E)
        for (i, j), hs in homs.items():
            for s in hs:
                checked += 1
                if not (sc.span_iso(sc.compose_spans(sc.identity_span(E[i], spec), s), s)
                        and sc.span_iso(sc.compose_spans(s, sc.identity_span(E[j], spec)), s)):
                    return CriterionResult(2, "span associativity and unitality", False, checked,
                                           f"unit law fails over {G.name} for {s}")
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    for l in range(n):
                        for a, s in enumerate(homs[(i, j)]):
                            for b, t in enumerate(homs[(j, k)]):
                                ts = comp(i, j, k, a, b)
                                for c, u in enumerate(homs[(k, l)]):
                                    ut = comp(j, k, l, b, c)
                                    checked += 1
                                    lhs = sc.compose_spans(ts, u)
                                    rhs = sc.compose_spans(s, ut)
                                    if not sc.span_iso(lhs, rhs):
                                        return CriterionResult(
                                            2, "span associativity and unitality", False,
                                            checked, f"(u∘t)∘s ≇ u∘(t∘s) over {G.name}")
    names = ", ".join(G.name for G in groups)
    return CriterionResult(2, "span associativity and unitality", True, checked,
                           f"0 failures over {names}, apex <= {cap}")


def _factorizations(s: sc.Span):
    """All backwards-then-forwards factorizations of ``s``, up to isomorphism of the middle."""
    G = s.apex.group
    n = s.apex.size
    found = []
    for Z in gs.gsets_up_to_iso(G, n, n):
        for b in gs.equivariant_maps(Z, s.source):
            for f in gs.equivariant_maps(Z, s.target):
                c = sc.compose_spans(sc.backwards_span(b, s.spec), sc.forwards_span(f, s.spec))
                if not sc.span_iso(c, s):
                    continue
                if not any(gs.find_iso(Z, Z2, over=[(b, b2), (f, f2)]) is not None
                           for Z2, b2, f2 in found):
                    found.append((Z, b, f))
    return found


def factorization(battery: str) -> CriterionResult:
    """Every span is backwards ∘ forwards, and the factorization is unique up to iso."""
    groups, cap = _span_battery(battery)
    checked = 0
    for G in groups:
        spec = sc.gset_triple(G)
        E = _orbits(G)
        for A in E:
            for B in E:
                for h in sc.hom_enumerate(A, B, spec, cap):
                    s = h.representative
                    bw, fw = sc.factor_span(s)
                    checked += 1
                    if not sc.span_iso(sc.compose_spans(bw, fw), s):
                        return CriterionResult(3, "backwards/forwards factorization", False,
                                               checked, f"factor_span does not recompose {s}")
                    k = len(_factorizations(s))
                    if k != 1:
                        return CriterionResult(3, "backwards/forwards factorization", False,
                                               checked, f"{k} factorizations of {s}")
    return CriterionResult(3, "backwards/forwards factorization", True, checked,
                           "every span factors, uniquely up to iso")


# -- 4 ------------------------------------------------------------------------


def distributivity(battery: str) -> CriterionResult:
    """Universal property of every distributivity diagram in the range."""
    if battery == "full":
        groups, size, test_cap = [cyclic(2), cyclic(3)], 3, 3
    else:
        groups, size, test_cap = [cyclic(2)], 2, 2
    checked = 0
    for G in groups:
        objs = list(gs.gsets_up_to_iso(G, size))
        for A in objs:
            for B in objs:
                for C in objs:
                    for m in gs.equivariant_maps(A, B):
                        for n in gs.equivariant_maps(B, C):
                            d = gs.dependent_product(n, m)
                            cert = gs.verify_distributivity_diagram(d, test_cap)
                            checked += 1
                            if not cert:
                                return CriterionResult(4, "distributivity diagrams", False,
                                                       checked, cert.reason)
    return CriterionResult(4, "distributivity diagrams", True, checked,
                           f"all (m, n) with objects <= {size} points, test cap {test_cap}")


# -- 5 ------------------------------------------------------------------------


def norm_oracle(battery: str) -> CriterionResult:
    """Virtual norm through marks equals the class of the dependent-product norm."""
    if battery == "full":
        groups, size = [cyclic(2), cyclic(4), symmetric(3)], 4
    else:
        groups, size = [cyclic(2), symmetric(3)], 3
    checked = 0
    for G in groups:
        for H in G.subgroups:
            if G.order // len(H) > 3:
                continue
            Hg, inc = G.subgroup_group(H)
            for X in gs.gsets_up_to_iso(Hg, size):
                a = norm_virtual(inc, burnside_class(X))
                b = burnside_class(norm_effective(inc, X))
                checked += 1
                if a != b:
                    return CriterionResult(5, "norm oracle equivalence", False, checked,
                                           f"{G.name}, |H| = {len(H)}, X = {X.orbit_counts}: "
                                           f"{a} != {b}")
    return CriterionResult(5, "norm oracle equivalence", True, checked,
                           "virtual = effective, all unmarks integral")


# -- 6 ------------------------------------------------------------------------


def _coset_map(G, L, H, shift):
    """``G/L -> G/H``, ``xL |-> x·shift·H`` (requires ``L <= shift H shift^-1``)."""
    src, tgt = GSet.cosets(G, L), GSet.cosets(G, H)
    which = {}
    for i, c in enumerate(G.left_cosets(H)):
        for g in c:
            which[g] = i
    reps = [min(c) for c in G.left_cosets(L)]
    return GSetMap(src, tgt, [which[G.mul(r, shift)] for r in reps])


def mackey_direct(G: FiniteGroup, H, K, spec) -> sc.Span:
    """``⊔_{HgK} G/(H ∩ gKg^-1)`` with legs ``xL -> xH`` and ``xL -> xgK``."""
    H, K = frozenset(H), frozenset(K)
    lefts, rights = [], []
    for d in G.double_cosets(H, K):
        g = min(d)
        L = H & G.conjugate(K, g)
        lefts.append(_coset_map(G, L, H, G.identity))
        rights.append(_coset_map(G, L, K, g))
    Z, _ = gs.coproduct([f.source for f in lefts])
    return sc.Span(gs.copair(lefts, Z), gs.copair(rights, Z), spec)


def mackey(battery: str) -> CriterionResult:
    """``res_K ∘ tr_H`` by span composition against the double-coset formula."""
    G = symmetric(3)
    spec = sc.gset_triple(G)
    checked = 0
    for H in G.subgroups:
        for K in G.subgroups:
            tr = sc.forwards_span(GSetMap.to_point(GSet.cosets(G, H)), spec)
            res = sc.backwards_span(GSetMap.to_point(GSet.cosets(G, K)), spec)
            checked += 1
            if not sc.span_iso(sc.compose_spans(tr, res), mackey_direct(G, H, K, spec)):
                return CriterionResult(6, "Mackey double-coset law", False, checked,
                                       f"|H| = {len(H)}, |K| = {len(K)}")
    return CriterionResult(6, "Mackey double-coset law", True, checked,
                           "all subgroup pairs of S3")


# -- 7 ------------------------------------------------------------------------


def sigma_census(battery: str) -> CriterionResult:
    groups = [cyclic(2), cyclic(3), cyclic(4), symmetric(3)]
    top = 4 if battery == "full" else 3
    checked = 0
    for G in groups:
        for n in range(top + 1):
            c = gs.sigma_classes(G, n)
            checked += 1
            if not c.agrees:
                return CriterionResult(7, "G-sets vs Hom(G, S_n)/conj", False, checked,
                                       f"{G.name}, n = {n}: {len(c.gset_classes)} G-sets, "
                                       f"{len(c.hom_classes)} hom classes")
    return CriterionResult(7, "G-sets vs Hom(G, S_n)/conj", True, checked,
                           f"exact equality for n <= {top}")


# -- 8 ------------------------------------------------------------------------


def tambara_functoriality(battery: str) -> CriterionResult:
    G = cyclic(2)
    cap = 4 if battery == "full" else 2
    spec = bs.bispan_triple(G)
    E = bs.orbit_endpoints(G)
    cert = bs.check_functoriality(BurnsideTambara(G), spec, E, cap)
    if not cert:
        return CriterionResult(8, "Tambara functoriality and confluence", False, cert.checked,
                               cert.reason)
    pairs = 0
    homs = {(i, j): bs.bispan_enumerate(A, B, spec, cap)
            for i, A in enumerate(E) for j, B in enumerate(E)}
    for (i, j), us in homs.items():
        for k in range(len(E)):
            for u in us:
                for v in homs[(j, k)]:
                    pairs += 1
                    c = bs.check_confluence(u, v)
                    if not c:
                        return CriterionResult(8, "Tambara functoriality and confluence", False,
                                               cert.checked + pairs, c.reason)
    return CriterionResult(8, "Tambara functoriality and confluence", True,
                           cert.checked + pairs,
                           f"Burnside C2 functor, apex <= {cap}, {pairs} pairs confluent")


# -- 9 ------------------------------------------------------------------------


def free_algebra(battery: str) -> CriterionResult:
    if battery == "full":
        groups, size, top = [cyclic(2), cyclic(3), symmetric(3)], 3, 3
    else:
        groups, size, top = [cyclic(2), cyclic(3), symmetric(3)], 2, 2
    checked = 0
    for G in groups:
        for X in gs.gsets_up_to_iso(G, size):
            rep = free_underlying(X, top)
            checked += len(rep.degrees)
            if not rep.passed:
                d = rep.first_failure()
                return CriterionResult(9, "free-algebra pipeline", False, checked,
                                       f"{G.name}, X = {X.orbit_counts}, degree {d.degree}")
    return CriterionResult(9, "free-algebra pipeline", True, checked,
                           f"pipeline ≅ symmetric power, |X| <= {size}, n <= {top}")


# -- 10 -----------------------------------------------------------------------


def groupoid_pullbacks(battery: str) -> CriterionResult:
    groups = [trivial(), cyclic(2), cyclic(3), cyclic(4), symmetric(3)]
    checked = 0
    for G in groups:
        BG = FiniteGroupoid.from_group(G)
        pt = GroupoidMap(FiniteGroupoid.point(), BG, [0], [G.identity])
        sq = gpd.iso_comma_pullback(pt, pt)
        P = sq.apex
        checked += 1
        if P.n_objects != G.order or P.n_morphisms != P.n_objects:
            return CriterionResult(10, "groupoid pullbacks", False, checked,
                                   f"1 x_BG 1 over {G.name} is not discrete on |G| objects")
    samples = [cyclic(2), cyclic(3)] if battery == "small" else [trivial(), cyclic(2), cyclic(3)]
    for G in groups:
        BG = FiniteGroupoid.from_group(G)
        legs = [GroupoidMap.from_group_hom(phi) for S in samples
                for phi in homomorphisms(S, G)]
        legs += [GroupoidMap.action_projection(X) for X in _orbits(G)]
        legs = [f for f in legs if f.target == BG]
        for f in legs:
            for g in legs:
                sq = gpd.iso_comma_pullback(f, g)
                checked += 1
                if gpd.is_faithful(g) and not gpd.is_faithful(sq.p):
                    return CriterionResult(10, "groupoid pullbacks", False, checked,
                                           f"faithful leg not stable over {G.name}")
                if gpd.is_faithful(f) and not gpd.is_faithful(sq.q):
                    return CriterionResult(10, "groupoid pullbacks", False, checked,
                                           f"faithful leg not stable over {G.name}")
                if not gpd.verify_pullback_up(sq):
                    return CriterionResult(10, "groupoid pullbacks", False, checked,
                                           f"square over {G.name} fails its universal property")
    return CriterionResult(10, "groupoid pullbacks", True, checked,
                           "1 x_BG 1 discrete with |G| objects; faithful maps stable")


# fixed so verdicts do not depend on FINSPAN_CAP_* in the environment
BATTERY_CAPS = _caps.Caps(objects=1024, morphisms=1 << 18, points=1 << 14, sections=1 << 20)

CRITERIA = [
    (1, burnside_rank),
    (2, span_laws),
    (3, factorization),
    (4, distributivity),
    (5, norm_oracle),
    (6, mackey),
    (7, sigma_census),
    (8, tambara_functoriality),
    (9, free_algebra),
    (10, groupoid_pullbacks),
]


def run(number: int, battery: str = "full") -> CriterionResult:
    fn = dict(CRITERIA)[number]
    old = _caps.set_current(BATTERY_CAPS)
    start = time.perf_counter()
    try:
        result = fn(battery)
    finally:
        _caps.set_current(old)
    result.seconds = time.perf_counter() - start
    return result


def run_all(battery: str = "full", only=None) -> list:
    if battery not in ("small", "full"):
        raise ValueError(f"unknown battery {battery!r}")
    return [run(n, battery) for n, _ in CRITERIA if only is None or n in only]
