"""Set-level genuine symmetric powers and the free-algebra pipeline.

Degree ``n`` of the free algebra on a G-set ``X`` is computed two ways:
directly as ``X^n / Σ_n`` and as the composite of inflation to
``Σ_{n-1} × G``, the norm up to ``Σ_n × G`` and the ``Σ_n``-orbit quotient.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

from . import caps as _caps
from . import gset as gs
from .bispan import Bispan, bispan_enumerate, bispan_from_key, bispan_key, bispan_triple
from .group import FiniteGroup, GroupHom, direct_product, symmetric
from .gset import GSet
from .spancat import _gset_types, _multisets
from .tambara import norm_effective


def symmetric_power(X: GSet, n: int) -> GSet:
    """``X^n / Σ_n`` (multisets of size ``n``) with the diagonal action."""
    if n < 0:
        raise ValueError("degree must be non-negative")
    _caps.current().check("points", comb(X.size + n - 1, n) if X.size else int(n == 0),
                          "symmetric power points")
    pts = list(itertools.combinations_with_replacement(X.points, n))
    idx = {p: i for i, p in enumerate(pts)}
    act = [[idx[tuple(sorted(row[x] for x in p))] for p in pts] for row in X.act]
    return GSet(X.group, act, check=False)


@dataclass(frozen=True)
class PipelineGroups:
    """``Σ_{n-1} × G <= Σ_n × G`` with the maps the pipeline needs."""

    big: FiniteGroup          # Σ_n × G
    small_inc: GroupHom       # Σ_{n-1} × G -> Σ_n × G
    inflate: GroupHom         # Σ_{n-1} × G -> G
    project: GroupHom         # Σ_n × G -> G


def pipeline_groups(G: FiniteGroup, n: int) -> PipelineGroups:
    """``Σ_{n-1}`` is the stabilizer of the last letter ``n-1`` inside ``Σ_n``."""
    if n < 1:
        raise ValueError("pipeline groups exist for n >= 1")
    S = symmetric(n)
    big = direct_product(S, G)
    m = G.order
    small = frozenset(s * m + g for s in S.elements if S.perms[s][n - 1] == n - 1
                      for g in G.elements)
    Hg, inc = big.subgroup_group(small)
    inflate = GroupHom(Hg, G, [inc.images[h] % m for h in Hg.elements])
    project = GroupHom(big, G, [p % m for p in big.elements])
    return PipelineGroups(big, inc, inflate, project)


def pipeline_sub_nm_inf(X: GSet, n: int) -> GSet:
    """Quotient deflation of the norm of the inflation of ``X``; ``n = 0`` gives a point."""
    G = X.group
    if n == 0:
        return GSet.point(G)
    pg = pipeline_groups(G, n)
    _caps.current().check("sections", X.size ** n, "pipeline sections")
    inflated = gs.restrict(pg.inflate, X)
    normed = norm_effective(pg.small_inc, inflated)
    return gs.deflate(pg.project, normed, "quotient")


@dataclass
class DegreeResult:
    degree: int
    symmetric_power: GSet
    pipeline: GSet
    isomorphic: bool

    @property
    def orbit_counts(self):
        return self.symmetric_power.orbit_counts


@dataclass
class SymPowerReport:
    X: GSet
    max_degree: int
    degrees: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(d.isomorphic for d in self.degrees)

    def first_failure(self):
        return next((d for d in self.degrees if not d.isomorphic), None)


def free_underlying(X: GSet, max_degree: int) -> SymPowerReport:
    """Run both pipelines for every degree ``0..max_degree`` and compare them."""
    report = SymPowerReport(X, max_degree)
    for n in range(max_degree + 1):
        a = symmetric_power(X, n)
        b = pipeline_sub_nm_inf(X, n)
        report.degrees.append(DegreeResult(n, a, b, gs.is_isomorphic(a, b)))
    return report


@dataclass
class CensusRow:
    degree: int
    norms: int           # sum leg an isomorphism onto G/K
    monomials: int       # transitive middle object


@dataclass
class CensusTable:
    group: FiniteGroup
    generator: frozenset
    endpoint: frozenset
    cap: int
    rows: list = field(default_factory=list)
    total: int = 0
    checks: list = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return all(c.ok for c in self.checks if c.required)


@dataclass(frozen=True)
class CensusCheck:
    name: str
    expected: int
    got: int
    required: bool

    @property
    def ok(self) -> bool:
        return self.expected == self.got


def _monomials(src: GSet, tgt: GSet, degree: int) -> list:
    """Canonical bispans ``src <- A -> B -> tgt`` with ``B`` transitive and ``|A| = degree·|B|``."""
    spec = bispan_triple(src.group)
    order = src.group.order
    found = set()
    for ty in _gset_types(tgt):
        tc = gs.from_over_key((ty,), tgt)
        B = tc.source
        P, p1, p2 = gs.product(src, B)
        xtypes = _gset_types(P)
        weights = [order // len(S) for _, S in xtypes]
        size = degree * B.size
        for kx in _multisets(xtypes, weights, size):
            if sum(order // len(S) for _, S in kx) != size:
                continue
            xm = gs.from_over_key(tuple(sorted(kx)), P)
            found.add(bispan_key(Bispan(xm.then(p1), xm.then(p2), tc, spec)))
    return [bispan_from_key(k, src, tgt, spec) for k in sorted(found)]


def free_tambara_census(G: FiniteGroup, H, K, max_degree: int, total_cap: int | None = None,
                        checks: bool = True) -> CensusTable:
    """Iso classes of bispans ``G/H <- A -> B -> G/K``, graded by fiber degree.

    A class is a monomial of degree ``d`` when ``B`` is transitive and the
    fibers of ``A -> B`` have ``d`` points; it is a norm when in addition
    ``B -> G/K`` is an isomorphism. ``total`` counts all classes with
    ``|A|, |B| <= total_cap`` (default ``max_degree · [G:K]``).
    """
    H, K = frozenset(H), frozenset(K)
    src, tgt = GSet.cosets(G, H), GSet.cosets(G, K)
    if total_cap is None:
        total_cap = max(max_degree, 1) * tgt.size
    table = CensusTable(G, H, K, max_degree,
                        total=len(bispan_enumerate(src, tgt, bispan_triple(G), total_cap)))
    for d in range(max_degree + 1):
        monos = _monomials(src, tgt, d)
        norms = sum(1 for b in monos if b.sum.is_iso())
        table.rows.append(CensusRow(d, norms, len(monos)))
    if checks and H == frozenset(G.elements) and K == H:
        under = free_underlying(GSet.point(G), max_degree)
        for d, row in enumerate(table.rows):
            sig = len(gs.sigma_classes(G, d).hom_classes)
            table.checks.append(CensusCheck(f"degree {d} norms = |Hom(G, S_{d})/conj|",
                                            sig, row.norms, True))
            # agrees with the Set-level symmetric power only for the trivial group
            orb = len(under.degrees[d].symmetric_power.orbit_list)
            table.checks.append(CensusCheck(f"degree {d} norms = orbits of free_underlying(pt)",
                                            orb, row.norms, G.order == 1))
    return table
