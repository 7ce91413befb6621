import itertools
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finspan import gset as gs
from finspan.errors import InvalidStructure
from finspan.group import symmetric
from finspan.gset import GSet, GSetMap
from finspan.tambara import marks_of_gset, subgroup_inclusion

from conftest import SMALL_GROUPS, group, gsets, gsets_over


@given(gsets())
def test_orbit_stabilizer(X):
    G = X.group
    for orb in X.orbit_list:
        assert len(orb) * len(X.stabilizer(orb[0])) == G.order


@given(gsets())
def test_burnside_counting(X):
    G = X.group
    fixed = sum(sum(1 for x in X.points if X.act[g][x] == x) for g in G.elements)
    assert fixed == len(X.orbit_list) * G.order


@given(st.data())
def test_isomorphism_iff_equal_marks(data):
    G = group(data.draw(st.sampled_from(SMALL_GROUPS)))
    X = data.draw(gsets_over(G, 5))
    Y = data.draw(gsets_over(G, 5))
    same = gs.is_isomorphic(X, Y)
    assert same == (marks_of_gset(X) == marks_of_gset(Y))
    if same:
        iso = gs.find_iso(X, Y)
        assert iso is not None and iso.is_iso()


@given(st.data())
def test_pullback_sizes(data):
    G = group(data.draw(st.sampled_from(SMALL_GROUPS)))
    A, B, C = (data.draw(gsets_over(G, 4, 1)) for _ in range(3))
    fs = list(gs.equivariant_maps(A, C))
    gs_ = list(gs.equivariant_maps(B, C))
    if not fs or not gs_:
        return
    f, g = data.draw(st.sampled_from(fs)), data.draw(st.sampled_from(gs_))
    P, p1, p2 = gs.pullback(f, g)
    fa, gb = Counter(f.images), Counter(g.images)
    assert P.size == sum(fa[c] * gb[c] for c in C.points)
    assert p1.then(f) == p2.then(g)


def _brute_maps(S, T):
    out = 0
    for images in itertools.product(T.points, repeat=S.size):
        if all(images[S.act[g][x]] == T.act[g][images[x]]
               for g in S.group.elements for x in S.points):
            out += 1
    return out


@given(st.data())
def test_equivariant_maps_match_brute_force(data):
    G = group(data.draw(st.sampled_from(["C2", "C3", "S3"])))
    S = data.draw(gsets_over(G, 3))
    T = data.draw(gsets_over(G, 4))
    ms = list(gs.equivariant_maps(S, T))
    assert len(ms) == len(set(m.images for m in ms)) == _brute_maps(S, T)
    assert gs.count_equivariant_maps(S, T) == len(ms)


def _sections(m, n):
    # points of the dependent product over c: choices of one m-preimage per b over c
    fib = Counter(m.images)
    total = 0
    for c in n.target.points:
        prod = 1
        for b in n.source.points:
            if n.images[b] == c:
                prod *= fib[b]
        total += prod
    return total


@given(st.data())
def test_dependent_product_underlying_set(data):
    G = group(data.draw(st.sampled_from(["1", "C2", "C3"])))
    A, B, C = (data.draw(gsets_over(G, 3)) for _ in range(3))
    ms, ns = list(gs.equivariant_maps(A, B)), list(gs.equivariant_maps(B, C))
    if not ms or not ns:
        return
    m, n = data.draw(st.sampled_from(ms)), data.draw(st.sampled_from(ns))
    d = gs.dependent_product(n, m)
    assert d.Y.size == _sections(m, n)
    assert d.m_dprime.then(n) == d.n_prime.then(d.m_prime)
    assert d.eps.then(m) == d.m_dprime
    assert gs.verify_distributivity_diagram(d, 2)


def test_fold_dependent_product():
    # C2 acting by swapping: B = free orbit folded to a point, A = two copies of B
    G = group("C2")
    B = GSet.regular(G)
    A = gs.coproduct([B, B])[0]
    m = GSetMap(A, B, [0, 1, 0, 1])
    n = GSetMap.to_point(B)
    d = gs.dependent_product(n, m)
    assert d.Y.size == 4
    assert d.Y.orbit_counts == (1, 2)


def test_dependent_product_rejects_mismatch():
    G = group("C2")
    X = GSet.point(G)
    m = GSetMap.identity(X)
    n = GSetMap.identity(GSet.regular(G))
    with pytest.raises(InvalidStructure):
        gs.dependent_product(n, m)


def test_corrupted_diagram_fails_verification():
    G = group("C2")
    B = GSet.regular(G)
    A = gs.coproduct([B, B])[0]
    d = gs.dependent_product(GSetMap.to_point(B), GSetMap(A, B, [0, 1, 0, 1]))
    Y2, inc = gs.subset(d.Y, d.Y.orbit_list[0])
    # drop an orbit of Y: the square no longer represents all sections
    X2, p1, p2 = gs.pullback(d.n, inc.then(d.m_prime))
    bad = gs.DistributivityDiagram(d.m, d.n, inc.then(d.m_prime), p2, p1,
                                   GSetMap(X2, d.m.source,
                                           [d.eps.images[_find(d, b, inc.images[y])]
                                            for b, y in zip(p1.images, p2.images)]))
    assert not gs.verify_distributivity_diagram(bad, 2)


def _find(d, b, y):
    for x in d.X.points:
        if d.m_dprime.images[x] == b and d.n_prime.images[x] == y:
            return x
    raise AssertionError


def _gset_count(G, n):
    # partitions of n into orbits, orbit types weighted by index
    sizes = [G.order // len(G.class_rep(i)) for i in range(len(G.subgroup_classes))]
    ways = [1] + [0] * n
    for s in sizes:
        for k in range(s, n + 1):
            ways[k] += ways[k - s]
    return ways[n]


@pytest.mark.parametrize("name", ["1", "C2", "C3", "C4", "S3", "C2xC2"])
@pytest.mark.parametrize("n", range(5))
def test_sigma_census(name, n):
    G = group(name)
    c = gs.sigma_classes(G, n)
    assert len(c.gset_classes) == _gset_count(G, n)
    assert c.agrees


def test_sigma_census_frozen_s3():
    # S3-sets with 0..4 points: 1, 1, 2, 3, 4
    assert [len(gs.sigma_classes(group("S3"), n).hom_classes) for n in range(5)] == [1, 1, 2, 3, 4]


@given(gsets(names=["C2", "C3", "S3"], max_size=4))
def test_restriction_and_induction_sizes(X):
    G = X.group
    for H in G.subgroups:
        inc = subgroup_inclusion(G, H)
        R = gs.restrict(inc, X)
        assert R.size == X.size
        I = gs.induce(inc, R)
        assert I.size == X.size * (G.order // len(H))


def test_deflation_modes():
    S = symmetric(3)
    A3 = S.class_rep(2)
    X = GSet.regular(S)
    assert gs.deflate(A3, X, "quotient").size == 2
    assert gs.deflate(A3, X, "fixed").size == 0
    assert gs.deflate(A3, GSet.cosets(S, A3), "fixed").size == 2
    with pytest.raises(ValueError):
        gs.deflate(A3, X, "sideways")


@given(gsets(max_size=5))
def test_over_key_round_trip(X):
    G = X.group
    f = GSetMap.to_point(X)
    Y = gs.from_over_key(gs.over_type_key(f), GSet.point(G)).source
    assert gs.is_isomorphic(X, Y)


def test_non_equivariant_map_rejected():
    G = group("C2")
    with pytest.raises(InvalidStructure):
        GSetMap(GSet.regular(G), GSet.trivial(G, 2), [0, 1])
