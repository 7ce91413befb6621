from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finspan import gset as gs
from finspan import spancat as sc
from finspan.errors import ClassViolation, InvalidStructure
from finspan.groupoid import FiniteGroupoid, GroupoidMap
from finspan.gset import GSet, GSetMap

from conftest import group, gsets_over


@st.composite
def spans(draw, X, Y, spec, max_apex=3):
    """A span X <- Z -> Y drawn from the full enumeration."""
    homs = sc.hom_enumerate(X, Y, spec, max_apex)
    return draw(st.sampled_from(homs)).representative


def _fixed_matrix(s, K):
    # |Z^K| over each pair of K-fixed endpoints
    X, Y = s.source, s.target
    fx, fy = X.fixed_points(K), Y.fixed_points(K)
    M = {(x, y): 0 for x in fx for y in fy}
    for z in s.apex.fixed_points(K):
        M[(s.left.images[z], s.right.images[z])] += 1
    return fx, fy, M


def _matmul(fx, fy, fz, A, B):
    return {(x, z): sum(A[(x, y)] * B[(y, z)] for y in fy) for x in fx for z in fz}


@given(st.data())
def test_composition_is_multiplicative_on_fixed_points(data):
    G = group(data.draw(st.sampled_from(["1", "C2", "C3", "S3"])))
    spec = sc.gset_triple(G)
    X, Y, Z = (data.draw(gsets_over(G, 3)) for _ in range(3))
    s = data.draw(spans(X, Y, spec))
    t = data.draw(spans(Y, Z, spec))
    c = sc.compose_spans(s, t)
    for K in G.subgroups:
        fx, fy, A = _fixed_matrix(s, K)
        _, fz, B = _fixed_matrix(t, K)
        assert _fixed_matrix(c, K)[2] == _matmul(fx, fy, fz, A, B)


@given(st.data())
def test_associativity_and_unit(data):
    G = group(data.draw(st.sampled_from(["C2", "C3"])))
    spec = sc.gset_triple(G)
    W, X, Y, Z = (data.draw(gsets_over(G, 2)) for _ in range(4))
    r = data.draw(spans(W, X, spec, 2))
    s = data.draw(spans(X, Y, spec, 2))
    t = data.draw(spans(Y, Z, spec, 2))
    left = sc.compose_spans(sc.compose_spans(r, s), t)
    right = sc.compose_spans(r, sc.compose_spans(s, t))
    assert sc.span_iso(left, right)
    assert sc.span_key(left) == sc.span_key(right)
    assert sc.span_iso(sc.compose_spans(sc.identity_span(W, spec), r), r)
    assert sc.span_iso(sc.compose_spans(r, sc.identity_span(X, spec)), r)


@pytest.mark.parametrize("a,b,cap", [(0, 0, 2), (1, 1, 3), (1, 2, 2), (2, 2, 2), (2, 3, 1)])
def test_trivial_group_hom_count(a, b, cap):
    # spans of finite sets are N-valued matrices; count those with entry sum <= cap
    G = group("1")
    homs = sc.hom_enumerate(GSet.trivial(G, a), GSet.trivial(G, b), sc.gset_triple(G), cap)
    assert len(homs) == comb(a * b + cap, cap)


@pytest.mark.parametrize("name,cap,expected", [("C2", 2, 4), ("C3", 3, 5), ("S3", 3, 7)])
def test_point_to_point_homs_are_gsets(name, cap, expected):
    # spans pt <- Z -> pt are G-sets Z with |Z| <= cap
    G = group(name)
    pt = GSet.point(G)
    homs = sc.hom_enumerate(pt, pt, sc.gset_triple(G), cap)
    assert len(homs) == expected == len(list(gs.gsets_up_to_iso(G, cap)))


@given(st.data())
def test_factorization(data):
    G = group(data.draw(st.sampled_from(["C2", "S3"])))
    spec = sc.gset_triple(G)
    X, Y = data.draw(gsets_over(G, 3)), data.draw(gsets_over(G, 3))
    s = data.draw(spans(X, Y, spec))
    bw, fw = sc.factor_span(s)
    assert sc.span_iso(sc.compose_spans(bw, fw), s)
    assert bw.right == GSetMap.identity(bw.apex)
    assert fw.left == GSetMap.identity(fw.apex)


@given(st.data())
def test_canonical_form_is_invariant(data):
    G = group(data.draw(st.sampled_from(["C2", "S3"])))
    spec = sc.gset_triple(G)
    X, Y = data.draw(gsets_over(G, 3)), data.draw(gsets_over(G, 3))
    s = data.draw(spans(X, Y, spec))
    # relabel the apex by a random permutation
    perm = data.draw(st.permutations(list(s.apex.points)))
    inv = {p: i for i, p in enumerate(perm)}
    Z = s.apex
    act = [[inv[row[perm[i]]] for i in range(Z.size)] for row in Z.act]
    Z2 = GSet(G, act)
    t = sc.Span(GSetMap(Z2, X, [s.left.images[perm[i]] for i in Z2.points]),
                GSetMap(Z2, Y, [s.right.images[perm[i]] for i in Z2.points]), spec)
    assert sc.span_iso(s, t)
    assert sc.canonical_span(s).left == sc.canonical_span(t).left
    assert sc.canonical_span(s).right == sc.canonical_span(t).right


def test_class_violation():
    G = group("C2")
    spec = sc.gset_triple(G, forwards="injective")
    fold = GSetMap.to_point(GSet.trivial(G, 2))
    with pytest.raises(ClassViolation):
        sc.Span(GSetMap.identity(fold.source), fold, spec)
    with pytest.raises(ValueError):
        sc.gset_triple(G, forwards="full")


def test_composable_checks():
    G = group("C2")
    spec = sc.gset_triple(G)
    s = sc.identity_span(GSet.point(G), spec)
    t = sc.identity_span(GSet.regular(G), spec)
    with pytest.raises(InvalidStructure):
        sc.compose_spans(s, t)


@pytest.mark.parametrize("back,fwd", [("all", "injective"), ("injective", "surjective"),
                                      ("surjective", "all"), ("iso", "all")])
def test_triples_are_adequate(back, fwd):
    G = group("C2")
    spec = sc.gset_triple(G, back, fwd)
    objs = list(gs.gsets_up_to_iso(G, 3))
    cospans = [(b, f) for C in objs for A in objs for B in objs
               for b in gs.equivariant_maps(A, C) for f in gs.equivariant_maps(B, C)]
    assert sc.check_adequate(spec, cospans)


def test_dualize_twice():
    G = group("C2")
    spec = sc.gset_triple(G, "injective", "all")
    s = sc.hom_enumerate(GSet.point(G), GSet.regular(G), spec, 2)[-1].representative
    d = sc.dualize(s)
    assert d.spec.backwards == "all" and d.spec.forwards == "injective"
    assert sc.dualize(d).left == s.left


@pytest.mark.parametrize("name", ["1", "C2", "C3", "S3"])
@pytest.mark.parametrize("cap", [1, 2])
def test_groupoid_spans_from_point_are_gsets(name, cap):
    # pt <- Z -> BG with faithful right leg: a G-set with one orbit per component
    G = group(name)
    BG = FiniteGroupoid.from_group(G)
    homs = sc.hom_enumerate(FiniteGroupoid.point(), BG, sc.GROUPOID_ORBITAL, cap)
    r = len(G.subgroup_classes)
    assert len(homs) == comb(r + cap, cap)


def test_groupoid_composition_associative():
    G = group("C2")
    BG = FiniteGroupoid.from_group(G)
    pt = FiniteGroupoid.point()
    spec = sc.GROUPOID_ORBITAL
    a = sc.hom_enumerate(pt, BG, spec, 1)
    b = sc.hom_enumerate(BG, BG, spec, 1)
    c = sc.hom_enumerate(BG, pt, spec, 1)
    checked = 0
    for r in a:
        for s in b:
            for t in c:
                r_, s_, t_ = r.representative, s.representative, t.representative
                lhs = sc.compose_spans(sc.compose_spans(r_, s_), t_)
                rhs = sc.compose_spans(r_, sc.compose_spans(s_, t_))
                assert sc.span_iso(lhs, rhs)
                checked += 1
    assert checked > 0


def test_groupoid_composite_of_basepoints():
    # pt -> BG <- pt composes to the discrete groupoid on G
    G = group("C3")
    BG = FiniteGroupoid.from_group(G)
    pt = FiniteGroupoid.point()
    base = GroupoidMap(pt, BG, [0], [G.identity])
    spec = sc.GROUPOID_ORBITAL
    s = sc.Span(GroupoidMap.identity(pt), base, spec)
    t = sc.Span(base, GroupoidMap.identity(pt), spec)
    c = sc.compose_spans(s, t)
    assert c.apex.n_objects == 3 and c.apex.n_morphisms == 3


def test_arrow_census_trivial_group():
    # arrows with at most one point at each end: 0 -> 0, 0 -> 1, 1 -> 1
    rep = sc.arrow_env_enumerate(sc.gset_triple(group("1")), 1)
    assert rep.n_objects == 3
    with pytest.raises(InvalidStructure):
        sc.arrow_env_enumerate(sc.GROUPOID_ORBITAL, 1)
