import pytest
from hypothesis import given
from hypothesis import strategies as st

from finspan import groupoid as gpd
from finspan.errors import CapacityError, InvalidStructure
from finspan import caps as _caps
from finspan.group import homomorphisms
from finspan.groupoid import FiniteGroupoid, GroupoidMap
from finspan.gset import GSet

from conftest import group


def _basepoint(G):
    return GroupoidMap(FiniteGroupoid.point(), FiniteGroupoid.from_group(G), [0], [G.identity])


@pytest.mark.parametrize("name", ["1", "C2", "C3", "C4", "S3", "D4"])
def test_point_pullback_over_bg_is_discrete(name):
    G = group(name)
    sq = gpd.iso_comma_pullback(_basepoint(G), _basepoint(G))
    P = sq.apex
    assert P.n_objects == G.order
    assert P.n_morphisms == G.order
    assert len(gpd.components(P)) == G.order
    assert gpd.verify_pullback_up(sq)


def _hom_legs(G):
    legs = []
    for S in ("1", "C2", "C3"):
        legs += [GroupoidMap.from_group_hom(phi) for phi in homomorphisms(group(S), G)]
    return legs


@given(st.data())
def test_pullback_of_group_homs_matches_double_cosets(data):
    G = group(data.draw(st.sampled_from(["C2", "C4", "S3"])))
    legs = _hom_legs(G)
    f = data.draw(st.sampled_from(legs))
    g = data.draw(st.sampled_from(legs))
    sq = gpd.iso_comma_pullback(f, g)
    P = sq.apex
    H, K = f.source.n_morphisms, g.source.n_morphisms
    # objects are elements of G; the pair group H x K acts through double cosets
    imf = frozenset(f.mor)
    img = frozenset(g.mor)
    dcs = G.double_cosets(img, imf)
    assert P.n_objects == G.order
    assert P.n_morphisms == G.order * H * K
    comps = gpd.components(P)
    assert len(comps) == len(dcs)
    assert sorted(c.group.order for c in comps) == sorted(H * K // len(d) for d in dcs)
    assert gpd.verify_pullback_up(sq)


@given(st.data())
def test_faithful_maps_are_pullback_stable(data):
    G = group(data.draw(st.sampled_from(["C2", "C3", "S3"])))
    legs = _hom_legs(G) + [GroupoidMap.action_projection(GSet.cosets(G, H))
                           for H in G.subgroups]
    f = data.draw(st.sampled_from(legs))
    g = data.draw(st.sampled_from(legs))
    old = _caps.set_current(_caps.Caps(objects=512, morphisms=1 << 16))
    try:
        sq = gpd.iso_comma_pullback(f, g)
    finally:
        _caps.set_current(old)
    if gpd.is_faithful(g):
        assert gpd.is_faithful(sq.p)
    if gpd.is_faithful(f):
        assert gpd.is_faithful(sq.q)


def test_broken_cell_fails_universal_property():
    G = group("C3")
    f = g = _basepoint(G)
    sq = gpd.iso_comma_pullback(f, g)
    # collapse the apex onto one object: the 2-cell no longer covers G
    one = FiniteGroupoid.point()
    p = GroupoidMap(one, f.source, [0], [0])
    bad = gpd.IsoCommaSquare(f, g, p, p, (sq.cell[0],))
    assert not gpd.verify_pullback_up(bad)
    wrong = gpd.IsoCommaSquare(f, g, p, p, (1,))
    assert not gpd.verify_pullback_up(wrong)


@given(st.data())
def test_em_factorization(data):
    G = group(data.draw(st.sampled_from(["C2", "C4", "S3"])))
    S = group(data.draw(st.sampled_from(["C2", "C3", "S3"])))
    phis = list(homomorphisms(S, G))
    f = GroupoidMap.from_group_hom(data.draw(st.sampled_from(phis)))
    e, m = gpd.em_factorize(f)
    assert e.then(m) == f
    assert gpd.in_left_class(e)
    assert gpd.is_faithful(m)
    assert gpd.is_em_factorization(f, e, m)


def test_fold_map_is_not_in_left_class():
    two = FiniteGroupoid.discrete(2)
    fold = GroupoidMap.to_point(two)
    # no arrow between the two source objects, so not full either
    assert not gpd.is_full(fold)
    assert not gpd.in_left_class(fold)
    assert gpd.in_left_class(GroupoidMap.to_point(FiniteGroupoid.from_group(group("C2"))))


def test_action_groupoid_equivalent_to_stabilizer():
    G = group("S3")
    H = G.class_rep(1)
    X = GSet.cosets(G, H)
    A = FiniteGroupoid.action(X)
    BH = FiniteGroupoid.from_group(G.subgroup_group(H)[0])
    assert gpd.are_equivalent(A, BH)
    assert not gpd.are_equivalent(A, FiniteGroupoid.from_group(G))


def test_capacity_on_large_apex():
    G = group("S3")
    X = GSet.regular(G)
    f = GroupoidMap.action_projection(X)
    old = _caps.set_current(_caps.Caps(objects=10))
    try:
        with pytest.raises(CapacityError):
            gpd.iso_comma_pullback(f, f)
    finally:
        _caps.set_current(old)


def test_invalid_functor_rejected():
    BG = FiniteGroupoid.from_group(group("C3"))
    with pytest.raises(InvalidStructure):
        GroupoidMap(BG, BG, [0], [0, 1, 1])
