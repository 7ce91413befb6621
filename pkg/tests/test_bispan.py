import itertools
from collections import Counter

import pytest
from hypothesis import given
from hypothesis import strategies as st

from finspan import bispan as bs
from finspan.errors import ClassViolation, InvalidStructure
from finspan.gset import GSet, GSetMap

from conftest import group

TRIV = group("1")
SPEC = bs.bispan_triple(TRIV)


def _set(n):
    return GSet.trivial(TRIV, n)


@st.composite
def set_bispans(draw, A, B, max_x=3, max_y=3):
    """A random bispan of finite sets A <- X -> Y -> B."""
    ny = draw(st.integers(0, max_y)) if B.size else 0
    nx = draw(st.integers(0, max_x)) if ny and A.size else 0
    X, Y = _set(nx), _set(ny)
    t = GSetMap(Y, B, [draw(st.integers(0, B.size - 1)) for _ in Y.points])
    n = GSetMap(X, Y, [draw(st.integers(0, Y.size - 1)) for _ in X.points])
    f = GSetMap(X, A, [draw(st.integers(0, A.size - 1)) for _ in X.points])
    return bs.Bispan(f, n, t, SPEC)


def polynomial(b):
    """Per target point: a Counter of monomials (sorted tuples of source points)."""
    out = [Counter() for _ in b.target.points]
    for y in b.Y.points:
        mono = tuple(sorted(b.left.images[x] for x in b.X.points if b.norm.images[x] == y))
        out[b.sum.images[y]][mono] += 1
    return out


def substitute(p, q):
    """``p`` with variable ``j`` replaced by the polynomial ``q[j]``."""
    out = []
    for poly in p:
        acc = Counter()
        for mono, c in poly.items():
            term = Counter({(): 1})
            for v in mono:
                nxt = Counter()
                for m1, c1 in term.items():
                    for m2, c2 in q[v].items():
                        nxt[tuple(sorted(m1 + m2))] += c1 * c2
                term = nxt
            for m, k in term.items():
                acc[m] += c * k
        out.append(+acc)
    return out


sizes = st.integers(1, 2)


@given(st.data())
def test_composition_is_polynomial_substitution(data):
    A, B, C = (_set(data.draw(sizes)) for _ in range(3))
    u = data.draw(set_bispans(A, B))
    v = data.draw(set_bispans(B, C))
    w = bs.compose_bispans(u, v)
    assert [+p for p in polynomial(w)] == substitute(polynomial(v), polynomial(u))


@given(st.data())
def test_rewrite_strategies_agree(data):
    A, B, C = (_set(data.draw(sizes)) for _ in range(3))
    u = data.draw(set_bispans(A, B))
    v = data.draw(set_bispans(B, C))
    seed = data.draw(st.integers(0, 1000))
    cert = bs.check_confluence(u, v, seeds=(seed,))
    assert cert, cert.reason


@given(st.data())
def test_associativity_and_identity(data):
    A, B, C, D = (_set(data.draw(sizes)) for _ in range(4))
    u = data.draw(set_bispans(A, B, 2, 2))
    v = data.draw(set_bispans(B, C, 2, 2))
    w = data.draw(set_bispans(C, D, 2, 2))
    lhs = bs.compose_bispans(bs.compose_bispans(u, v), w)
    rhs = bs.compose_bispans(u, bs.compose_bispans(v, w))
    assert bs.bispan_iso(lhs, rhs)
    assert bs.bispan_key(lhs) == bs.bispan_key(rhs)
    assert bs.bispan_iso(bs.compose_bispans(bs.identity_bispan(A, SPEC), u), u)
    assert bs.bispan_iso(bs.compose_bispans(u, bs.identity_bispan(B, SPEC)), u)


def test_distributive_law_example():
    # (x0 + x1)(x2 + x3): transfer along a pair fold, then norm along the fold 2 -> 1
    u = bs.transfer(GSetMap(_set(4), _set(2), [0, 0, 1, 1]), SPEC)
    v = bs.norm(GSetMap(_set(2), _set(1), [0, 0]), SPEC)
    w = bs.compose_bispans(u, v)
    assert w.Y.size == 4 and w.X.size == 8
    assert polynomial(w)[0] == Counter({(0, 2): 1, (0, 3): 1, (1, 2): 1, (1, 3): 1})


def test_trace_records_exchange():
    u = bs.transfer(GSetMap(_set(2), _set(1), [0, 0]), SPEC)
    v = bs.norm(GSetMap(_set(1), _set(1), [0]), SPEC)
    trace = bs.RewriteTrace("leftmost")
    bs.normalize(u.word() + v.word(), "leftmost", 0, trace)
    assert any(kinds == "TN" and out == "RNT" for _, kinds, out in trace.steps)


def _pt_pt_count(cap):
    # polynomials in one variable: at most cap monomials, total degree at most cap
    total = 0
    for k in range(cap + 1):
        for degs in itertools.combinations_with_replacement(range(cap + 1), k):
            if sum(degs) <= cap:
                total += 1
    return total


@pytest.mark.parametrize("cap", [0, 1, 2, 3])
def test_enumeration_count_trivial_group(cap):
    pt = _set(1)
    assert len(bs.bispan_enumerate(pt, pt, SPEC, cap)) == _pt_pt_count(cap)


@given(st.data())
def test_canonical_form_and_key(data):
    G = group(data.draw(st.sampled_from(["C2", "S3"])))
    spec = bs.bispan_triple(G)
    E = bs.orbit_endpoints(G)
    A = data.draw(st.sampled_from(E))
    B = data.draw(st.sampled_from(E))
    reps = bs.bispan_enumerate(A, B, spec, 2)
    b = data.draw(st.sampled_from(reps))
    c = bs.canonical_bispan(b)
    assert bs.bispan_iso(b, c)
    assert bs.bispan_key(c) == bs.bispan_key(b)
    assert bs.bispan_from_key(bs.bispan_key(b), A, B, spec).word()[0].map == c.left


def test_enumerated_classes_are_pairwise_distinct():
    G = group("C2")
    spec = bs.bispan_triple(G)
    E = bs.orbit_endpoints(G)
    reps = bs.bispan_enumerate(E[0], E[1], spec, 2)
    for i, a in enumerate(reps):
        for b in reps[i + 1:]:
            assert not bs.bispan_iso(a, b)


def test_span_round_trip():
    G = group("C2")
    spec = bs.bispan_triple(G)
    R = GSet.regular(G)
    f = GSetMap.to_point(R)
    b = bs.compose_bispans(bs.restriction(f, spec), bs.transfer(f, spec))
    s = bs.to_span(b)
    assert bs.bispan_iso(bs.from_span(s, spec), b)
    with pytest.raises(ClassViolation):
        bs.to_span(bs.norm(f, spec))


def test_class_checks():
    G = group("C2")
    spec = bs.bispan_triple(G, norm="iso")
    f = GSetMap.to_point(GSet.trivial(G, 2))
    with pytest.raises(ClassViolation):
        bs.norm(f, spec)
    with pytest.raises(ValueError):
        bs.BispanTripleSpec("groupoid", "faithful", "faithful")
    u = bs.identity_bispan(GSet.point(G), bs.bispan_triple(G))
    v = bs.identity_bispan(GSet.regular(G), bs.bispan_triple(G))
    with pytest.raises(InvalidStructure):
        bs.compose_bispans(u, v)
    with pytest.raises(ValueError):
        bs.normalize(u.word() + u.word(), "sideways")
