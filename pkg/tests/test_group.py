import pytest

from finspan.errors import InvalidStructure
from finspan.group import (FiniteGroup, GroupHom, by_name, conjugacy_classes_of_homs,
                           direct_product, homomorphisms, symmetric)

from conftest import group

NAMES = ["1", "C2", "C3", "C4", "S3", "D4", "A4", "C2xC2", "C2xC3"]


@pytest.mark.parametrize("name", NAMES)
def test_group_axioms(name):
    G = group(name)
    e = G.identity
    for a in G.elements:
        assert G.mul(e, a) == a == G.mul(a, e)
        assert G.mul(a, G.inv(a)) == e
        for b in G.elements:
            for c in G.elements:
                assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))


# standard counts of conjugacy classes of subgroups
@pytest.mark.parametrize("name,order,classes", [
    ("1", 1, 1), ("C2", 2, 2), ("C3", 3, 2), ("C4", 4, 3), ("S3", 6, 4),
    ("D4", 8, 8), ("A4", 12, 5), ("C2xC2", 4, 5), ("C2xC3", 6, 4),
])
def test_subgroup_class_counts(name, order, classes):
    G = group(name)
    assert G.order == order
    assert len(G.subgroup_classes) == classes


@pytest.mark.parametrize("name", NAMES)
def test_subgroup_classes_are_canonical(name):
    G = group(name)
    cls = G.subgroup_classes
    assert len(cls[0][0]) == 1 and len(cls[-1][0]) == G.order
    orders = [len(c[0]) for c in cls]
    assert orders == sorted(orders)
    for i, c in enumerate(cls):
        for H in c:
            assert G.is_subgroup(H) and G.class_index(H) == i
        assert {frozenset(G.conjugate(c[0], g)) for g in G.elements} == set(c)


@pytest.mark.parametrize("name", NAMES)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_hom_from_cyclic_counts_solutions(name, n):
    # Hom(C_n, G) is in bijection with {g : g^n = e}
    G = group(name)

    def power(g, k):
        out = G.identity
        for _ in range(k):
            out = G.mul(out, g)
        return out

    expected = sum(1 for g in G.elements if power(g, n) == G.identity)
    assert len(list(homomorphisms(by_name(f"C{n}") if n > 1 else by_name("1"), G))) == expected


def test_conjugacy_classes_of_homs_into_s3():
    # C2 -> S3: trivial map and the class of transpositions
    assert len(conjugacy_classes_of_homs(group("C2"), symmetric(3))) == 2
    # S3 -> S3: trivial, sign onto a transposition, and the inner automorphisms
    assert len(conjugacy_classes_of_homs(group("S3"), symmetric(3))) == 3


def test_double_cosets_partition_the_group():
    G = group("S3")
    for K in G.subgroups:
        for H in G.subgroups:
            ds = G.double_cosets(K, H)
            assert sum(len(d) for d in ds) == G.order
            assert frozenset().union(*ds) == frozenset(G.elements)


def test_quotient_and_subgroup_group():
    G = group("S3")
    A3 = G.class_rep(2)
    Q, pi = G.quotient(A3)
    assert Q.order == 2 and pi.kernel() == A3
    sub, inc = G.subgroup_group(A3)
    assert sub.order == 3 and inc.is_injective() and inc.image() == A3
    with pytest.raises(InvalidStructure):
        G.quotient(G.class_rep(1))


def test_direct_product_order():
    P = direct_product(group("S3"), group("C2"))
    assert P.order == 12 and not P.is_abelian()


def test_invalid_structures_rejected():
    with pytest.raises(InvalidStructure):
        FiniteGroup([[0, 1], [0, 1]])
    with pytest.raises(InvalidStructure):
        GroupHom(group("C2"), group("C3"), [0, 1])
    with pytest.raises(ValueError):
        by_name("Q8")
