from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import c_roots, cartan_integer, chain_scan, euclid_reflect
from sandwich_weyl.groups import group_closure
from sandwich_weyl.rational import vec, zero_vec
from sandwich_weyl.roots import (
    build_root_system,
    expected_root_count,
    extend_functional,
    killing_integer,
    reflection,
    reflection_laws,
    root_chain,
    simple_reflections,
)

C2 = build_root_system("C", 2)
C3 = build_root_system("C", 3)
HAT2 = frozenset({vec([1, 0]), vec([-1, 0]), vec([0, 1]), vec([0, -1])})
E1, E2 = vec([1, 0]), vec([0, 1])


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_type_c_matches_enumeration(n):
    assert build_root_system("C", n).roots == c_roots(n)


def test_small_examples():
    assert C2.roots == {vec(v) for v in [(2, 0), (-2, 0), (0, 2), (0, -2), (1, 1), (1, -1), (-1, 1), (-1, -1)]}
    assert build_root_system("A", 1).roots == {vec([1, -1]), vec([-1, 1])}
    assert len(C3) == 18


@pytest.mark.parametrize(
    "label,rank",
    [("A", 3), ("B", 3), ("C", 4), ("D", 4), ("G", 2), ("F", 4), ("E", 6), ("E", 7), ("E", 8)],
)
def test_root_counts(label, rank):
    assert len(build_root_system(label, rank)) == expected_root_count(label, rank)


@pytest.mark.parametrize("label,rank", [("Q", 2), ("D", 1), ("C", 0), ("G", 3), ("E", 5)])
def test_bad_types_rejected(label, rank):
    with pytest.raises(ValueError):
        build_root_system(label, rank)


def test_chain_examples():
    ch = root_chain(HAT2, E1, E1)
    assert (ch.q, ch.p) == (2, 0)
    assert set(ch.elements) == {vec([-1, 0]), vec([0, 0]), E1}
    ch = root_chain(HAT2, E2, E1)
    assert (ch.q, ch.p) == (0, 0)
    ch = root_chain(C2.roots, vec([0, 2]), vec([1, -1]))
    assert (ch.q, ch.p) == (0, 2)


def test_chain_rejects_nonmembers():
    with pytest.raises(ValueError):
        root_chain(HAT2, vec([1, 1]), E1)


def test_killing_examples():
    assert killing_integer(HAT2, E1, E1) == 2
    assert killing_integer(C2.roots, vec([1, -1]), vec([0, 2])) == -1
    assert killing_integer(HAT2, E2, E1) == 0


@pytest.mark.parametrize("system", [C2, C3, build_root_system("B", 3), build_root_system("G", 2)])
def test_killing_matches_euclidean_oracle(system):
    for a in system.roots:
        for b in system.roots:
            assert killing_integer(system.roots, b, a) == cartan_integer(b, a)
            assert (lambda qp: qp[0] - qp[1])(chain_scan(system.roots, b, a)) == cartan_integer(b, a)


def test_extend_functional():
    k = extend_functional(HAT2, [E1, E2], E1)
    assert (k(E1), k(E2)) == (2, 0)
    assert extend_functional(HAT2, [E1, E2], zero_vec(2)).is_zero()
    for a in C3.roots:
        assert extend_functional(C3.roots, C3.simple_roots, a)(a) == 2


def test_zero_reflection_is_identity():
    r = reflection(HAT2, [E1, E2], zero_vec(2))
    assert all(r(v) == v for v in HAT2)


@given(st.sampled_from(sorted(C3.roots)), st.sampled_from(sorted(C3.roots)))
def test_reflection_matches_euclidean(alpha, beta):
    r = reflection(C3.roots, C3.simple_roots, alpha)
    assert r(beta) == euclid_reflect(beta, alpha)
    assert r(r(beta)) == beta


@pytest.mark.parametrize("label,rank", [("C", 2), ("C", 3), ("B", 3), ("G", 2)])
def test_reflection_laws_exhaustive(label, rank):
    rs = build_root_system(label, rank)
    rep = reflection_laws(rs.roots, rs.simple_roots)
    assert rep.passed, rep.first_failure()


@pytest.mark.parametrize("label,rank,order", [("A", 2, 6), ("B", 2, 8), ("C", 3, 48), ("G", 2, 12), ("D", 4, 192)])
def test_weyl_orders(label, rank, order):
    rs = build_root_system(label, rank)
    g = group_closure(simple_reflections(rs.roots, rs.simple_roots))
    assert g.order == order


def test_half_integer_roots_are_exact():
    f4 = build_root_system("F", 4)
    assert vec([Fraction(1, 2)] * 4) in f4
