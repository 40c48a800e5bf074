import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import signed_permutation_matrices
from sandwich_weyl.groups import (
    ClosureCapExceeded,
    FiniteGroup,
    GroupElement,
    check_table,
    element_multiply,
    group_closure,
    is_abelian,
    verify_group_axioms,
)
from sandwich_weyl.rational import RatMat
from sandwich_weyl.roots import build_root_system, simple_reflections

C2 = build_root_system("C", 2)
W_C2 = group_closure(simple_reflections(C2.roots, C2.simple_roots, domain=tuple(C2.sorted_roots())))


def test_trivial_group():
    g = group_closure([], dim=3)
    assert g.order == 1
    assert verify_group_axioms(g).passed


def test_c2_weyl_is_signed_permutations():
    assert set(W_C2.keys()) == signed_permutation_matrices(2)
    assert verify_group_axioms(W_C2).passed


def test_deleting_an_element_breaks_closure():
    g = FiniteGroup(W_C2.elements[1:], W_C2.generators, dim=2)
    rep = verify_group_axioms(g)
    assert not rep.get("closure").passed
    assert rep.get("closure").witness is not None


def test_permutation_fast_path_agrees_with_matrices():
    for i in range(W_C2.order):
        for j in range(W_C2.order):
            m = W_C2.elements[i].matrix @ W_C2.elements[j].matrix
            assert W_C2.elements[W_C2.mul(i, j)].matrix == m


def test_element_multiply_checks_shape():
    with pytest.raises(ValueError):
        element_multiply(GroupElement(RatMat.identity(2)), GroupElement(RatMat.identity(3)))


def test_cap_is_enforced(monkeypatch):
    shear = GroupElement(RatMat([[1, 1], [0, 1]]))
    with pytest.raises(ClosureCapExceeded):
        group_closure([shear], cap=50)
    monkeypatch.setenv("SANDWICH_CAP", "20")
    with pytest.raises(ClosureCapExceeded):
        group_closure([shear])


def test_closure_independent_of_workers_and_order():
    b3 = build_root_system("B", 3)
    gens = simple_reflections(b3.roots, b3.simple_roots)
    a = group_closure(gens)
    b = group_closure(list(reversed(gens)), workers=4)
    assert a.keys() == b.keys() and a.order == 48


@given(st.lists(st.integers(0, 1), max_size=12))
def test_words_land_in_closure(word):
    g = W_C2.generators
    m = RatMat.identity(2)
    for i in word:
        m = m @ g[i].matrix
    assert m.key in W_C2


def test_check_table_on_cyclic_group():
    n = 6
    rep = check_table(n, lambda a, b: (a + b) % n, 0, associativity=True)
    assert rep.passed
    rep = check_table(n, lambda a, b: (a - b) % n, 0, associativity=True)
    assert not rep.get("associativity").passed


def test_abelian_detection():
    assert not is_abelian(W_C2)[0]
    g = group_closure([GroupElement(RatMat.diagonal([-1, 1])), GroupElement(RatMat.diagonal([1, -1]))])
    assert is_abelian(g) == (True, None)
