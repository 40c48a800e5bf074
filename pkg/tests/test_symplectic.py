from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import diagonal_sign_matrices, family
from sandwich_weyl.rational import RatMat
from sandwich_weyl.symplectic import (
    compose_perm,
    lift_permutation,
    mu_isomorphism,
    s_generator,
    script_w,
    standard_form,
    verify_phase_space,
    verify_s_relations,
)


def test_standard_form_small():
    assert standard_form(1) == RatMat([[0, 1], [-1, 0]])
    ps = family(2).phase_space
    x1, x2, y1, y2 = ([int(i == k) for i in range(4)] for k in range(4))
    assert ps.form(x1, y1) == 1 and ps.form(x1, y2) == 0 and ps.form(y1, x1) == -1


def test_s_generator_example():
    ps = family(2).phase_space
    assert s_generator(ps, 0).matrix == RatMat.diagonal([-1, 1, -1, 1])
    with pytest.raises(ValueError):
        s_generator(ps, 2)


def test_lift_examples():
    ps = family(2).phase_space
    assert lift_permutation(ps, (0, 1)).matrix == RatMat.identity(4)
    swap = lift_permutation(ps, (1, 0)).matrix
    assert swap == RatMat([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    with pytest.raises(ValueError):
        lift_permutation(ps, (0, 0))


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_everything_symplectic(m):
    ps = family(m).phase_space
    assert verify_phase_space(ps).passed
    assert verify_s_relations(ps).passed
    for tau in permutations(range(m)):
        assert ps.is_symplectic(lift_permutation(ps, tau).matrix)


@pytest.mark.parametrize("m,order", [(1, 2), (2, 4), (3, 8)])
def test_script_w_orders(m, order):
    w = script_w(family(m).phase_space)
    assert w.order == order
    # each element is +-1 on matched (x_i, y_i) pairs
    assert set(w.keys()) <= diagonal_sign_matrices(2 * m)
    for e in w.elements:
        assert all(e.matrix.entry(i, i) == e.matrix.entry(m + i, m + i) for i in range(m))


@given(st.permutations(range(4)), st.permutations(range(4)))
def test_lift_is_multiplicative(a, b):
    ps = family(4).phase_space
    assert lift_permutation(ps, a).matrix @ lift_permutation(ps, b).matrix == lift_permutation(ps, compose_perm(a, b)).matrix


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_mu_is_isomorphism(m):
    v = family(m)
    rep = mu_isomorphism(v.w_hat, v.w_script)
    assert rep.passed, rep.first_failure()
    assert len(rep.data["mu"]) == 2**m


def test_mu_rejects_mismatched_generators():
    with pytest.raises(ValueError):
        mu_isomorphism(family(2).w_hat, family(3).w_script)
