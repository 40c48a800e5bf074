from math import factorial

import pytest

from oracles import family, signed_permutation_matrices
from sandwich_weyl.groups import GroupElement
from sandwich_weyl.rational import RatMat
from sandwich_weyl.roots import reflection
from sandwich_weyl.semidirect import (
    InducedActionError,
    SdpElement,
    check_rminus_stability,
    conjugation_check,
    exact_sequence_check,
    induced_action,
    phi_homomorphism_check,
    realization_check,
    sdp_multiply,
    tau_homomorphism_check,
    verify_semidirect_axioms,
)
from sandwich_weyl.symplectic import lift_permutation, s_generator


def _base_reflection(v, alpha):
    a = v.a
    return reflection(a.ambient.roots, a.ambient.simple_roots, tuple(alpha), domain=tuple(sorted(a.ambient.roots)))


def test_induced_action_examples():
    v = family(2)
    im = induced_action(v.a, v.h, _base_reflection(v, (0, 1, -1)))
    assert im.tau == (1, 0) and tuple(im.signs) == (1, 1)
    im = induced_action(v.a, v.h, _base_reflection(v, (0, 2, 0)))
    assert im.tau == (0, 1) and tuple(im.signs) == (-1, 1)
    ident = v.w_base.elements[v.w_base.identity_index]
    im = induced_action(v.a, v.h, ident)
    assert im.tau == (0, 1) and tuple(im.signs) == (1, 1)


def test_induced_action_rejects_non_stabilizing_map():
    v = family(2)
    bad = _base_reflection(v, (2, 0, 0))  # moves R- out of R-
    with pytest.raises(InducedActionError) as exc:
        induced_action(v.a, v.h, bad)
    assert exc.value.witness


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_base_group_is_hyperoctahedral(m):
    w = family(m).w_base
    assert set(w.keys()) == signed_permutation_matrices(m, pad_front=1)


@pytest.mark.parametrize("m", [1, 2, 3])
def test_stability_and_tau(m):
    v = family(m)
    assert check_rminus_stability(v.a, v.w_base).passed
    assert check_rminus_stability(v.a, [v.w_base.elements[v.w_base.identity_index]]).passed
    assert tau_homomorphism_check(v.a, v.h, v.w_base, v.induced).passed


def test_stability_fails_for_wrong_reflection():
    v = family(2)
    rep = check_rminus_stability(v.a, [_base_reflection(v, (2, 0, 0))])
    assert not rep.passed and rep.get("stable").witness


@pytest.mark.parametrize("m", [1, 2, 3])
def test_conjugation_and_phi(m):
    v = family(m)
    assert conjugation_check(v.phase_space, v.induced, v.w_base).passed
    assert phi_homomorphism_check(v.phase_space, v.w_script, v.w_base, v.induced, v.phi).passed


def test_sdp_multiply_example():
    v = family(2)
    sdp, ps = v.sdp, v.phase_space
    swap = _base_reflection(v, (0, 1, -1))
    s1 = s_generator(ps, 0)
    s12 = GroupElement(s1.matrix @ s_generator(ps, 1).matrix)
    ident = RatMat.identity(3)
    got = sdp_multiply(sdp, SdpElement(s1.key, swap.key), SdpElement(s1.key, ident.key))
    assert got == SdpElement(s12.key, swap.key)
    assert lift_permutation(ps, (1, 0)).matrix @ s1.matrix @ lift_permutation(ps, (1, 0)).matrix == s_generator(ps, 1).matrix


@pytest.mark.parametrize("m", [1, 2, 3])
def test_semidirect_orders_and_laws(m):
    v = family(m)
    assert v.sdp.order == 2**m * 2**m * factorial(m)
    assert verify_semidirect_axioms(v.sdp, associativity=m <= 2).passed
    rep = exact_sequence_check(v.sdp)
    assert rep.passed, rep.first_failure()
    assert realization_check(v.sdp, v.phase_space, v.induced).passed


def test_unresolved_key():
    v = family(1)
    with pytest.raises(ValueError):
        v.sdp.resolve(SdpElement(b"nope", b"nope"))
