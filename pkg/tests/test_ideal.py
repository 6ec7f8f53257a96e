import random

import pytest
from hypothesis import given, settings, strategies as st

from cyclocat.gradedmod import (direct_sum, example_I_three_primes, example_V, example_Vdoubleprime,
                                example_Vprime, free, random_extension, string_module, tensor,
                                trivial, v_k)
from cyclocat.hopf import build_structure
from cyclocat.ideal import (MEMBER, NOT_CERTIFIED, NOT_MEMBER, FiltrationCertificate,
                            closure_harness, is_free_over_Hnk, is_in_I, is_in_Ik, random_member,
                            replay)


def test_vk_is_member(H6):
    for k in (1, 2):
        res = is_in_Ik(v_k(H6, k, 3), k)
        assert res.status == MEMBER and res.certificate.kinds() == [k]
        assert res.certificate.steps[0].b == 3
        assert is_in_I(v_k(H6, k, 3))


def test_wrong_prime_is_obstructed(H6):
    res = is_in_Ik(v_k(H6, 1), 2)
    assert res.status == NOT_MEMBER and res.obstruction


def test_trivial_not_member(H6):
    res = is_in_I(trivial(H6))
    assert res.status == NOT_MEMBER
    assert "Phi_6" in res.obstruction or "divis" in res.obstruction


def test_free_is_member_of_every_ideal(H6):
    for k in (1, 2):
        assert is_in_Ik(free(H6, 2), k).status == MEMBER
    cert = is_in_I(free(H6)).certificate
    assert replay(cert, free(H6))


def test_two_prime_examples(H6):
    for build in (example_V, example_Vprime, example_Vdoubleprime):
        M = build(H6)
        res = is_in_Ik(M, 2)
        assert res.status == MEMBER
        assert res.certificate.kinds() == [2, 2]
        assert replay(res.certificate, M, only_k=2)


def test_three_prime_example():
    H = build_structure(30)
    T = example_I_three_primes(H)
    res = is_in_I(T)
    assert res.status == MEMBER
    assert sorted(res.certificate.kinds()) == [2, 3]
    for k in (1, 2, 3):
        assert is_in_Ik(T, k).status != MEMBER


def test_certificate_roundtrip(H6):
    M = example_V(H6)
    cert = is_in_Ik(M, 2).certificate
    again = FiltrationCertificate.from_dict(cert.to_dict(), H6.field)
    assert replay(again, M)
    # a tampered certificate must not replay
    again.steps[0].b += 1
    assert not replay(again, M)


def test_freeness_over_subalgebra(H6):
    assert is_free_over_Hnk(v_k(H6, 2), 2)
    assert not is_free_over_Hnk(v_k(H6, 2), 1)
    assert not is_free_over_Hnk(string_module(H6, 2, 2), 2)


def test_budget_reports_uncertified(H6):
    res = is_in_Ik(example_V(H6), 2, budget=0)
    assert res.status == NOT_CERTIFIED and res.obstruction == "budget exhausted"
    assert not res


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([6, 10, 12]))
def test_random_members_get_certified(seed, n):
    H = build_structure(n)
    M, steps = random_member(H, random.Random(seed), 12)
    res = is_in_I(M, seed=seed)
    assert res.status == MEMBER, res.obstruction
    assert replay(res.certificate, M)
    assert sum(H.ps[k - 1] for k in res.certificate.kinds()) <= M.total_dim


def test_direct_sum_with_nonmember_is_obstructed(H6):
    assert is_in_I(direct_sum(v_k(H6, 1), trivial(H6))).status == NOT_MEMBER


def test_tensor_with_member(H6):
    M = tensor(v_k(H6, 1), string_module(H6, 2, 2))
    assert is_in_Ik(M, 1).status == MEMBER


def test_extension_of_members(H6):
    rng = random.Random(3)
    E = random_extension(v_k(H6, 2, 1), v_k(H6, 2, -1), rng)
    assert is_in_Ik(E, 2).status == MEMBER


def test_closure_harness_small():
    rep = closure_harness(build_structure(6), trials=6, seed=2)
    assert rep.passed, str(rep)


def test_bad_prime_index(H6):
    with pytest.raises(IndexError):
        is_in_Ik(v_k(H6, 1), 3)
