import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cyclocat.hopf import (antipode, antipode_inverse, build_structure, coproduct, counit,
                           gram_matrix, is_permutation_matrix, tensor_multiply, trace, trace_pairing,
                           verify_hopf_axioms, verify_integrals, verify_spherical, verify_structure)


def test_constants_n6(H6):
    assert (H6.t, H6.ps, H6.m, H6.N, H6.nk, H6.ell) == (2, [2, 3], 6, 6, [3, 2], 7)
    assert H6.dim == 6 and H6.bosonization_dim == 36


def test_constants_n12():
    H = build_structure(12)
    assert (H.m, H.N, H.nk, H.ell) == (6, 24, [6, 4], 14)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_constants_prime(p):
    H = build_structure(p)
    assert (H.t, H.m, H.N, H.nk, H.ell) == (1, p, p, [1], p - 1)
    assert H.braided_integral() == H.d(1) ** (p - 1)


def test_rejects_small_n():
    with pytest.raises(ValueError):
        build_structure(1)


def test_commutation_with_K(H6):
    for k in (1, 2):
        assert H6.K() * H6.d(k) == (H6.d(k) * H6.K()).scale(H6.xi_k[k - 1])
        p = H6.ps[k - 1]
        assert (H6.d(k) ** (p - 1)) * H6.d(k) == H6.element({})


def test_square_of_sum(H6):
    # (d1 + d2)^2 = d2^2 + 2 d1 d2, since d1^2 = 0 and d1 d2 = d2 d1 in H_6
    s = H6.d(1) + H6.d(2)
    two = H6.field.from_int(2)
    assert s * s == H6.d(2) * H6.d(2) + (H6.d(1) * H6.d(2)).scale(two)


def test_coproduct_of_generators(H6):
    F = H6.field
    for k in (1, 2):
        a = H6.unit_vector(k - 1)
        zero = (0, 0)
        want = {((a, 0), (zero, 0)): F.one, ((zero, H6.nk[k - 1]), (a, 0)): F.one}
        assert coproduct(H6.d(k)) == want
    assert coproduct(H6.one()) == {(((0, 0), 0), ((0, 0), 0)): F.one}


@pytest.mark.parametrize("n", [2, 3, 6, 12])
def test_middle_binomials_vanish(n):
    H = build_structure(n)
    for k in range(H.t):
        p = H.ps[k]
        for b in range(1, p):
            assert H.binom(k, p, b) == H.field.zero


def test_counit_and_antipode_on_generators(H6):
    F = H6.field
    assert counit(H6.K()) == F.one and counit(H6.d(1)) == F.zero
    assert antipode(H6.one()) == H6.one()
    for k in (1, 2):
        assert antipode(H6.d(k)) == -(H6.K(-H6.nk[k - 1]) * H6.d(k))
        assert antipode_inverse(antipode(H6.d(k))) == H6.d(k)
        w = H6.omega()
        assert antipode(antipode(H6.d(k))) == w * H6.d(k) * H6.K(sum(H6.nk))


def test_omega_n6(H6):
    assert H6.omega() == H6.K(1)


def test_trace(H6):
    F = H6.field
    assert trace(H6.braided_integral()) == F.one
    assert trace(H6.one()) == F.zero
    with pytest.raises(ValueError):
        trace_pairing(H6.K(), H6.one())


def test_gram_anti_diagonal_n6(H6):
    F = H6.field
    G = gram_matrix(H6)
    size = len(G)
    expect = [[F.one if r + c == size - 1 else F.zero for c in range(size)] for r in range(size)]
    assert G == expect
    assert is_permutation_matrix(G, F)


def test_gram_oracle_sympy():
    # commuting truncated polynomial algebra: Tr(x^a y^b) picks the top monomial
    H = build_structure(10)
    x, y = sympy.symbols("x y")
    mons = [x**a * y**b for a, b in H.exponents]
    top = x**H.top[0] * y**H.top[1]
    oracle = [[1 if sympy.expand(u * w) == top else 0 for w in mons] for u in mons]
    got = [[int(c.to_fraction()) for c in row] for row in gram_matrix(H)]
    assert got == oracle


def test_integral_kills_generators(H6):
    lam = H6.integral()
    for k in (1, 2):
        assert H6.d(k) * lam == H6.element({})
    assert H6.K() * lam == lam


@pytest.mark.parametrize("n", [2, 3, 4, 6, 10, 12])
def test_full_verification(n):
    H = build_structure(n)
    for rep in (verify_structure(H), verify_hopf_axioms(H), verify_spherical(H), verify_integrals(H)):
        assert rep.passed, str(rep)


def test_prime_field_mode():
    H = build_structure(6, "fp:37")
    assert verify_hopf_axioms(H).passed
    assert verify_spherical(H).passed


def test_untwisted_coproduct_is_caught(H6):
    rep = verify_hopf_axioms(H6, twisted=False)
    assert not rep.passed
    assert not rep["coproduct_multiplicative"].passed


@settings(max_examples=40, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 5), st.integers(-3, 3)), min_size=1, max_size=4),
       st.lists(st.tuples(st.integers(0, 5), st.integers(-3, 3)), min_size=1, max_size=4))
def test_coproduct_is_multiplicative_on_random_elements(xs, ys):
    H = build_structure(6)
    F = H.field

    def element(pairs):
        terms = {}
        for idx, c in pairs:
            key = H.basis[idx * 7 % len(H.basis)]
            terms[key] = terms.get(key, F.zero) + F.from_int(c)
        return H.element(terms)

    x, y = element(xs), element(ys)
    assert coproduct(x * y) == tensor_multiply(H, coproduct(x), coproduct(y))
