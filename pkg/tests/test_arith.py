import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cyclocat.arith import poly as P
from cyclocat.arith.cyclotomic import (cyclotomic_polynomial, divisors, euler_phi, factorize,
                                       q_integer, quantum_binomial, radical, string_quotient,
                                       verify_cyclotomic_identities)
from cyclocat.arith.field import (FieldError, PrimeField, cyclotomic_field, is_primitive_root,
                                  make_field)
from cyclocat.arith.laurent import LaurentPolynomial as L, gcd, parse_terms

x = sympy.symbols("x")
small_polys = st.lists(st.integers(-50, 50), max_size=12).map(P.trim)


def sym(p):
    return sympy.Poly(list(reversed(p)) or [0], x)


def from_sym(expr):
    return P.trim(tuple(int(c) for c in reversed(sympy.Poly(expr, x).all_coeffs())))


@given(small_polys, small_polys)
def test_mul_matches_sympy(a, b):
    assert P.mul(a, b) == from_sym(sym(a).as_expr() * sym(b).as_expr())


def test_kronecker_path_large_coefficients():
    rng = random.Random(7)
    a = tuple(rng.randint(-10**30, 10**30) for _ in range(120))
    b = tuple(rng.randint(-10**5, 10**5) for _ in range(90))
    assert P.mul(a, b) == from_sym(sym(a).as_expr() * sym(b).as_expr())


monic = st.tuples(st.lists(st.integers(-50, 50), max_size=6), st.sampled_from([1, -1])).map(
    lambda t: tuple(t[0]) + (t[1],))


@given(small_polys, monic)
def test_divmod_monic(a, b):
    q, r = P.divmod_monic(a, b)
    assert P.add(P.mul(q, b), r) == a
    assert len(r) < len(b)


@given(small_polys, small_polys.filter(bool))
def test_divexact_roundtrip(a, b):
    assert P.divexact(P.mul(a, b), b) == a


def test_divexact_rejects():
    assert P.divexact((1, 0, 1), (1, 1)) is None


@settings(max_examples=60)
@given(small_polys.filter(bool), small_polys.filter(bool), small_polys.filter(bool))
def test_gcd_matches_sympy(a, b, c):
    g = P.gcd_poly(P.mul(a, c), P.mul(b, c))
    want = sympy.gcd(sym(P.mul(a, c)), sym(P.mul(b, c)))
    assert sympy.Poly(sym(g).as_expr(), x).monic() == want.monic()


def test_laurent_basics():
    v = L.monomial(1)
    assert (v + 1) * (v - 1) == v ** 2 - 1
    assert L.parse("v^-2 + 3 + v^5").low == -2
    assert L.parse("1 - v + v^2").to_string() == "1 - v + v^2"
    assert (v ** -3).shift(3) == 1
    assert L.parse("1 + v^2").subs_power(3) == L.parse("1 + v^6")
    assert L.parse("v^-1 + 2*v").bar() == L.parse("v + 2*v^-1")
    assert L.parse("2 + 3*v").evaluate(Fraction(1, 2)) == Fraction(7, 2)
    assert L.parse("1 + v + v^2").divides(L.parse("1 - v^3")) is True
    assert L.parse("1 - v^3").divides(L.parse("1 + v + v^2")) is False


@given(st.dictionaries(st.integers(-8, 8), st.integers(-9, 9), max_size=6),
       st.dictionaries(st.integers(-8, 8), st.integers(-9, 9), max_size=6))
def test_laurent_ring_laws(a, b):
    A, B = L.from_dict(a), L.from_dict(b)
    assert A * B == B * A
    assert (A + B) - B == A
    assert L.parse(A.to_string()) == A
    assert (A * B).value_at_one() == A.value_at_one() * B.value_at_one()


def test_parse_terms_whitespace():
    assert parse_terms("1/2*z^3 -  z + 2", "z") == [(Fraction(1, 2), 3), (Fraction(-1), 1), (Fraction(2), 0)]


def test_gcd_normalized():
    assert gcd(L.parse("-v^2 + v^4"), L.parse("v^3 - v")) == L.parse("-1 + v^2")


@pytest.mark.parametrize("n", list(range(1, 80)) + [105, 210, 385])
def test_cyclotomic_matches_sympy(n):
    assert cyclotomic_polynomial(n).coeffs == from_sym(sympy.cyclotomic_poly(n, x))


def test_cyclotomic_examples():
    assert cyclotomic_polynomial(6) == L.parse("v^2 - v + 1")
    assert cyclotomic_polynomial(30) == L.parse("v^8 + v^7 - v^5 - v^4 - v^3 + v + 1")
    with pytest.raises(ValueError):
        cyclotomic_polynomial(0)


@pytest.mark.parametrize("n", [2, 12, 30, 97, 360, 1001, 4620])
def test_number_theory_against_sympy(n):
    assert factorize(n) == sorted(sympy.factorint(n).items())
    assert radical(n) == sympy.prod(sympy.primefactors(n))
    assert divisors(n) == sympy.divisors(n)
    assert euler_phi(n) == sympy.totient(n)


def test_q_numbers():
    assert q_integer(3) == L.parse("1 + v + v^2")
    assert quantum_binomial(4, 2) == L.parse("1 + v + 2*v^2 + v^3 + v^4")
    assert string_quotient(6, 2) == L.parse("1 + v^2 + v^4")
    with pytest.raises(ValueError):
        quantum_binomial(2, 3)


@given(st.integers(0, 12), st.integers(0, 12))
def test_quantum_binomial_pascal(a, b):
    if b > a or a == 0 or b == 0 or b == a:
        return
    v = L.monomial(1)
    assert quantum_binomial(a, b) == quantum_binomial(a - 1, b - 1) + v ** b * quantum_binomial(a - 1, b)


def test_quantum_binomial_vanishes_at_root_of_unity():
    F = cyclotomic_field(5)
    z = F.zeta
    for b in range(1, 5):
        assert quantum_binomial(5, b).evaluate(z) == F.zero


@pytest.mark.parametrize("n", [2, 6, 12, 30, 210, 720, 2310])
def test_identities_report(n):
    rep = verify_cyclotomic_identities(n)
    assert rep.passed, str(rep)


def test_field_arithmetic():
    F = cyclotomic_field(12)
    z = F.zeta
    assert z ** 12 == F.one and z ** 6 == -F.one
    assert is_primitive_root(z, 12)
    a = F.parse("1/2*z^3 - 1")
    assert a * a.inverse() == F.one
    assert F.parse(str(a)) == a
    assert (z ** -1) * z == F.one


@settings(max_examples=40)
@given(st.integers(0, 10**6), st.sampled_from([3, 4, 6, 12, 15, 36]))
def test_field_inverse_random(seed, N):
    F = cyclotomic_field(N)
    a = F.random_element(random.Random(seed))
    if a:
        assert a * a.inverse() == F.one
        assert (a * a) / a == a


def test_field_against_sympy_minimal_polynomial():
    F = cyclotomic_field(9)
    # z + z^-1 generates the real subfield, minimal polynomial x^3 - 3x + 1
    w = F.zeta + F.zeta ** -1
    assert w ** 3 - w * F.from_int(3) + F.one == F.zero
    assert sympy.minimal_polynomial(2 * sympy.cos(2 * sympy.pi / 9), x) == x**3 - 3*x + 1


def test_prime_field():
    F = make_field("fp:37", 6)
    assert isinstance(F, PrimeField)
    assert F.zeta ** 6 == F.one and F.zeta ** 3 != F.one and F.zeta ** 2 != F.one
    with pytest.raises(FieldError, match="N = 6"):
        make_field("fp:5", 6)
    with pytest.raises(FieldError):
        make_field("r", 6)
