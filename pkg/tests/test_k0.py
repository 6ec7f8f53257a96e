import random

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from cyclocat.arith.cyclotomic import cyclotomic_polynomial
from cyclocat.arith.laurent import LaurentPolynomial as L
from cyclocat.gradedmod import (dual, free, random_intertwiner, random_module, shift, tensor,
                                trivial, v_k)
from cyclocat.hopf import build_structure
from cyclocat.k0 import (K0Error, class_of, conjugate, ideal_generated_by_strings, k0_ring,
                         member_dimension_gcd, norm_check, triangle_relation_check)
from cyclocat.stable import shift_plus

v = sympy.symbols("v")


def to_sym(f: L):
    return sum(c * v**(f.low + i) for i, c in enumerate(f.coeffs))


def oracle_modulus(n, kind):
    if kind == "on":
        return sympy.cyclotomic_poly(n, v)
    return sympy.prod([sympy.cancel((1 - v**n) / (1 - v**(n // p))) for p in sympy.primefactors(n)])


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.integers(-30, 30), st.integers(-5, 5), max_size=6),
       st.sampled_from([2, 6, 10, 12, 30]), st.sampled_from(["on", "stmod"]))
def test_reduction_against_sympy(terms, n, kind):
    R = k0_ring(n, kind)
    f = L.from_dict(terms)
    rep = R.element(f).rep
    mod = sympy.Poly(oracle_modulus(n, kind), v)
    assert rep.low >= 0 and len(rep.coeffs) <= mod.degree()
    # rep - f vanishes modulo the modulus once denominators are cleared
    diff = sympy.expand((to_sym(rep) - to_sym(f)) * v**40)
    assert sympy.Poly(diff, v).rem(mod).is_zero


@pytest.mark.parametrize("n", [2, 6, 12, 30])
def test_moduli(n):
    assert k0_ring(n, "on").modulus == cyclotomic_polynomial(n)
    stmod = k0_ring(n, "stmod")
    assert sympy.expand(to_sym(stmod.modulus) - oracle_modulus(n, "stmod")) == 0
    assert stmod.degree == build_structure(n).ell


def test_trivial_and_free_classes(H6):
    assert class_of(free(H6), "on").is_zero()
    assert class_of(free(H6), "stmod").is_zero()
    assert class_of(trivial(H6, 3), "on") == -1
    for k in (1, 2):
        assert class_of(v_k(H6, k), "on").is_zero()
        assert not class_of(v_k(H6, k), "stmod").is_zero()


def test_shift_multiplies_by_nu_inverse(H6):
    rng = random.Random(0)
    for _ in range(10):
        M = random_module(H6, rng, 6)
        for ring in ("on", "stmod"):
            R = k0_ring(6, ring)
            assert class_of(shift(M, 1), ring) == R.element(L.monomial(-1)) * class_of(M, ring)


def test_shift_plus_class_n6(H6):
    # k[1] = H{ell} / k and the free module has class zero
    k1 = shift_plus(trivial(H6))
    assert class_of(k1, "stmod") == -1


def test_multiplicative_and_additive(H6):
    rng = random.Random(5)
    for _ in range(10):
        M, N = random_module(H6, rng, 4), random_module(H6, rng, 4)
        for ring in ("on", "stmod"):
            assert class_of(tensor(M, N), ring) == class_of(M, ring) * class_of(N, ring)
            assert class_of(dual(M), ring) == conjugate(class_of(M, ring))


def test_norm_and_triangle(H6):
    rng = random.Random(8)
    for _ in range(5):
        M, N = random_module(H6, rng, 4), random_module(H6, rng, 4)
        assert norm_check(M, "on") and norm_check(M, "stmod")
        assert triangle_relation_check(random_intertwiner(M, N, rng))


@pytest.mark.parametrize("n", list(range(2, 61)) + [210, 420])
def test_string_gcd_is_cyclotomic(n):
    assert ideal_generated_by_strings(n) == cyclotomic_polynomial(n)


def test_member_dimension_gcd(H6):
    mods = [v_k(H6, 1), v_k(H6, 2, 3), free(H6)]
    assert member_dimension_gcd(mods) == cyclotomic_polynomial(6)


def test_errors(H6):
    with pytest.raises(K0Error):
        k0_ring(6, "bogus")
    with pytest.raises(K0Error, match="ring mismatch"):
        _ = k0_ring(6, "on").one() + k0_ring(6, "stmod").one()
    with pytest.raises(K0Error):
        class_of(trivial(H6), k0_ring(10, "on"))
