"""Cyclotomic polynomials, unbalanced q-integers and q-binomials."""
from __future__ import annotations

import threading
from functools import lru_cache
from math import prod

from ..report import Report
from . import poly as P
from .laurent import LaurentPolynomial, gcd


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization by trial division, as sorted (prime, exponent) pairs."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            a = 0
            while n % p == 0:
                n //= p
                a += 1
            out.append((p, a))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def radical(n: int) -> int:
    return prod(p for p, _ in factorize(n))


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, a in factorize(n):
        divs = [d * p**e for d in divs for e in range(a + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    return prod((p - 1) * p ** (a - 1) for p, a in factorize(n))


_cyclo_cache: dict[int, tuple] = {}
_cyclo_lock = threading.Lock()


def _cyclotomic_coeffs(n: int) -> tuple:
    cached = _cyclo_cache.get(n)
    if cached is not None:
        return cached
    # nu^n - 1 divided by every Phi_d with d a proper divisor of n
    quotient = (-1,) + (0,) * (n - 1) + (1,)
    for d in divisors(n)[:-1]:
        quotient = P.divexact(quotient, _cyclotomic_coeffs(d))
        assert quotient is not None
    with _cyclo_lock:
        _cyclo_cache.setdefault(n, quotient)
    return quotient


def cyclotomic_polynomial(n: int) -> LaurentPolynomial:
    """The n-th cyclotomic polynomial Phi_n(v).

    >>> str(cyclotomic_polynomial(6))
    '1 - v + v^2'
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"cyclotomic_polynomial needs n >= 1, got {n!r}")
    return LaurentPolynomial(0, _cyclotomic_coeffs(n))


def q_integer(a: int) -> LaurentPolynomial:
    """[a] = 1 + v + ... + v^(a-1)."""
    if a < 0:
        raise ValueError(f"q_integer needs a >= 0, got {a}")
    return LaurentPolynomial(0, (1,) * a)


def q_factorial(a: int) -> LaurentPolynomial:
    return LaurentPolynomial(0, P.product(q_integer(j).coeffs for j in range(1, a + 1)))


@lru_cache(maxsize=4096)
def _qbinom(a: int, b: int) -> tuple:
    if b == 0 or b == a:
        return (1,)
    left = _qbinom(a - 1, b - 1)
    right = (0,) * b + _qbinom(a - 1, b)
    return P.add(left, right)


def quantum_binomial(a: int, b: int) -> LaurentPolynomial:
    """Gaussian binomial via [a,b] = [a-1,b-1] + v^b [a-1,b].

    >>> str(quantum_binomial(4, 2))
    '1 + v + 2*v^2 + v^3 + v^4'
    """
    if a < 0 or b < 0:
        raise ValueError("quantum_binomial needs nonnegative arguments")
    if b > a:
        raise ValueError(f"quantum_binomial needs b <= a, got a={a}, b={b}")
    return LaurentPolynomial(0, _qbinom(a, b))


def string_quotient(n: int, nk: int) -> LaurentPolynomial:
    """[n]/[nk] = 1 + v^nk + ... + v^(n - nk), for nk dividing n."""
    if n % nk:
        raise ValueError(f"{nk} does not divide {n}")
    coeffs = [0] * (n - nk + 1)
    coeffs[::nk] = [1] * (n // nk)
    return LaurentPolynomial(0, coeffs)


def verify_cyclotomic_identities(n: int) -> Report:
    """Check the three gcd/substitution identities relating Phi_n, Phi_m and [m]/[m/p]."""
    if n < 2:
        raise ValueError("identities need n >= 2")
    primes = [p for p, _ in factorize(n)]
    m = prod(primes)
    report = Report(f"cyclotomic identities n={n}")
    phi_m = cyclotomic_polynomial(m)
    quotients = [string_quotient(m, m // p) for p in primes]
    g = gcd(*quotients)
    report.add("gcd_of_string_quotients", g == phi_m, f"gcd = {g}" if g != phi_m else "")
    bad = [p for p, qt in zip(primes, quotients)
           if cyclotomic_polynomial(p).subs_power(m // p) != qt]
    report.add("prime_substitution", not bad, f"fails for p={bad}" if bad else "")
    lhs = cyclotomic_polynomial(n)
    report.add("radical_substitution", lhs == phi_m.subs_power(n // m))
    return report
