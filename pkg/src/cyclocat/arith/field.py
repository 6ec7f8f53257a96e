"""Exact fields containing a primitive N-th root of unity.

``CyclotomicField(N)`` is Q(z) with z a root of Phi_N; elements are integer
coordinate vectors over a common positive denominator, reduced modulo Phi_N.
``PrimeField(p, N)`` is F_p with a chosen primitive N-th root, for fast
randomized runs.  Both expose the same small interface: ``zero``, ``one``,
``zeta``, ``zeta_power(e)``, ``from_int``, ``from_fraction`` and ``parse``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from .cyclotomic import cyclotomic_polynomial, factorize
from .laurent import LaurentPolynomial, parse_terms


class FieldError(ValueError):
    pass


class CyclotomicField:
    """Q(zeta_N)."""

    def __init__(self, N: int):
        if N < 1:
            raise FieldError(f"conductor must be positive, got {N}")
        self.N = N
        self.modulus = cyclotomic_polynomial(N).coeffs
        self.degree = len(self.modulus) - 1
        phi = self.degree
        # z^e reduced mod Phi_N for every residue e, stored sparsely
        table = []
        vec = [0] * phi
        vec[0] = 1
        for _ in range(N):
            table.append(tuple(vec))
            top = vec[-1]
            vec = [0] + vec[:-1]
            if top:
                for i in range(phi):
                    vec[i] -= top * self.modulus[i]
        self._powers = table
        self._sparse = [tuple((i, c) for i, c in enumerate(v) if c) for v in table]
        self.zero = CyclotomicNumber(self, (0,) * phi, 1)
        self.one = self.from_int(1)
        self.zeta = self.zeta_power(1)
        self.characteristic = 0
        self.name = "q"

    def __repr__(self):
        return f"CyclotomicField({self.N})"

    def __eq__(self, other):
        return isinstance(other, CyclotomicField) and other.N == self.N

    def __hash__(self):
        return hash(("Q", self.N))

    def __reduce__(self):
        return (cyclotomic_field, (self.N,))

    def from_int(self, c: int) -> CyclotomicNumber:
        return CyclotomicNumber(self, (c,) + (0,) * (self.degree - 1), 1)

    def from_fraction(self, c) -> CyclotomicNumber:
        c = Fraction(c)
        return CyclotomicNumber._make(self, [c.numerator] + [0] * (self.degree - 1), c.denominator)

    def zeta_power(self, e: int) -> CyclotomicNumber:
        return self._zeta_cache(e % self.N)

    @lru_cache(maxsize=None)
    def _zeta_cache(self, e: int) -> CyclotomicNumber:
        return CyclotomicNumber(self, self._powers[e], 1)

    def coerce(self, x) -> CyclotomicNumber:
        if isinstance(x, CyclotomicNumber):
            if x.field is not self and x.field != self:
                raise FieldError("elements from different fields")
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def parse(self, text: str) -> CyclotomicNumber:
        """Parse a polynomial in ``z`` such as ``1/2*z^3 - 1``."""
        acc = [Fraction(0)] * self.degree
        for coeff, e in parse_terms(str(text), "z"):
            for i, r in self._sparse[e % self.N]:
                acc[i] += coeff * r
        den = 1
        for c in acc:
            den = den * c.denominator // gcd(den, c.denominator)
        return CyclotomicNumber._make(self, [int(c * den) for c in acc], den)

    def random_element(self, rng, spread: int = 3) -> CyclotomicNumber:
        coords = [rng.randint(-spread, spread) for _ in range(self.degree)]
        return CyclotomicNumber._make(self, coords, 1)


@lru_cache(maxsize=None)
def cyclotomic_field(N: int) -> CyclotomicField:
    return CyclotomicField(N)


class CyclotomicNumber:
    """An element of Q(zeta_N): ``sum(num[i] z^i) / den`` with ``den > 0`` and lowest terms.

    >>> F = cyclotomic_field(6)
    >>> z = F.zeta
    >>> z**3 == -F.one, z + z**-1 == F.one
    (True, True)
    >>> str(F.parse('1/2*z^3 - 1'))
    '-3/2'
    """

    __slots__ = ("field", "num", "den")

    def __init__(self, field: CyclotomicField, num: tuple, den: int):
        self.field = field
        self.num = num
        self.den = den

    @staticmethod
    def _make(field, num, den) -> CyclotomicNumber:
        if den < 0:
            num, den = [-c for c in num], -den
        if den != 1:
            g = den
            for c in num:
                if c:
                    g = gcd(g, c)
                    if g == 1:
                        break
            if g == den and not any(num):
                den = 1
            elif g > 1:
                num = [c // g for c in num]
                den //= g
        return CyclotomicNumber(field, tuple(num), den)

    # predicates ---------------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.num)

    def __bool__(self):
        return any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def __eq__(self, other):
        if isinstance(other, CyclotomicNumber):
            return self.num == other.num and self.den == other.den and self.field.N == other.field.N
        if isinstance(other, (int, Fraction)):
            return self == self.field.coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    # arithmetic -----------------------------------------------------------------

    def _other(self, other):
        if isinstance(other, CyclotomicNumber):
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.coerce(other)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        if self.den == other.den:
            return CyclotomicNumber._make(self.field, [a + b for a, b in zip(self.num, other.num)], self.den)
        da, db = self.den, other.den
        return CyclotomicNumber._make(
            self.field, [a * db + b * da for a, b in zip(self.num, other.num)], da * db)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.field, tuple(-a for a in self.num), self.den)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        field = self.field
        a, b = self.num, other.num
        phi = field.degree
        if not any(a[1:]):
            c = a[0]
            return CyclotomicNumber._make(field, [c * y for y in b], self.den * other.den)
        if not any(b[1:]):
            c = b[0]
            return CyclotomicNumber._make(field, [c * x for x in a], self.den * other.den)
        out = [0] * phi
        sparse = field._sparse
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y:
                    continue
                e = i + j
                if e < phi:
                    out[e] += x * y
                else:
                    xy = x * y
                    for t, r in sparse[e % field.N]:
                        out[t] += xy * r
        return CyclotomicNumber._make(field, out, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> CyclotomicNumber:
        if not any(self.num):
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        field = self.field
        if self.is_rational():
            c = Fraction(self.den, self.num[0])
            return field.from_fraction(c)
        s = _poly_inverse_mod([Fraction(c) for c in self.num], field.modulus)
        den = 1
        for c in s:
            den = den * c.denominator // gcd(den, c.denominator)
        coords = [int(c * den) * self.den for c in s]
        coords += [0] * (field.degree - len(coords))
        return CyclotomicNumber._make(field, coords, den)

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.field.one
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self.num[0], self.den)

    # text -----------------------------------------------------------------------

    def __str__(self):
        terms = []
        for e in range(len(self.num) - 1, -1, -1):
            c = Fraction(self.num[e], self.den)
            if not c:
                continue
            mag = abs(c)
            mono = "" if e == 0 else "z" if e == 1 else f"z^{e}"
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if terms:
                terms.append((" - " if c < 0 else " + ") + body)
            else:
                terms.append(("-" if c < 0 else "") + body)
        return "".join(terms) or "0"

    def __repr__(self):
        return f"CyclotomicNumber({self.field.N}, '{self}')"


def _poly_inverse_mod(a: list, modulus) -> list:
    """Extended Euclid over Q: s with a*s = 1 mod ``modulus``."""

    def strip(p):
        while p and p[-1] == 0:
            p.pop()
        return p

    def divmod_q(x, y):
        x = list(x)
        q = [Fraction(0)] * max(len(x) - len(y) + 1, 1)
        while len(strip(x)) >= len(y):
            shift = len(x) - len(y)
            c = x[-1] / y[-1]
            q[shift] = c
            for i, yc in enumerate(y):
                x[shift + i] -= c * yc
        return q, x

    def sub_mul(s0, q, s1):
        out = list(s0) + [Fraction(0)] * max(0, len(q) + len(s1) - len(s0))
        for i, qc in enumerate(q):
            if qc:
                for j, sc in enumerate(s1):
                    out[i + j] -= qc * sc
        return strip(out)

    r0, r1 = [Fraction(c) for c in modulus], strip(list(a))
    s0, s1 = [], [Fraction(1)]
    while len(r1) > 1:
        q, r = divmod_q(r0, r1)
        r0, r1 = r1, strip(r)
        s0, s1 = s1, sub_mul(s0, q, s1)
        if not r1:
            raise ZeroDivisionError("element is not invertible")
    c = r1[0]
    return [x / c for x in s1]


class PrimeField:
    """F_p with a primitive N-th root of unity; requires p = 1 mod N."""

    def __init__(self, p: int, N: int):
        if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise FieldError(f"{p} is not prime")
        if (p - 1) % N:
            raise FieldError(f"fp:{p} needs p = 1 mod N, but N = {N} and p mod N = {p % N}")
        self.p = p
        self.N = N
        self.characteristic = p
        self.degree = 1
        self.name = f"fp:{p}"
        g = primitive_root(p)
        self._root = pow(g, (p - 1) // N, p)
        self.zero = FpNumber(self, 0)
        self.one = FpNumber(self, 1 % p)
        self.zeta = FpNumber(self, self._root)

    def __repr__(self):
        return f"PrimeField({self.p}, {self.N})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and (other.p, other.N) == (self.p, self.N)

    def __hash__(self):
        return hash(("F", self.p, self.N))

    def from_int(self, c: int) -> FpNumber:
        return FpNumber(self, c % self.p)

    def from_fraction(self, c) -> FpNumber:
        c = Fraction(c)
        return FpNumber(self, c.numerator * pow(c.denominator, -1, self.p) % self.p)

    def zeta_power(self, e: int) -> FpNumber:
        return FpNumber(self, pow(self._root, e % self.N, self.p))

    def coerce(self, x) -> FpNumber:
        if isinstance(x, FpNumber):
            return x
        if isinstance(x, int):
            return self.from_int(x)
        if isinstance(x, Fraction):
            return self.from_fraction(x)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot coerce {x!r} into {self}")

    def parse(self, text: str) -> FpNumber:
        acc = self.zero
        for coeff, e in parse_terms(str(text), "z"):
            acc = acc + self.from_fraction(coeff) * self.zeta_power(e)
        return acc

    def random_element(self, rng, spread: int = 3) -> FpNumber:
        return FpNumber(self, rng.randrange(self.p))


class FpNumber:
    __slots__ = ("field", "value")

    def __init__(self, field: PrimeField, value: int):
        self.field = field
        self.value = value

    def is_zero(self) -> bool:
        return self.value == 0

    def __bool__(self):
        return self.value != 0

    def _other(self, other):
        if isinstance(other, FpNumber):
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        if isinstance(other, Fraction):
            return self.field.from_fraction(other).value
        return NotImplemented

    def __eq__(self, other):
        v = self._other(other)
        return v == self.value if v is not NotImplemented else v

    def __hash__(self):
        return hash(self.value)

    def __add__(self, other):
        v = self._other(other)
        return v if v is NotImplemented else FpNumber(self.field, (self.value + v) % self.field.p)

    __radd__ = __add__

    def __neg__(self):
        return FpNumber(self.field, -self.value % self.field.p)

    def __sub__(self, other):
        v = self._other(other)
        return v if v is NotImplemented else FpNumber(self.field, (self.value - v) % self.field.p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        v = self._other(other)
        return v if v is NotImplemented else FpNumber(self.field, self.value * v % self.field.p)

    __rmul__ = __mul__

    def inverse(self) -> FpNumber:
        if not self.value:
            raise ZeroDivisionError("inverse of zero in prime field")
        return FpNumber(self.field, pow(self.value, -1, self.field.p))

    def __truediv__(self, other):
        other = self.field.coerce(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return FpNumber(self.field, pow(self.value, e, self.field.p))

    def __str__(self):
        return str(self.value)

    def __repr__(self):
        return f"FpNumber({self.field.p}, {self.value})"


def primitive_root(p: int) -> int:
    qs = [q for q, _ in factorize(p - 1)] if p > 2 else []
    for g in range(1, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in qs):
            return g
    raise FieldError(f"no primitive root mod {p}")


def make_field(choice: str, N: int):
    """Field from a command-line choice: ``q`` (default) or ``fp:<prime>``."""
    choice = (choice or "q").strip()
    if choice in ("q", "Q", "cyclotomic"):
        return cyclotomic_field(N)
    if choice.startswith("fp:"):
        try:
            p = int(choice[3:])
        except ValueError as exc:
            raise FieldError(f"bad prime in field choice {choice!r}") from exc
        return PrimeField(p, N)
    raise FieldError(f"unknown field choice {choice!r}; use 'q' or 'fp:<prime>'")


def root_of_unity(N: int) -> CyclotomicNumber:
    """A primitive N-th root of unity z in Q(z), with minimal polynomial Phi_N."""
    return cyclotomic_field(N).zeta


def is_primitive_root(x, N: int) -> bool:
    one = x.field.one
    if x ** N != one:
        return False
    return all(x ** (N // p) != one for p, _ in factorize(N)) if N > 1 else True


def evaluate(p: LaurentPolynomial, x):
    """Exact Horner evaluation of a Laurent polynomial at a field element."""
    return p.evaluate(x)
