"""Integer Laurent polynomials in one variable ``v``."""
from __future__ import annotations

import re
from functools import reduce

from . import poly as P


class LaurentPolynomial:
    """An element of Z[v, v^-1].

    Stored densely as ``v^low * (c0 + c1 v + ...)`` with nonzero end
    coefficients; the zero polynomial has ``low == 0`` and no coefficients.

    >>> v = LaurentPolynomial.monomial(1)
    >>> (v + 1) * (v - 1)
    LaurentPolynomial('-1 + v^2')
    >>> LaurentPolynomial.parse('v^-2 + 3 + v^5').low
    -2
    """

    __slots__ = ("low", "coeffs", "_hash")

    def __init__(self, low: int = 0, coeffs=()):
        coeffs = P.trim(coeffs)
        start = 0
        while start < len(coeffs) and coeffs[start] == 0:
            start += 1
        if start == len(coeffs):
            self.low, self.coeffs = 0, ()
        else:
            self.low, self.coeffs = low + start, tuple(coeffs[start:])
        self._hash = None

    # construction -----------------------------------------------------------

    @classmethod
    def from_dict(cls, terms) -> LaurentPolynomial:
        terms = {e: c for e, c in dict(terms).items() if c}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls(lo, [terms.get(e, 0) for e in range(lo, hi + 1)])

    @classmethod
    def monomial(cls, exponent: int, coefficient: int = 1) -> LaurentPolynomial:
        return cls(exponent, (coefficient,))

    @classmethod
    def constant(cls, c: int) -> LaurentPolynomial:
        return cls(0, (c,))

    @classmethod
    def from_poly(cls, coeffs, low: int = 0) -> LaurentPolynomial:
        return cls(low, coeffs)

    # inspection -------------------------------------------------------------

    @property
    def high(self) -> int:
        """Largest exponent with a nonzero coefficient (``low - 1`` for zero)."""
        return self.low + len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def coefficients(self) -> dict[int, int]:
        return {self.low + i: c for i, c in enumerate(self.coeffs) if c}

    def items(self):
        return sorted(self.coefficients().items())

    def __getitem__(self, exponent: int) -> int:
        i = exponent - self.low
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def leading_coefficient(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def value_at_one(self) -> int:
        return sum(self.coeffs)

    def is_polynomial(self) -> bool:
        return self.low >= 0 or not self.coeffs

    # arithmetic -------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, LaurentPolynomial):
            return other
        if isinstance(other, int):
            return LaurentPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs:
            return other
        if not other.coeffs:
            return self
        lo = min(self.low, other.low)
        a = (0,) * (self.low - lo) + self.coeffs
        b = (0,) * (other.low - lo) + other.coeffs
        return LaurentPolynomial(lo, P.add(a, b))

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.low, P.neg(self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return LaurentPolynomial(self.low + other.low, P.mul(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            if len(self.coeffs) == 1 and self.coeffs[0] in (1, -1):
                return LaurentPolynomial(self.low * e, (self.coeffs[0] ** e,))
            raise ValueError("only units ±v^k have negative powers")
        result = LaurentPolynomial.constant(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def shift(self, k: int) -> LaurentPolynomial:
        """Multiply by v^k."""
        return LaurentPolynomial(self.low + k, self.coeffs) if self.coeffs else self

    def subs_power(self, k: int) -> LaurentPolynomial:
        """Substitute v -> v^k (k may be negative)."""
        if not self.coeffs:
            return self
        if k == 0:
            return LaurentPolynomial.constant(sum(self.coeffs))
        if k > 0:
            return LaurentPolynomial(self.low * k, P.compose_power(self.coeffs, k))
        return LaurentPolynomial(self.high * k, P.compose_power(self.coeffs[::-1], -k))

    def bar(self) -> LaurentPolynomial:
        """The involution v -> v^-1."""
        return self.subs_power(-1)

    def normalized(self) -> LaurentPolynomial:
        """Canonical associate: lowest exponent 0, primitive, positive leading coefficient."""
        return LaurentPolynomial(0, P.primitive(self.coeffs))

    def divides(self, other: LaurentPolynomial) -> bool:
        """Whether self divides other in Z[v, v^-1]."""
        return other.exact_div(self, strict=False) is not None

    def exact_div(self, divisor: LaurentPolynomial, strict: bool = True):
        """Quotient in Z[v, v^-1]; raises (or returns None) when not divisible."""
        if not divisor.coeffs:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        q = P.divexact(self.coeffs, divisor.coeffs)
        if q is None:
            if strict:
                raise ArithmeticError(f"{divisor} does not divide {self}")
            return None
        return LaurentPolynomial(self.low - divisor.low, q)

    def __floordiv__(self, other):
        return self.exact_div(self._coerce(other))

    def evaluate(self, x):
        """Horner evaluation at a ring element (negative exponents need ``x`` invertible)."""
        if not self.coeffs:
            return x * 0
        acc = None
        for c in reversed(self.coeffs):
            acc = c + (acc * x if acc is not None else 0 * x)
        if self.low:
            acc = acc * (x ** self.low)
        return acc

    __call__ = evaluate

    # comparison -------------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.low == other.low and self.coeffs == other.coeffs

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.low, self.coeffs))
        return self._hash

    # text -------------------------------------------------------------------

    def to_string(self, var: str = "v") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.items():
            mono = "" if e == 0 else var if e == 1 else f"{var}^{e}"
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"LaurentPolynomial('{self}')"

    @classmethod
    def parse(cls, text: str, var: str = "v") -> LaurentPolynomial:
        terms = {}
        for coeff, exp in parse_terms(text, var):
            if coeff.denominator != 1:
                raise ValueError(f"non-integer coefficient in {text!r}")
            terms[exp] = terms.get(exp, 0) + int(coeff)
        return cls.from_dict(terms)


_TERM = re.compile(r"([+-]?)([0-9]+(?:/[0-9]+)?)?(\*)?(?:([A-Za-z_]\w*)(?:\^([+-]?[0-9]+))?)?")


def parse_terms(text: str, var: str):
    """Split ``text`` into (Fraction coefficient, exponent) pairs in ``var``.

    Whitespace is ignored; accepts forms like ``-3*v^-2``, ``v``, ``1/2*z^3``.
    """
    from fractions import Fraction

    s = re.sub(r"\s+", "", text)
    if s in ("", "0"):
        return []
    out = []
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at position {pos}")
        sign, num, star, sym, exp = m.groups()
        if pos > 0 and not sign:
            raise ValueError(f"missing operator in {text!r} at position {pos}")
        if num is None and sym is None:
            raise ValueError(f"empty term in {text!r}")
        if star and (num is None or sym is None):
            raise ValueError(f"dangling '*' in {text!r}")
        if sym is not None and sym != var:
            raise ValueError(f"unknown symbol {sym!r} in {text!r} (expected {var!r})")
        coeff = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            coeff = -coeff
        e = 0 if sym is None else (int(exp) if exp is not None else 1)
        out.append((coeff, e))
        pos = m.end()
    return out


def gcd(*polys: LaurentPolynomial) -> LaurentPolynomial:
    """Normalized gcd over Q[v, v^-1]: lowest exponent 0, primitive, positive lead."""
    coeffs = reduce(P.gcd_poly, (p.coeffs for p in polys), ())
    return LaurentPolynomial(0, coeffs)


nu = LaurentPolynomial.monomial(1)
ONE = LaurentPolynomial.constant(1)
ZERO = LaurentPolynomial()
