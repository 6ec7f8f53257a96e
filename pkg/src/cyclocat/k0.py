"""Grothendieck-group classes of graded modules.

Classes live in Z[v, v^-1] modulo either the product of the string
polynomials [n]/[n_k] (the stable module category, ring "stmod") or the
cyclotomic polynomial Phi_n (the quotient category, ring "on").  A class is
stored as its canonical representative: the remainder of degree below the
modulus, after negative powers of v are traded for powers of v^-1 mod the
modulus.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from .arith import poly as P
from .arith.cyclotomic import cyclotomic_polynomial, factorize, string_quotient
from .arith.laurent import LaurentPolynomial, gcd

RINGS = ("stmod", "on")


class K0Error(ValueError):
    pass


class K0Ring:
    """Z[v, v^-1] / (modulus); the stmod modulus is kept as its factors."""

    def __init__(self, n: int, kind: str):
        if kind not in RINGS:
            raise K0Error(f"unknown ring {kind!r}; expected one of {RINGS}")
        if n < 2:
            raise K0Error("n must be at least 2")
        self.n = n
        self.kind = kind
        if kind == "on":
            self.factors = (cyclotomic_polynomial(n),)
        else:
            self.factors = tuple(string_quotient(n, n // p) for p, _ in factorize(n))

    def __eq__(self, other):
        return isinstance(other, K0Ring) and (self.n, self.kind) == (other.n, other.kind)

    def __hash__(self):
        return hash((self.n, self.kind))

    def __repr__(self):
        return f"K0Ring(n={self.n}, {self.kind})"

    @cached_property
    def modulus(self) -> LaurentPolynomial:
        return LaurentPolynomial(0, P.product([f.coeffs for f in self.factors]))

    @property
    def degree(self) -> int:
        return sum(len(f.coeffs) - 1 for f in self.factors)

    @cached_property
    def _v_inverse(self) -> tuple:
        # modulus = c0 + v R(v) with c0 = +-1, so v^-1 = -c0 R(v)
        m = self.modulus.coeffs
        c0 = m[0]
        if c0 not in (1, -1):
            raise K0Error("modulus must have unit constant term")
        return self._mod(P.scale(m[1:], -c0))

    def _mod(self, coeffs) -> tuple:
        return P.divmod_monic(P.trim(coeffs), self.modulus.coeffs)[1]

    def _mulmod(self, a, b) -> tuple:
        return self._mod(P.mul(a, b))

    def _powmod(self, base, e: int) -> tuple:
        out = (1,)
        while e:
            if e & 1:
                out = self._mulmod(out, base)
            base = self._mulmod(base, base)
            e >>= 1
        return out

    def reduce(self, f: LaurentPolynomial) -> LaurentPolynomial:
        if not f:
            return LaurentPolynomial()
        body = f.coeffs
        if f.low >= 0:
            rep = self._mod((0,) * f.low + body)
        else:
            rep = self._mulmod(self._mod(body), self._powmod(self._v_inverse, -f.low))
        return LaurentPolynomial(0, rep)

    def element(self, f) -> K0Class:
        if isinstance(f, int):
            f = LaurentPolynomial.constant(f)
        return K0Class(self, self.reduce(f))

    def zero(self) -> K0Class:
        return K0Class(self, LaurentPolynomial())

    def one(self) -> K0Class:
        return self.element(1)


@lru_cache(maxsize=None)
def k0_ring(n: int, kind: str = "on") -> K0Ring:
    return K0Ring(n, kind)


def _ring(ring, n: int) -> K0Ring:
    if isinstance(ring, K0Ring):
        if ring.n != n:
            raise K0Error(f"ring is for n={ring.n}, module has n={n}")
        return ring
    return k0_ring(n, ring)


@dataclass(frozen=True)
class K0Class:
    ring: K0Ring
    rep: LaurentPolynomial

    def _same(self, other) -> K0Class:
        if isinstance(other, int):
            return self.ring.element(other)
        if not isinstance(other, K0Class):
            raise TypeError(f"cannot combine a K0 class with {type(other).__name__}")
        if other.ring != self.ring:
            raise K0Error(f"ring mismatch: {self.ring} vs {other.ring}")
        return other

    def __add__(self, other):
        return self.ring.element(self.rep + self._same(other).rep)

    __radd__ = __add__

    def __sub__(self, other):
        return self.ring.element(self.rep - self._same(other).rep)

    def __rsub__(self, other):
        return self._same(other) - self

    def __neg__(self):
        return self.ring.element(-self.rep)

    def __mul__(self, other):
        return self.ring.element(self.rep * self._same(other).rep)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.element(other)
        if not isinstance(other, K0Class):
            return NotImplemented
        return self.ring == other.ring and self.rep == other.rep

    def __hash__(self):
        return hash((self.ring, self.rep))

    def is_zero(self) -> bool:
        return not self.rep

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        return self.rep.to_string()

    def to_dict(self) -> dict:
        return {"n": self.ring.n, "ring": self.ring.kind, "rep": str(self)}


def class_of(M, ring="on") -> K0Class:
    R = _ring(ring, M.structure.n)
    return R.element(M.graded_dimension())


def conjugate(c: K0Class) -> K0Class:
    """v -> v^-1; both moduli are palindromic up to a power of v, so this is well defined."""
    return c.ring.element(c.rep.bar())


def norm_check(M, ring="on") -> bool:
    from .gradedmod import internal_hom
    c = class_of(M, ring)
    return class_of(internal_hom(M, M), ring) == conjugate(c) * c


def ideal_generated_by_strings(n: int, check: bool = True) -> LaurentPolynomial:
    """gcd over Z[v] of the classes [n]/[n_k] of the V_k, normalized."""
    if n < 2:
        raise K0Error("n must be at least 2")
    g = gcd(*(string_quotient(n, n // p) for p, _ in factorize(n)))
    if check and g != cyclotomic_polynomial(n):
        raise ArithmeticError(f"gcd of string classes for n={n} is {g}, not Phi_{n}")
    return g


def triangle_classes(f) -> dict:
    """Classes in the stable ring of N, the cone C_f and M[1] for f: M -> N."""
    from .stable import cone, shift_plus
    if f.degree != 0 or not f.is_intertwiner():
        raise K0Error("triangle relation needs a degree-0 intertwiner")
    M, N = f.source, f.target
    R = k0_ring(M.structure.n, "stmod")
    return {"N": class_of(N, R), "cone": class_of(cone(f).module, R),
            "shift": class_of(shift_plus(M), R)}


def triangle_relation_check(f) -> bool:
    """[N] - [C_f] + [M[1]] = 0 in K0 of the stable category."""
    c = triangle_classes(f)
    return (c["N"] - c["cone"] + c["shift"]).is_zero()


def member_dimension_gcd(modules) -> LaurentPolynomial:
    """Running gcd of graded dimensions, normalized to lowest exponent 0."""
    out = LaurentPolynomial()
    for M in modules:
        d = M.graded_dimension()
        if d:
            out = gcd(out, d)
    return out
