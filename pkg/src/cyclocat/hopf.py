"""The graded algebra H_n = k[d_1..d_t]/(d_k^{p_k}) and its bosonization by the cyclic group C_N.

PBW monomials ``d^a K^i`` are keyed by ``(a, i)`` with ``a`` an exponent tuple
(``0 <= a_k < p_k``) and ``i`` taken mod N.  Elements are dicts from keys to
nonzero field elements.  Tensor-square elements are dicts keyed by pairs of
monomial keys (triples for the cube).
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product as iproduct
from math import prod

from .arith.cyclotomic import factorize, quantum_binomial
from .arith.field import make_field
from .arith.laurent import LaurentPolynomial
from .report import Report


@dataclass(eq=False)
class HnStructure:
    """All constants attached to n: primes, radical, N = n^2/m, degrees n_k, top degree ell."""

    n: int
    field: object = None
    primes: list = dc_field(init=False)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n!r}")
        self.primes = factorize(self.n)
        self.ps = [p for p, _ in self.primes]
        self.t = len(self.ps)
        self.m = prod(self.ps)
        self.N = self.n * self.n // self.m
        self.nk = [self.n // p for p in self.ps]
        self.mk = [self.m // p for p in self.ps]
        self.ell = sum(d * (p - 1) for d, p in zip(self.nk, self.ps))
        if self.field is None or isinstance(self.field, str):
            self.field = make_field(self.field or "q", self.N)
        if self.field.N != self.N:
            raise ValueError(f"field has roots of order {self.field.N}, need N = {self.N}")
        self.zeta = self.field.zeta
        self.xi = self.field.zeta_power(self.n // self.m)
        self.xi_k = [self.field.zeta_power(d) for d in self.nk]
        self.top = tuple(p - 1 for p in self.ps)
        self._binom_cache: dict = {}

    def __repr__(self):
        return f"HnStructure(n={self.n}, field={self.field.name})"

    def q(self, e: int):
        """q^e for the chosen primitive N-th root q."""
        return self.field.zeta_power(e)

    # PBW basis -------------------------------------------------------------------

    @cached_property
    def exponents(self) -> list[tuple]:
        """Exponent vectors of the monomial basis of H_n, lexicographic."""
        return list(iproduct(*(range(p) for p in self.ps)))

    @cached_property
    def exponent_index(self) -> dict:
        return {a: i for i, a in enumerate(self.exponents)}

    @cached_property
    def basis(self) -> list[tuple]:
        """Monomial keys (a, i) of the bosonization."""
        return [(a, i) for a in self.exponents for i in range(self.N)]

    @property
    def dim(self) -> int:
        return len(self.exponents)

    @property
    def bosonization_dim(self) -> int:
        return self.dim * self.N

    def degree(self, a) -> int:
        return sum(x * d for x, d in zip(a, self.nk))

    def unit_vector(self, k: int) -> tuple:
        return tuple(1 if j == k else 0 for j in range(self.t))

    def graded_dimension(self) -> LaurentPolynomial:
        """Graded dimension of H_n read off the monomial basis."""
        terms: dict = {}
        for a in self.exponents:
            e = self.degree(a)
            terms[e] = terms.get(e, 0) + 1
        return LaurentPolynomial.from_dict(terms)

    def graded_dimension_formula(self) -> LaurentPolynomial:
        """prod_k (1 - v^n) / (1 - v^{n_k})."""
        out = LaurentPolynomial.constant(1)
        for d in self.nk:
            num = LaurentPolynomial.from_dict({0: 1, self.n: -1})
            den = LaurentPolynomial.from_dict({0: 1, d: -1})
            out = out * num.exact_div(den)
        return out

    # elements -------------------------------------------------------------------

    def element(self, terms) -> BosonizedElement:
        return BosonizedElement(self, terms)

    def monomial(self, a=None, i: int = 0, coeff=None) -> BosonizedElement:
        a = tuple(a) if a is not None else (0,) * self.t
        if len(a) != self.t or any(x < 0 for x in a):
            raise ValueError(f"bad exponent vector {a}")
        if any(x >= p for x, p in zip(a, self.ps)):
            return self.element({})
        return self.element({(a, i % self.N): self.field.one if coeff is None else coeff})

    def one(self) -> BosonizedElement:
        return self.monomial()

    def K(self, power: int = 1) -> BosonizedElement:
        return self.monomial(None, power)

    def d(self, k: int) -> BosonizedElement:
        """Generator d_k, with k counted from 1."""
        if not 1 <= k <= self.t:
            raise IndexError(f"prime index {k} out of range 1..{self.t}")
        return self.monomial(self.unit_vector(k - 1))

    def braided_integral(self) -> BosonizedElement:
        """Lambda = d_1^{p_1-1} ... d_t^{p_t-1}, homogeneous of degree ell."""
        return self.monomial(self.top)

    def integral(self) -> BosonizedElement:
        """Lambda' = sum_i K^i Lambda, a left integral of the bosonization."""
        return sum((self.K(i) * self.braided_integral() for i in range(self.N)), self.element({}))

    def omega(self) -> BosonizedElement:
        """The pivotal group-like K^{-(n_1 + ... + n_t)}."""
        return self.K(-sum(self.nk))

    # monomial kernels ---------------------------------------------------------------

    def mono_mul(self, x, y):
        """Product of monomial keys: (zeta exponent, key) or None when zero."""
        (a, i), (b, j) = x, y
        c = tuple(u + v for u, v in zip(a, b))
        if any(u >= p for u, p in zip(c, self.ps)):
            return None
        return (i * self.degree(b)) % self.N, (c, (i + j) % self.N)

    def binom(self, k: int, a: int, b: int):
        """[a choose b] evaluated at xi_k^{n_k}, a primitive p_k-th root of unity."""
        key = (k, a, b)
        val = self._binom_cache.get(key)
        if val is None:
            val = quantum_binomial(a, b).evaluate(self.xi_k[k] ** self.nk[k])
            self._binom_cache[key] = val
        return val

    def mono_coproduct(self, key, twisted: bool = True) -> dict:
        a, i = key
        out = {}
        for bvec in iproduct(*(range(x + 1) for x in a)):
            coeff = self.field.one
            for k, (x, y) in enumerate(zip(a, bvec)):
                if 0 < y < x:
                    coeff = coeff * self.binom(k, x, y)
            if not coeff:
                continue
            rest = tuple(x - y for x, y in zip(a, bvec))
            kpow = (self.degree(rest) + i) % self.N if twisted else i
            out[((bvec, kpow), (rest, i))] = coeff
        return out

    @cached_property
    def lambda_coproduct(self) -> dict:
        return self.braided_integral().coproduct()


def build_structure(n: int, field=None) -> HnStructure:
    return HnStructure(n, field)


class BosonizedElement:
    """Linear combination of PBW monomials d^a K^i."""

    __slots__ = ("structure", "terms")

    def __init__(self, structure: HnStructure, terms):
        self.structure = structure
        self.terms = {k: v for k, v in dict(terms).items() if v}

    def _same(self, other: BosonizedElement):
        if not isinstance(other, BosonizedElement):
            return False
        if other.structure is not self.structure:
            raise ValueError("elements belong to different structures")
        return True

    def __add__(self, other):
        if not self._same(other):
            return NotImplemented
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return BosonizedElement(self.structure, out)

    def __neg__(self):
        return BosonizedElement(self.structure, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> BosonizedElement:
        return BosonizedElement(self.structure, {k: c * v for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, BosonizedElement):
            return self.scale(self.structure.field.coerce(other))
        self._same(other)
        H = self.structure
        out: dict = {}
        for x, u in self.terms.items():
            for y, w in other.terms.items():
                r = H.mono_mul(x, y)
                if r is None:
                    continue
                e, key = r
                c = u * w * H.q(e) if e else u * w
                out[key] = out[key] + c if key in out else c
        return BosonizedElement(H, out)

    def __rmul__(self, c):
        return self.scale(self.structure.field.coerce(c))

    def __pow__(self, e: int):
        out = self.structure.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, BosonizedElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def in_Hn(self) -> bool:
        return all(i == 0 for _, i in self.terms)

    def coproduct(self, twisted: bool = True) -> dict:
        return coproduct(self, twisted)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, i), c in sorted(self.terms.items()):
            mono = "*".join(f"d{k + 1}^{x}" for k, x in enumerate(a) if x)
            if i:
                mono = (mono + "*" if mono else "") + f"K^{i}"
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)

    __repr__ = __str__


# --- structure maps --------------------------------------------------------------------

def multiply(x: BosonizedElement, y: BosonizedElement) -> BosonizedElement:
    return x * y


def coproduct(x: BosonizedElement, twisted: bool = True) -> dict:
    """Delta on PBW monomials, extended linearly; ``twisted=False`` drops the K^{n_k} twist."""
    H = x.structure
    out: dict = {}
    for key, c in x.terms.items():
        for pair, v in H.mono_coproduct(key, twisted).items():
            val = c * v
            out[pair] = out[pair] + val if pair in out else val
    return {k: v for k, v in out.items() if v}


def counit(x: BosonizedElement):
    zero = (0,) * x.structure.t
    total = x.structure.field.zero
    for (a, _), c in x.terms.items():
        if a == zero:
            total = total + c
    return total


def _anti_extend(H: HnStructure, images: dict, key) -> BosonizedElement:
    """Image of d^a K^i under the anti-homomorphism fixed by generator images."""
    a, i = key
    result = images["K"] ** (i % H.N)
    for k in range(H.t - 1, -1, -1):
        for _ in range(a[k]):
            result = result * images[k]
    return result


def _antipode_images(H: HnStructure, inverse: bool) -> dict:
    imgs = {"K": H.K(-1)}
    for k in range(H.t):
        if inverse:
            imgs[k] = -(H.d(k + 1) * H.K(-H.nk[k]))
        else:
            imgs[k] = -(H.K(-H.nk[k]) * H.d(k + 1))
    return imgs


def antipode(x: BosonizedElement, inverse: bool = False) -> BosonizedElement:
    """S (or S^{-1}) as the anti-homomorphism with S(K) = K^{-1}, S(d_k) = -K^{-n_k} d_k."""
    H = x.structure
    cache_name = "_antipode_inv_cache" if inverse else "_antipode_cache"
    if cache_name not in H.__dict__:
        H.__dict__[cache_name] = {}
        H.__dict__[cache_name + "_imgs"] = _antipode_images(H, inverse)
    cache = H.__dict__[cache_name]
    images = H.__dict__[cache_name + "_imgs"]
    out = H.element({})
    for key, c in x.terms.items():
        img = cache.get(key)
        if img is None:
            img = _anti_extend(H, images, key)
            cache[key] = img
        out = out + img.scale(c)
    return out


def antipode_inverse(x: BosonizedElement) -> BosonizedElement:
    return antipode(x, inverse=True)


def trace(x: BosonizedElement):
    """Tr on H_n: the coefficient of the top monomial d^{p-1}."""
    if not x.in_Hn():
        raise ValueError("trace is defined on H_n (no K part)")
    return x.terms.get((x.structure.top, 0), x.structure.field.zero)


def trace_pairing(x: BosonizedElement, y: BosonizedElement):
    if not (x.in_Hn() and y.in_Hn()):
        raise ValueError("trace pairing takes elements of H_n (no K part)")
    return trace(x * y)


def right_orthogonal_pairing(x: BosonizedElement, y: BosonizedElement):
    """Right orthogonal pairing restricted to H_n, read off exponent sums against Lambda."""
    if not (x.in_Hn() and y.in_Hn()):
        raise ValueError("pairing implemented on H_n only")
    H = x.structure
    total = H.field.zero
    for (a, _), u in x.terms.items():
        for (b, _), w in y.terms.items():
            if tuple(s + r for s, r in zip(a, b)) == H.top:
                total = total + u * w
    return total


def gram_matrix(H: HnStructure, pairing=trace_pairing) -> list[list]:
    mons = [H.monomial(a) for a in H.exponents]
    return [[pairing(x, y) for y in mons] for x in mons]


def is_permutation_matrix(mat, field) -> bool:
    size = len(mat)
    cols = set()
    for row in mat:
        nz = [j for j, x in enumerate(row) if x]
        if len(nz) != 1 or row[nz[0]] != field.one:
            return False
        cols.add(nz[0])
    return len(cols) == size


# --- tensor helpers --------------------------------------------------------------------

def _accumulate(out: dict, key, val):
    if key in out:
        s = out[key] + val
        if s:
            out[key] = s
        else:
            del out[key]
    elif val:
        out[key] = val


def tensor_multiply(H: HnStructure, x: dict, y: dict) -> dict:
    out: dict = {}
    for (x1, x2), u in x.items():
        for (y1, y2), w in y.items():
            r1 = H.mono_mul(x1, y1)
            if r1 is None:
                continue
            r2 = H.mono_mul(x2, y2)
            if r2 is None:
                continue
            e = (r1[0] + r2[0]) % H.N
            c = u * w * H.q(e) if e else u * w
            _accumulate(out, (r1[1], r2[1]), c)
    return out


def _delta_tensor(H, x: dict, left: bool, twisted: bool) -> dict:
    out: dict = {}
    for (x1, x2), c in x.items():
        src = x1 if left else x2
        for (y1, y2), v in H.mono_coproduct(src, twisted).items():
            key = (y1, y2, x2) if left else (x1, y1, y2)
            _accumulate(out, key, c * v)
    return out


# --- verifiers ---------------------------------------------------------------------------

def _basis_label(H, key) -> str:
    return f"#{H.basis.index(key)} {key}"


def verify_hopf_axioms(H: HnStructure, twisted: bool = True, pair_limit: int = 300) -> Report:
    """Exact check of the Hopf algebra axioms on every PBW basis element.

    The algebra-map property of the coproduct is checked on all basis pairs
    when the bosonization has at most ``pair_limit`` basis elements, and on
    (generator, basis element) pairs otherwise, which implies it for all
    products by induction on word length.
    """
    F = H.field
    one_key = ((0,) * H.t, 0)
    report = Report(f"Hopf axioms n={H.n} field={F.name}")
    delta = {key: H.mono_coproduct(key, twisted) for key in H.basis}

    def first_failure(pred):
        for key in H.basis:
            if not pred(key):
                return key
        return None

    def coassoc(key):
        d = delta[key]
        return _delta_tensor(H, d, True, twisted) == _delta_tensor(H, d, False, twisted)

    def counit_law(key):
        left: dict = {}
        right: dict = {}
        for (x1, x2), c in delta[key].items():
            if all(v == 0 for v in x1[0]):
                _accumulate(left, x2, c)
            if all(v == 0 for v in x2[0]):
                _accumulate(right, x1, c)
        return left == {key: F.one} == right

    def antipode_law(key):
        eps = F.one if all(v == 0 for v in key[0]) else F.zero
        target = H.one().scale(eps)
        left = H.element({})
        right = H.element({})
        for (x1, x2), c in delta[key].items():
            left = left + (antipode(H.element({x1: c})) * H.element({x2: F.one}))
            right = right + (H.element({x1: c}) * antipode(H.element({x2: F.one})))
        return left == target and right == target

    def inverse_antipode_identity(key):
        # sum S^{-1}(h_2) h_1 = eps(h) 1
        eps = F.one if all(v == 0 for v in key[0]) else F.zero
        acc = H.element({})
        for (x1, x2), c in delta[key].items():
            acc = acc + antipode_inverse(H.element({x2: c})) * H.element({x1: F.one})
        return acc == H.one().scale(eps)

    def s_inverse(key):
        h = H.element({key: F.one})
        return antipode(antipode_inverse(h)) == h and antipode_inverse(antipode(h)) == h

    for name, pred in (("coassociativity", coassoc), ("counit", counit_law),
                       ("antipode", antipode_law), ("antipode_inverse", s_inverse),
                       ("inverse_antipode_convolution", inverse_antipode_identity)):
        bad = first_failure(pred)
        report.add(name, bad is None, "" if bad is None else f"counterexample {_basis_label(H, bad)}")

    # algebra-map properties
    if H.bosonization_dim <= pair_limit:
        lefts = list(H.basis)
        scope = "all basis pairs"
    else:
        lefts = [((0,) * H.t, 1)] + [(H.unit_vector(k), 0) for k in range(H.t)]
        scope = "generator x basis pairs"
    bad_delta = bad_eps = None
    for x in lefts:
        for y in H.basis:
            r = H.mono_mul(x, y)
            if r is None:
                prod_delta: dict = {}
                eps_xy = F.zero
            else:
                e, key = r
                scal = H.q(e)
                prod_delta = {k: v * scal for k, v in delta[key].items()}
                eps_xy = scal if all(v == 0 for v in key[0]) else F.zero
            if bad_delta is None and tensor_multiply(H, delta[x], delta[y]) != prod_delta:
                bad_delta = (x, y)
            eps_x = F.one if all(v == 0 for v in x[0]) else F.zero
            eps_y = F.one if all(v == 0 for v in y[0]) else F.zero
            if bad_eps is None and eps_xy != eps_x * eps_y:
                bad_eps = (x, y)
        if bad_delta is not None and bad_eps is not None:
            break
    report.add("coproduct_multiplicative", bad_delta is None,
               scope if bad_delta is None else
               f"counterexample {_basis_label(H, bad_delta[0])} * {_basis_label(H, bad_delta[1])}")
    report.add("counit_multiplicative", bad_eps is None,
               scope if bad_eps is None else
               f"counterexample {_basis_label(H, bad_eps[0])} * {_basis_label(H, bad_eps[1])}")
    report.add("coproduct_unit", delta[one_key] == {(one_key, one_key): F.one})
    return report


def verify_spherical(H: HnStructure) -> Report:
    """omega is group-like and S^2 is conjugation by omega on every basis element."""
    F = H.field
    report = Report(f"spherical structure n={H.n}")
    w = H.omega()
    (wkey,) = w.terms
    group_like = coproduct(w) == {(wkey, wkey): F.one} and counit(w) == F.one
    report.add("omega_group_like", group_like, f"omega = K^{wkey[1]}")
    w_inv = H.K(-wkey[1])
    bad = None
    for key in H.basis:
        h = H.element({key: F.one})
        if antipode(antipode(h)) != w * h * w_inv:
            bad = key
            break
    report.add("antipode_square_is_conjugation", bad is None,
               "" if bad is None else f"counterexample {_basis_label(H, bad)}")
    return report


def verify_integrals(H: HnStructure) -> Report:
    F = H.field
    report = Report(f"integrals n={H.n}")
    lam = H.integral()
    bad = None
    for key in H.basis:
        h = H.element({key: F.one})
        if h * lam != lam.scale(counit(h)):
            bad = key
            break
    report.add("left_integral", bad is None, "" if bad is None else f"counterexample {_basis_label(H, bad)}")
    report.add("lambda_degree", H.degree(H.top) == H.ell, f"deg = {H.degree(H.top)}, ell = {H.ell}")
    gram = gram_matrix(H)
    report.add("trace_gram_permutation", is_permutation_matrix(gram, F))
    report.add("right_orthogonal_matches_trace", gram == gram_matrix(H, right_orthogonal_pairing))
    report.add("trace_of_lambda", trace(H.braided_integral()) == F.one)
    return report


def verify_structure(H: HnStructure) -> Report:
    report = Report(f"structure n={H.n}")
    report.add("graded_dimension", H.graded_dimension() == H.graded_dimension_formula(),
               str(H.graded_dimension()))
    report.add("ell_two_ways", H.ell == sum(H.n - d for d in H.nk))
    prim = all(
        (H.xi_k[k] ** H.nk[k]) ** p == H.field.one and (H.xi_k[k] ** H.nk[k]) != H.field.one
        for k, p in enumerate(H.ps))
    report.add("xi_k_power_primitive", prim)
    return report
