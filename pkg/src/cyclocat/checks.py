"""The acceptance checks, shared by ``cyclocat all-checks`` and the test suite.

Each check returns a ``Report``.  ``run_all`` runs every check on its
default parameter set, or restricted to a single ``n``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable

from .arith.cyclotomic import cyclotomic_polynomial, verify_cyclotomic_identities
from .arith.laurent import LaurentPolynomial
from .gradedmod import (ModuleError, direct_sum, dual, example_V, example_Vdoubleprime,
                        example_Vprime, hom_dimension, hom_space, internal_hom, isomorphism_search,
                        linear_combination, random_intertwiner, random_module, shift, submodule,
                        quotient, tensor, tensor_maps, trivial, v_k, braiding_iso)
from .hopf import build_structure, verify_hopf_axioms, verify_integrals, verify_spherical
from .ideal import (MEMBER, NOT_MEMBER, closure_harness, is_in_I, is_in_Ik, random_member)
from .k0 import (class_of, conjugate, ideal_generated_by_strings, k0_ring, member_dimension_gcd,
                 norm_check, triangle_relation_check)
from .report import Report
from .stable import (factoring_through_rho, is_quasi_isomorphism, null_homotopic_basis,
                     same_subspace, shift_plus, stable_hom)

HOPF_NS = (2, 3, 4, 6, 10, 12, 30)
STABLE_NS = (2, 3, 4, 6, 10, 12)
SHIFT_NS = (2, 3, 6, 10, 12)


def _structures(ns, field=None):
    return [build_structure(n, field) for n in ns]


def check_hopf_axioms(ns=HOPF_NS, field=None) -> Report:
    report = Report("hopf axioms and spherical structure")
    for H in _structures(ns, field):
        report.extend(verify_hopf_axioms(H), f"n={H.n} ")
        report.extend(verify_spherical(H), f"n={H.n} ")
    return report


def check_integrals(ns=HOPF_NS, field=None) -> Report:
    report = Report("integrals and trace pairing")
    for H in _structures(ns, field):
        report.extend(verify_integrals(H), f"n={H.n} ")
    return report


def check_cyclotomic(identity_max: int = 5000, gcd_max: int = 1000, ns=None) -> Report:
    report = Report("cyclotomic identities")
    id_range = ns or range(2, identity_max + 1)
    bad = [n for n in id_range if not verify_cyclotomic_identities(n).passed]
    report.add("identities", not bad,
               f"n in {_span(id_range)}" + (f"; failures at {bad[:10]}" if bad else ""))
    gcd_range = ns or range(2, gcd_max + 1)
    bad = [n for n in gcd_range
           if ideal_generated_by_strings(n, check=False) != cyclotomic_polynomial(n)]
    report.add("string_gcd_is_phi_n", not bad,
               f"n in {_span(gcd_range)}" + (f"; failures at {bad[:10]}" if bad else ""))
    return report


def _span(ns) -> str:
    ns = list(ns)
    return f"[{ns[0]}, {ns[-1]}]" if len(ns) > 1 else str(ns[0])


def check_graded_dimension(ns=range(2, 31)) -> Report:
    report = Report("graded dimension of H_n")
    bad = []
    for n in ns:
        H = build_structure(n)
        if H.graded_dimension() != H.graded_dimension_formula():
            bad.append(n)
    report.add("basis_matches_product", not bad, f"n in {_span(ns)}" + (f"; bad {bad}" if bad else ""))
    if 6 in ns:
        got = build_structure(6).graded_dimension()
        want = LaurentPolynomial.from_dict({0: 1, 2: 1, 3: 1, 4: 1, 5: 1, 7: 1})
        report.add("n=6 expansion", got == want, str(got))
    return report


def _aligned_pair(H, rng, max_dim: int, window: int):
    M = random_module(H, rng, max_dim, window=window)
    N = random_module(H, rng, max_dim, window=window)
    off = rng.choice(M.degrees) - rng.choice(N.degrees)
    return M, shift(N, -off)


def check_stable_hom_oracle(n: int = 6, pairs: int = 200, seed: int = 0, max_dim: int = 12) -> Report:
    """Lambda-formula null-homotopic maps versus maps factoring through rho_M."""
    H = build_structure(n)
    rng = random.Random(seed)
    agree = nontrivial = 0
    first_bad = ""
    for t in range(pairs):
        M, N = _aligned_pair(H, rng, max_dim, 3)
        a = null_homotopic_basis(M, N, 0)
        b = factoring_through_rho(M, N)
        if same_subspace(a, b, H.field):
            agree += 1
        elif not first_bad:
            first_bad = f"pair {t}: dims {len(a)} vs {len(b)}"
        nontrivial += bool(a)
    report = Report(f"stable hom oracle n={n} pairs={pairs} seed={seed}")
    report.add("subspaces_equal", agree == pairs, f"{agree}/{pairs}" + (f"; {first_bad}" if first_bad else ""))
    report.add("nontrivial_cases", nontrivial > 0, f"{nontrivial} pairs with nonzero null-homotopic maps")
    return report


def check_trivial_module(ns=STABLE_NS) -> Report:
    report = Report("stable endomorphisms of k and non-membership of k")
    for n in ns:
        H = build_structure(n)
        k = trivial(H, 0)
        sd = stable_hom(k, k).stable_dimension
        report.add(f"n={n} stable_end_k", sd == 1, f"dimension {sd}")
        res = is_in_I(k)
        report.add(f"n={n} k_not_in_I", res.status == NOT_MEMBER and bool(res.obstruction),
                   f"{res.status}: {res.obstruction}")
    return report


def check_shift_square(ns=SHIFT_NS, seed: int = 0, budget: int = 10_000) -> Report:
    """k[2] against k{n}: as stable modules, and after passing to the quotient by I."""
    report = Report("shift square of the trivial module")
    for n in ns:
        H = build_structure(n)
        k2 = shift_plus(shift_plus(trivial(H, 0)))
        kn = shift(trivial(H, 0), n)
        iso = isomorphism_search(k2, kn, seed)
        report.add(f"n={n} stable_iso", bool(iso) and iso.certified,
                   f"dim k[2] = {k2.graded_dimension()}, dim k{{n}} = {kn.graded_dimension()}; {iso.reason}")
        witnesses = [f for f in hom_space(kn, k2, 0)
                     if is_quasi_isomorphism(f, budget=budget, seed=seed)]
        report.add(f"n={n} quotient_iso", bool(witnesses),
                   f"{len(witnesses)} basis maps k{{n}} -> k[2] with cone in I")
    return report


_SUBS = {"V": ("b0", -1), "V'": ("b0", -3), "V''": ("b0", 1)}


def _times_k(c: int) -> str:
    return {1: "k", -1: "-k"}.get(c, f"{c}k")


def check_two_prime_examples(n: int = 6, budget: int = 10_000, seed: int = 0) -> Report:
    report = Report(f"two-prime examples n={n}")
    H = build_structure(n)
    try:
        modules = [example_V(H), example_Vprime(H), example_Vdoubleprime(H)]
    except ModuleError as exc:
        report.add("examples", True, f"skipped: {exc}")
        return report
    k = n // 6
    for M in modules:
        res = is_in_Ik(M, 2, budget=budget, seed=seed)
        report.add(f"{M.name} in I_2", res.status == MEMBER,
                   f"{res.status}, {len(res.certificate or [])} steps")
        name, mult = _SUBS[M.name]
        deg, idx = M.named_basis[name]
        vec = [H.field.zero] * M.dims[deg]
        vec[idx] = H.field.one
        S, inc = submodule(M, [{deg: vec}])
        Q, _ = quotient(M, inc)
        sub_iso = isomorphism_search(S, v_k(H, 2, mult * k), seed)
        quo_iso = isomorphism_search(Q, v_k(H, 2, 0), seed)
        report.add(f"{M.name} sequence", bool(sub_iso) and bool(quo_iso),
                   f"0 -> V_2{{{_times_k(mult)}}} -> {M.name} -> V_2 -> 0")
        c = class_of(M, "on")
        report.add(f"{M.name} class", c.is_zero(), f"class in K0(O_{n}) = {c}")
    return report


def check_ideal_closure(n: int = 6, trials: int = 100, seed: int = 0, budget: int = 10_000,
                        member_dim: int = 18, other_dim: int = 6) -> Report:
    H = build_structure(n)
    report = closure_harness(H, trials, seed, member_dim, other_dim, budget)
    rng = random.Random(seed + 1)
    members = [random_member(H, rng, member_dim)[0] for _ in range(trials)]
    classes = [class_of(M, "on") for M in members]
    report.add("member_classes_vanish", all(c.is_zero() for c in classes))
    g = member_dimension_gcd(members)
    report.add("member_dimension_gcd", g == cyclotomic_polynomial(n), f"gcd = {g}")
    return report


def check_braiding(n: int = 6, pairs: int = 200, squares: int = 50, seed: int = 0,
                   max_dim: int = 6) -> Report:
    H = build_structure(n)
    rng = random.Random(seed)
    ok = 0
    for _ in range(pairs):
        V = random_module(H, rng, max_dim)
        W = random_module(H, rng, max_dim)
        psi = braiding_iso(V, W)
        ok += psi.is_intertwiner() and psi.is_invertible()
    report = Report(f"braiding n={n} seed={seed}")
    report.add("intertwining_isomorphism", ok == pairs, f"{ok}/{pairs}")
    good = nonzero = 0
    for _ in range(squares):
        V, W = random_module(H, rng, max_dim), random_module(H, rng, max_dim)
        V2, W2 = random_module(H, rng, max_dim), random_module(H, rng, max_dim)
        f, g = random_intertwiner(V, V2, rng), random_intertwiner(W, W2, rng)
        if f.is_zero():
            V2, f = V, _random_endomorphism(V, rng)
        if g.is_zero():
            W2, g = W, _random_endomorphism(W, rng)
        VW, V2W2 = tensor(V, W, "q"), tensor(V2, W2, "q")
        WV, W2V2 = tensor(W, V, "q_inverse"), tensor(W2, V2, "q_inverse")
        left = braiding_iso(V2, W2, V2W2, W2V2).compose(tensor_maps(f, g, VW, V2W2))
        right = tensor_maps(g, f, WV, W2V2).compose(braiding_iso(V, W, VW, WV))
        good += left == right
        nonzero += not left.is_zero()
    report.add("naturality", good == squares, f"{good}/{squares}, {nonzero} with nonzero composite")
    return report


def _random_endomorphism(M, rng):
    basis = hom_space(M, M, 0)
    F = M.field
    return linear_combination(basis, [F.from_int(rng.randint(-3, 3)) for _ in basis])


def check_adjunction(n: int = 6, triples: int = 100, seed: int = 0, max_dim: int = 4) -> Report:
    """dim Hom(M (x) L, N)^j = dim Hom(L, Hom(M, N))^j for every j where either can be nonzero."""
    H = build_structure(n)
    rng = random.Random(seed)
    equal = compared = 0
    first_bad = ""
    for t in range(triples):
        M, L, N = (random_module(H, rng, max_dim, window=3) for _ in range(3))
        ML, Hm = tensor(M, L), internal_hom(M, N)
        lo = min(N.degrees) - max(ML.degrees)
        hi = max(N.degrees) - min(ML.degrees)
        for j in range(lo, hi + 1):
            a, b = hom_dimension(ML, N, j), hom_dimension(L, Hm, j)
            compared += 1
            if a == b:
                equal += 1
            elif not first_bad:
                first_bad = f"triple {t}, degree {j}: {a} vs {b}"
    report = Report(f"tensor-hom adjunction n={n} seed={seed}")
    report.add("dimensions_equal", equal == compared,
               f"{equal}/{compared} degrees over {triples} triples" + (f"; {first_bad}" if first_bad else ""))
    return report


def check_k0(n: int = 6, pairs: int = 200, norms: int = 100, triangles: int = 30, seed: int = 0,
             max_dim: int = 6) -> Report:
    H = build_structure(n)
    rng = random.Random(seed)
    rings = [k0_ring(n, "stmod"), k0_ring(n, "on")]
    mult = add = dual_ok = shift_ok = 0
    for _ in range(pairs):
        M, N = random_module(H, rng, max_dim), random_module(H, rng, max_dim)
        T, S = tensor(M, N), direct_sum(M, N)
        mult += all(class_of(T, R) == class_of(M, R) * class_of(N, R) for R in rings)
        add += all(class_of(S, R) == class_of(M, R) + class_of(N, R) for R in rings)
        dual_ok += all(class_of(dual(M), R) == conjugate(class_of(M, R)) for R in rings)
        nu_inv = LaurentPolynomial.monomial(-1)
        shift_ok += all(class_of(shift(M, 1), R) == R.element(nu_inv) * class_of(M, R) for R in rings)
    report = Report(f"K0 n={n} seed={seed}")
    report.add("multiplicative", mult == pairs, f"{mult}/{pairs}")
    report.add("additive", add == pairs, f"{add}/{pairs}")
    report.add("dual_is_conjugate", dual_ok == pairs, f"{dual_ok}/{pairs}")
    report.add("shift_by_one", shift_ok == pairs, f"{shift_ok}/{pairs}")
    good = sum(norm_check(random_module(H, rng, max_dim)) for _ in range(norms))
    report.add("norm_check", good == norms, f"{good}/{norms}")
    tri = 0
    for _ in range(triangles):
        M, N = random_module(H, rng, max_dim), random_module(H, rng, max_dim)
        tri += triangle_relation_check(random_intertwiner(M, N, rng))
    report.add("triangle_relation", tri == triangles, f"{tri}/{triangles}")
    return report


@dataclass
class Criterion:
    number: int
    name: str
    run: Callable[..., Report]


def criteria(n: int | None = None, seed: int = 0, budget: int = 10_000, field=None) -> list[Criterion]:
    """All acceptance checks; with ``n`` given, every check runs at that n only."""
    one = (n,) if n is not None else None
    m = n if n is not None else 6
    return [
        Criterion(1, "hopf_axioms", lambda: check_hopf_axioms(one or HOPF_NS, field)),
        Criterion(2, "integrals", lambda: check_integrals(one or HOPF_NS, field)),
        Criterion(3, "cyclotomic", lambda: check_cyclotomic(ns=one)),
        Criterion(4, "graded_dimension", lambda: check_graded_dimension(one or range(2, 31))),
        Criterion(5, "stable_hom_oracle", lambda: check_stable_hom_oracle(m, seed=seed)),
        Criterion(6, "trivial_module", lambda: check_trivial_module(one or STABLE_NS)),
        Criterion(7, "shift_square", lambda: check_shift_square(one or SHIFT_NS, seed, budget)),
        Criterion(8, "two_prime_examples", lambda: check_two_prime_examples(m, budget, seed)),
        Criterion(9, "ideal_closure", lambda: check_ideal_closure(m, seed=seed, budget=budget)),
        Criterion(10, "braiding", lambda: check_braiding(m, seed=seed)),
        Criterion(11, "adjunction", lambda: check_adjunction(m, seed=seed)),
        Criterion(12, "k0", lambda: check_k0(m, seed=seed)),
    ]


def run_all(n: int | None = None, seed: int = 0, budget: int = 10_000, field=None,
            only=None) -> list[tuple[Criterion, Report]]:
    out = []
    for c in criteria(n, seed, budget, field):
        if only and c.number not in only:
            continue
        out.append((c, c.run()))
    return out
