"""Membership in the tensor ideals I_k and I, witnessed by filtration certificates.

A certificate is a list of steps (k, b, generator).  Step r names a
homogeneous vector v in the r-th quotient with d_l v = 0 for l != k and
d_k^{p_k - 1} v != 0; then H v is a copy of V_k{b} (b = -deg v), and the
next quotient is taken by it.  A certificate is valid when the last quotient
is zero.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .arith.cyclotomic import cyclotomic_polynomial, string_quotient
from .gradedmod import (GradedModule, ModuleMap, dual, quotient, random_extension, submodule,
                        tensor, v_k)
from .linalg import Echelon, rank
from .report import Report

MEMBER = "MEMBER"
NOT_MEMBER = "NOT-MEMBER"
NOT_CERTIFIED = "NOT-CERTIFIED"


@dataclass
class Step:
    k: int                 # prime index, counted from 1
    b: int                 # the step's quotient is V_k{b}
    degree: int
    vector: list

    def to_dict(self) -> dict:
        return {"k": self.k, "b": self.b, "degree": self.degree,
                "vector": [str(x) for x in self.vector]}


@dataclass
class FiltrationCertificate:
    steps: list = field(default_factory=list)

    def __len__(self):
        return len(self.steps)

    def kinds(self) -> list[int]:
        return [s.k for s in self.steps]

    def to_dict(self) -> dict:
        return {"steps": [s.to_dict() for s in self.steps]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict, field) -> FiltrationCertificate:
        return cls([Step(s["k"], s["b"], s["degree"], [field.parse(x) for x in s["vector"]])
                    for s in data["steps"]])

    def replay(self, M: GradedModule, only_k: int | None = None) -> bool:
        return replay(self, M, only_k)


@dataclass
class MembershipResult:
    status: str
    certificate: FiltrationCertificate | None = None
    obstruction: str = ""
    nodes: int = 0
    seed: int = 0

    def __bool__(self):
        return self.status == MEMBER

    def to_dict(self) -> dict:
        out = {"status": self.status, "nodes": self.nodes, "seed": self.seed}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_dict()
        if self.obstruction:
            out["obstruction"] = self.obstruction
        return out


class SearchExhausted(Exception):
    pass


# --- step mechanics --------------------------------------------------------------------------

def _step_ok(X: GradedModule, k0: int, degree: int, vec: list) -> bool:
    """d_l v = 0 for l != k and d_k^{p_k-1} v != 0 (k0 is 0-based)."""
    H = X.structure
    for l in range(H.t):
        if l != k0 and X.dim_at(degree + H.nk[l]) and any(X.block(l, degree).apply(vec)):
            return False
    top = X.action_power(k0, H.ps[k0] - 1, degree)
    return top.rows > 0 and any(top.apply(vec))


def peel(X: GradedModule, k0: int, degree: int, vec: list) -> tuple[GradedModule, ModuleMap]:
    """Quotient of X by the V_k-string generated by vec."""
    sub, inc = submodule(X, [{degree: vec}])
    return quotient(X, inc)


def replay(cert: FiltrationCertificate, M: GradedModule, only_k: int | None = None) -> bool:
    H = M.structure
    X = M
    for step in cert.steps:
        k0 = step.k - 1
        if only_k is not None and step.k != only_k:
            return False
        if len(step.vector) != X.dim_at(step.degree) or step.b != -step.degree:
            return False
        if not _step_ok(X, k0, step.degree, step.vector):
            return False
        sub, inc = submodule(X, [{step.degree: step.vector}])
        want = {step.degree + r * H.nk[k0]: 1 for r in range(H.ps[k0])}
        if sub.dims != want:
            return False
        X, _ = quotient(X, inc)
    return X.is_zero()


# --- obstructions ----------------------------------------------------------------------------

def is_free_over_Hnk(M: GradedModule, k: int) -> bool:
    """Freeness over k[d_k]/(d_k^{p_k}): rank of d_k^{p_k-1} equals dim/p_k."""
    H = M.structure
    k0 = k - 1
    p = H.ps[k0]
    if M.total_dim % p:
        return False
    r = 0
    for i in M.degrees:
        if M.dim_at(i + (p - 1) * H.nk[k0]):
            r += rank(M.action_power(k0, p - 1, i))
    return r == M.total_dim // p


def _obstruction_I(M: GradedModule) -> str:
    H = M.structure
    phi = cyclotomic_polynomial(H.n)
    dim = M.graded_dimension()
    if dim and not phi.divides(dim):
        return f"graded dimension {dim} is not divisible by Phi_{H.n} = {phi}"
    return ""


def _obstruction_Ik(M: GradedModule, k: int) -> str:
    H = M.structure
    p = H.ps[k - 1]
    if M.total_dim % p:
        return f"dimension {M.total_dim} is not divisible by p_{k} = {p}"
    gen = string_quotient(H.n, H.nk[k - 1])
    dim = M.graded_dimension()
    if dim and not gen.divides(dim):
        return f"graded dimension {dim} is not divisible by {gen}"
    if not is_free_over_Hnk(M, k):
        return f"not free over k[d_{k}]/(d_{k}^{p})"
    return ""


# --- search ------------------------------------------------------------------------------------

class _Search:
    def __init__(self, ks: list[int], budget: int, rng: random.Random, random_tries: int = 4):
        self.ks = ks            # 0-based prime indices allowed
        self.budget = budget
        self.nodes = 0
        self.rng = rng
        self.random_tries = random_tries

    def obstructed(self, X: GradedModule) -> bool:
        if X.is_zero():
            return False
        if len(self.ks) == 1:
            return bool(_obstruction_Ik(X, self.ks[0] + 1))
        return bool(_obstruction_I(X))

    def candidates(self, X: GradedModule):
        H = X.structure
        F = H.field
        for k0 in self.ks:
            p = H.ps[k0]
            for i in X.degrees:
                if X.dim_at(i + (p - 1) * H.nk[k0]) == 0:
                    continue
                ech = Echelon(F)
                for l in range(H.t):
                    if l != k0 and X.dim_at(i + H.nk[l]):
                        for row in X.block(l, i).data:
                            ech.add({c: x for c, x in enumerate(row) if x})
                basis = []
                for vec in ech.nullspace(range(X.dims[i])):
                    dense = [F.zero] * X.dims[i]
                    for c, x in vec.items():
                        dense[c] = x
                    basis.append(dense)
                if not basis:
                    continue
                top = X.action_power(k0, p - 1, i)
                good = [v for v in basis if any(top.apply(v))]
                for v in good:
                    yield k0, i, v
                if len(basis) > 1:
                    for _ in range(self.random_tries):
                        coeffs = [F.from_int(self.rng.randint(-3, 3)) for _ in basis]
                        v = [sum((c * b[r] for c, b in zip(coeffs, basis) if c), F.zero)
                             for r in range(X.dims[i])]
                        if any(top.apply(v)):
                            yield k0, i, v

    def run(self, X: GradedModule) -> list | None:
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchExhausted
        if X.is_zero():
            return []
        if self.obstructed(X):
            return None
        for k0, i, v in self.candidates(X):
            Y, _ = peel(X, k0, i, v)
            rest = self.run(Y)
            if rest is not None:
                return [Step(k0 + 1, -i, i, v)] + rest
        return None


def _free_steps(M: GradedModule, gens, k0: int):
    """Peel each free summand H m as V_k-strings generated by d^b m (b_k = 0), top degree first."""
    H = M.structure
    steps = []
    X = M
    to_current = ModuleMap.identity(M)
    mons = [a for a in H.exponents if a[k0] == 0]
    mons.sort(key=lambda a: (-H.degree(a), a))
    for i, m in gens:
        for a in mons:
            deg = i + H.degree(a)
            vec_M = M.monomial_action(a, i).apply(m)
            vec = to_current({deg: vec_M}).get(deg)
            steps.append(Step(k0 + 1, -deg, deg, vec))
            sub, inc = submodule(X, [{deg: vec}])
            X, proj = quotient(X, inc)
            to_current = proj.compose(to_current)
    return steps, X


def _membership(M: GradedModule, ks: list[int], budget: int, seed: int) -> MembershipResult:
    from .stable import strip_projectives
    if M.is_zero():
        return MembershipResult(MEMBER, FiltrationCertificate([]), seed=seed)
    if len(ks) == 1:
        obstruction = _obstruction_Ik(M, ks[0] + 1)
    else:
        obstruction = _obstruction_I(M)
    if obstruction:
        return MembershipResult(NOT_MEMBER, obstruction=obstruction, seed=seed)
    stripped = strip_projectives(M)
    steps, rest = _free_steps(M, stripped.generators, ks[0])
    search = _Search(ks, budget, random.Random(seed))
    try:
        found = search.run(rest)
    except SearchExhausted:
        return MembershipResult(NOT_CERTIFIED, obstruction="budget exhausted",
                                nodes=search.nodes, seed=seed)
    if found is None:
        return MembershipResult(NOT_CERTIFIED, obstruction="search space exhausted without a filtration",
                                nodes=search.nodes, seed=seed)
    cert = FiltrationCertificate(steps + found)
    if not replay(cert, M, ks[0] + 1 if len(ks) == 1 else None):
        raise AssertionError("certificate failed to replay")
    return MembershipResult(MEMBER, cert, nodes=search.nodes, seed=seed)


def is_in_Ik(M: GradedModule, k: int, budget: int = 10_000, seed: int = 0) -> MembershipResult:
    H = M.structure
    if not 1 <= k <= H.t:
        raise IndexError(f"prime index k={k} out of range 1..{H.t}")
    return _membership(M, [k - 1], budget, seed)


def is_in_I(M: GradedModule, budget: int = 10_000, seed: int = 0) -> MembershipResult:
    return _membership(M, list(range(M.structure.t)), budget, seed)


# --- random members and the closure harness ----------------------------------------------------

def random_member(H, rng: random.Random, max_dim: int = 18, window: int = 4):
    """Iterated extension of shifted V_k's, with the filtration it was built from."""
    steps = []
    E = None
    used = 0
    while True:
        choices = [k for k in range(1, H.t + 1) if used + H.ps[k - 1] <= max_dim]
        if not choices or (E is not None and rng.random() < 0.25):
            break
        k = rng.choice(choices)
        if E is not None and rng.random() < 0.8:
            anchor = rng.choice(E.degrees)
            step = rng.choice(H.nk) * rng.choice((-1, 1))
            own = rng.randrange(H.ps[k - 1]) * H.nk[k - 1]
            b = own - (anchor + step)
        else:
            b = rng.randint(-window, window)
        A = v_k(H, k, b)
        E = A if E is None else random_extension(A, E, rng)
        used += H.ps[k - 1]
        steps.append((k, b))
    return E, steps


def closure_harness(H, trials: int = 100, seed: int = 0, member_dim: int = 18, other_dim: int = 6,
                    budget: int = 10_000) -> Report:
    """Tensor products, duals and extensions of random members must get certificates."""
    from .gradedmod import random_module
    rng = random.Random(seed)
    counts = {"tensor_left": [0, 0, 0], "tensor_right": [0, 0, 0], "dual": [0, 0, 0],
              "extension": [0, 0, 0]}   # pass, fail, unresolved
    first_bad = {}

    def record(kind, M, tag):
        res = is_in_I(M, budget=budget, seed=seed)
        slot = 0 if res.status == MEMBER else 2 if res.status == NOT_CERTIFIED else 1
        counts[kind][slot] += 1
        if slot and kind not in first_bad:
            first_bad[kind] = f"{tag}: {res.status} {res.obstruction}"

    members = [random_member(H, rng, member_dim)[0] for _ in range(trials)]
    for t, U in enumerate(members):
        M = random_module(H, rng, other_dim)
        record("tensor_left", tensor(U, M), f"trial {t}")
        record("tensor_right", tensor(M, U), f"trial {t}")
        record("dual", dual(U), f"trial {t}")
        W = members[(t + 1) % len(members)]
        record("extension", random_extension(U, W, rng), f"trial {t}")
    report = Report(f"ideal closure n={H.n} trials={trials} seed={seed}")
    for kind, (ok, bad, unres) in counts.items():
        report.add(kind, bad == 0 and unres == 0,
                   f"certified {ok}, not member {bad}, unresolved {unres}"
                   + (f"; first: {first_bad[kind]}" if kind in first_bad else ""))
    return report
