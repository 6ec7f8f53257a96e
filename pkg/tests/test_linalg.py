import random

import sympy
from hypothesis import given, settings, strategies as st

from cyclocat.arith.field import cyclotomic_field
from cyclocat.linalg import (Echelon, Matrix, determinant, inverse, kron, nullspace, rank,
                             same_span, solve)

Q = cyclotomic_field(1)
F = cyclotomic_field(12)

int_matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-4, 4), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def as_fraction(x):
    return x.to_fraction()


@settings(max_examples=80)
@given(int_matrices)
def test_rank_and_nullspace_match_sympy(rows):
    A = Matrix.from_rows(Q, rows)
    S = sympy.Matrix(rows)
    assert rank(A) == S.rank()
    basis = nullspace(A)
    assert len(basis) == len(S.nullspace())
    for v in basis:
        assert not any(A.apply(v))


@settings(max_examples=60)
@given(st.integers(1, 5).flatmap(lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_determinant_and_inverse_match_sympy(rows):
    A = Matrix.from_rows(Q, rows)
    det = sympy.Matrix(rows).det()
    assert as_fraction(determinant(A)) == det
    if det:
        assert A @ inverse(A) == Matrix.identity(Q, len(rows))


def test_cyclotomic_inverse_and_solve():
    rng = random.Random(4)
    rows = [[F.random_element(rng, 2) for _ in range(4)] for _ in range(4)]
    A = Matrix(F, 4, 4, rows)
    assert A @ inverse(A) == Matrix.identity(F, 4)
    b = [F.random_element(rng) for _ in range(4)]
    x = solve(A, b)
    assert A.apply(x) == b


def test_solve_inconsistent():
    A = Matrix.from_rows(Q, [[1, 1], [2, 2]])
    assert solve(A, [Q.one, Q.zero]) is None


def test_echelon_span():
    ech = Echelon(Q)
    assert ech.add({0: Q.one, 1: Q.one}) is not None
    assert ech.add({0: Q.from_int(2), 1: Q.from_int(2)}) is None
    assert ech.contains({0: Q.from_int(3), 1: Q.from_int(3)})
    assert same_span([{0: Q.one}, {1: Q.one}], [{0: Q.one, 1: Q.one}, {0: Q.one}], Q)


def test_kron_matches_sympy():
    a, b = [[1, 2], [0, 3]], [[1, -1, 0], [2, 0, 1]]
    got = kron(Matrix.from_rows(Q, a), Matrix.from_rows(Q, b))
    want = sympy.kronecker_product(sympy.Matrix(a), sympy.Matrix(b))
    assert [[as_fraction(x) for x in r] for r in got.data] == want.tolist()
