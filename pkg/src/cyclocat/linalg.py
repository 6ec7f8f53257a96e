"""Exact linear algebra over the fields in ``cyclocat.arith.field``.

Two representations are used.  Small dense blocks are ``Matrix`` objects
(lists of rows).  Linear systems with many unknowns are sparse rows, i.e.
dicts ``column -> nonzero value``, fed to an incrementally maintained
reduced row echelon form (``Echelon``).
"""
from __future__ import annotations

from itertools import product as iproduct


class Matrix:
    """Dense matrix of field elements; ``rows x cols`` with possibly zero size."""

    __slots__ = ("field", "rows", "cols", "data")

    def __init__(self, field, rows: int, cols: int, data=None):
        self.field = field
        self.rows = rows
        self.cols = cols
        if data is None:
            z = field.zero
            data = [[z] * cols for _ in range(rows)]
        self.data = data

    @classmethod
    def zeros(cls, field, rows, cols) -> Matrix:
        return cls(field, rows, cols)

    @classmethod
    def identity(cls, field, size) -> Matrix:
        m = cls(field, size, size)
        for i in range(size):
            m.data[i][i] = field.one
        return m

    @classmethod
    def from_rows(cls, field, rows, cols: int | None = None) -> Matrix:
        rows = [[field.coerce(x) for x in r] for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix rows")
        return cls(field, len(rows), cols, rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        i, j = idx
        return self.data[i][j]

    def __setitem__(self, idx, value):
        i, j = idx
        self.data[i][j] = value

    def copy(self) -> Matrix:
        return Matrix(self.field, self.rows, self.cols, [list(r) for r in self.data])

    def is_zero(self) -> bool:
        return not any(x for r in self.data for x in r)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __add__(self, other: Matrix) -> Matrix:
        _check_shape(self, other)
        return Matrix(self.field, self.rows, self.cols,
                      [[a + b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __sub__(self, other: Matrix) -> Matrix:
        _check_shape(self, other)
        return Matrix(self.field, self.rows, self.cols,
                      [[a - b for a, b in zip(r, s)] for r, s in zip(self.data, other.data)])

    def __neg__(self) -> Matrix:
        return Matrix(self.field, self.rows, self.cols, [[-a for a in r] for r in self.data])

    def scale(self, c) -> Matrix:
        if not c:
            return Matrix.zeros(self.field, self.rows, self.cols)
        return Matrix(self.field, self.rows, self.cols, [[c * a if a else a for a in r] for r in self.data])

    def __matmul__(self, other: Matrix) -> Matrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        z = self.field.zero
        out = []
        ocols = other.cols
        odata = other.data
        for r in self.data:
            acc = [z] * ocols
            for k, a in enumerate(r):
                if a:
                    brow = odata[k]
                    for j in range(ocols):
                        b = brow[j]
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(self.field, self.rows, ocols, out)

    def apply(self, vec: list) -> list:
        """Matrix times column vector (a list)."""
        z = self.field.zero
        out = []
        for r in self.data:
            acc = z
            for a, x in zip(r, vec):
                if a and x:
                    acc = acc + a * x
            out.append(acc)
        return out

    def transpose(self) -> Matrix:
        return Matrix(self.field, self.cols, self.rows,
                      [list(col) for col in zip(*self.data)] if self.rows else
                      [[] for _ in range(self.cols)])

    def column(self, j: int) -> list:
        return [r[j] for r in self.data]

    def rank(self) -> int:
        return rank(self)

    def inverse(self) -> Matrix:
        return inverse(self)

    def __repr__(self):
        body = "; ".join(", ".join(str(x) for x in r) for r in self.data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"


def _check_shape(a: Matrix, b: Matrix):
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch {a.shape} vs {b.shape}")


def hstack(field, rows: int, blocks) -> Matrix:
    blocks = list(blocks)
    data = [[x for b in blocks for x in b.data[i]] for i in range(rows)]
    return Matrix(field, rows, sum(b.cols for b in blocks), data)


def vstack(field, cols: int, blocks) -> Matrix:
    data = [list(r) for b in blocks for r in b.data]
    return Matrix(field, len(data), cols, data)


def block_diag(field, blocks) -> Matrix:
    blocks = list(blocks)
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = Matrix.zeros(field, rows, cols)
    r0 = c0 = 0
    for b in blocks:
        for i in range(b.rows):
            out.data[r0 + i][c0:c0 + b.cols] = b.data[i]
        r0 += b.rows
        c0 += b.cols
    return out


def kron(a: Matrix, b: Matrix, scalar=None) -> Matrix:
    """Kronecker product, row index (i, k) -> i*b.rows + k."""
    field = a.field
    out = Matrix.zeros(field, a.rows * b.rows, a.cols * b.cols)
    for i, j in iproduct(range(a.rows), range(a.cols)):
        x = a.data[i][j]
        if not x:
            continue
        if scalar is not None:
            x = x * scalar
        for k, l in iproduct(range(b.rows), range(b.cols)):
            y = b.data[k][l]
            if y:
                out.data[i * b.rows + k][j * b.cols + l] = x * y
    return out


# --- sparse elimination ---------------------------------------------------------

class Echelon:
    """Incremental reduced row echelon form of sparse rows.

    Rows are dicts ``column -> value``.  Every stored pivot row is normalized
    to 1 at its pivot and has zeros in all other pivot columns.
    """

    def __init__(self, field):
        self.field = field
        self.pivots: dict = {}

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict) -> dict:
        row = {c: v for c, v in row.items() if v}
        pivots = self.pivots
        hits = [c for c in row if c in pivots]
        for c in hits:
            coef = row.get(c)
            if not coef:
                continue
            for cc, pv in pivots[c].items():
                nv = row.get(cc)
                nv = -coef * pv if nv is None else nv - coef * pv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        return row

    def add(self, row: dict) -> dict | None:
        """Insert ``row``; returns the new pivot row, or None if it was dependent."""
        row = self.reduce(row)
        if not row:
            return None
        col = min(row, key=_sort_key)
        inv = row[col].inverse()
        row = {c: v * inv for c, v in row.items()}
        for prow in self.pivots.values():
            coef = prow.get(col)
            if coef:
                for cc, v in row.items():
                    nv = prow.get(cc)
                    nv = -coef * v if nv is None else nv - coef * v
                    if nv:
                        prow[cc] = nv
                    else:
                        prow.pop(cc, None)
        self.pivots[col] = row
        return row

    def contains(self, row: dict) -> bool:
        return not self.reduce(row)

    def nullspace(self, columns) -> list[dict]:
        """Basis of {x : row . x = 0 for all rows}, x indexed by ``columns``."""
        one = self.field.one
        free = [c for c in columns if c not in self.pivots]
        by_free: dict = {c: [] for c in free}
        for pc, prow in self.pivots.items():
            for c, v in prow.items():
                if c != pc:
                    by_free[c].append((pc, v))
        basis = []
        for f in free:
            vec = {f: one}
            for pc, v in by_free[f]:
                vec[pc] = -v
            basis.append(vec)
        return basis


def _sort_key(c):
    return c


def row_space(rows, field) -> Echelon:
    ech = Echelon(field)
    for r in rows:
        ech.add(r)
    return ech


def same_span(rows_a, rows_b, field) -> bool:
    a = row_space(rows_a, field)
    b = row_space(rows_b, field)
    if a.rank != b.rank:
        return False
    return all(a.contains(r) for r in b.pivots.values())


def dense_to_sparse(mat: Matrix) -> list[dict]:
    return [{j: x for j, x in enumerate(r) if x} for r in mat.data]


def rank(mat: Matrix) -> int:
    return row_space(dense_to_sparse(mat), mat.field).rank


def nullspace(mat: Matrix) -> list[list]:
    """Basis of the right kernel as dense column vectors."""
    ech = row_space(dense_to_sparse(mat), mat.field)
    z = mat.field.zero
    out = []
    for vec in ech.nullspace(range(mat.cols)):
        dense = [z] * mat.cols
        for c, v in vec.items():
            dense[c] = v
        out.append(dense)
    return out


def column_space_basis(mat: Matrix) -> list[int]:
    """Indices of a maximal set of independent columns (first-come order)."""
    ech = Echelon(mat.field)
    chosen = []
    for j in range(mat.cols):
        if ech.add({i: mat.data[i][j] for i in range(mat.rows) if mat.data[i][j]}) is not None:
            chosen.append(j)
    return chosen


def inverse(mat: Matrix) -> Matrix:
    if mat.rows != mat.cols:
        raise ValueError("only square matrices have inverses")
    size = mat.rows
    field = mat.field
    ech = Echelon(field)
    for i, r in enumerate(mat.data):
        row = {j: x for j, x in enumerate(r) if x}
        row[size + i] = field.one
        ech.add(row)
    if any(c >= size for c in ech.pivots) or ech.rank < size:
        raise ZeroDivisionError("singular matrix")
    out = Matrix.zeros(field, size, size)
    for pc, prow in ech.pivots.items():
        for c, v in prow.items():
            if c >= size:
                out.data[pc][c - size] = v
    return out


def is_invertible(mat: Matrix) -> bool:
    return mat.rows == mat.cols and rank(mat) == mat.rows


def determinant(mat: Matrix):
    """Determinant by fraction-aware Gaussian elimination."""
    if mat.rows != mat.cols:
        raise ValueError("determinant of a non-square matrix")
    field = mat.field
    a = [list(r) for r in mat.data]
    size = mat.rows
    det = field.one
    for col in range(size):
        piv = next((r for r in range(col, size) if a[r][col]), None)
        if piv is None:
            return field.zero
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, size):
            f = a[r][col]
            if f:
                f = f * inv
                a[r] = [x - f * y if y else x for x, y in zip(a[r], a[col])]
    return det


def solve(mat: Matrix, rhs: list) -> list | None:
    """One solution x of mat @ x = rhs, or None."""
    field = mat.field
    ech = Echelon(field)
    marker = mat.cols
    for r, b in zip(mat.data, rhs):
        row = {j: x for j, x in enumerate(r) if x}
        if b:
            row[marker] = b
        ech.add(row)
    if marker in ech.pivots:
        return None
    x = [field.zero] * mat.cols
    for pc, prow in ech.pivots.items():
        x[pc] = prow.get(marker, field.zero)
    return x
