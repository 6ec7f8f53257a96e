"""Finite-dimensional graded H_n-modules and graded linear maps between them.

A module stores, for each degree i, the dimension of its degree-i component
and, for each prime index k (0-based internally), the matrix of d_k from
degree i to degree i + n_k.  Matrices act on column vectors; missing blocks
are zero.  K acts on degree i by q^i, so it is never stored.

Vectors are dicts ``degree -> list of coordinates``.
"""
from __future__ import annotations

import random
from itertools import product as iproduct

from .arith.laurent import LaurentPolynomial
from .hopf import HnStructure, BosonizedElement, antipode_inverse
from .linalg import Echelon, Matrix, inverse, is_invertible, rank, determinant


class ModuleError(ValueError):
    pass


class ShapeMismatch(ModuleError):
    pass


class NilpotencyViolation(ModuleError):
    pass


class CommutationViolation(ModuleError):
    pass


def _mat(H, rows, cols, data=None) -> Matrix:
    return Matrix(H.field, rows, cols, data)


class GradedModule:
    """A graded H_n-module given by commuting nilpotent action matrices."""

    def __init__(self, structure: HnStructure, dims: dict, actions=None, check: bool = True,
                 name: str = ""):
        self.structure = structure
        self.dims = {int(i): int(d) for i, d in dims.items() if d}
        if any(d < 0 for d in self.dims.values()):
            raise ShapeMismatch("negative dimension")
        actions = actions or [{} for _ in range(structure.t)]
        if len(actions) != structure.t:
            raise ShapeMismatch(f"expected {structure.t} action families, got {len(actions)}")
        self.actions = [dict(a) for a in actions]
        self.name = name
        self._check_shapes()
        for k, fam in enumerate(self.actions):
            for i in [i for i, m in fam.items() if m.is_zero()]:
                del fam[i]
        if check:
            self._check_relations()

    # construction checks -----------------------------------------------------------

    def _check_shapes(self):
        H = self.structure
        for k, fam in enumerate(self.actions):
            for i, mat in fam.items():
                tgt = i + H.nk[k]
                want = (self.dim_at(tgt), self.dim_at(i))
                if mat.shape != want:
                    if not mat.is_zero() or 0 not in want:
                        raise ShapeMismatch(
                            f"d{k + 1} from degree {i}: matrix shape {mat.shape}, "
                            f"expected {want} (degree {i} -> {tgt})")

    def _check_relations(self):
        H = self.structure
        for k in range(H.t):
            p, step = H.ps[k], H.nk[k]
            for i in self.dims:
                if self.dim_at(i + p * step) == 0:
                    continue
                power = self.action_power(k, p, i)
                if not power.is_zero():
                    raise NilpotencyViolation(f"d{k + 1}^{p} is nonzero starting at degree {i}")
        for k in range(H.t):
            for l in range(k + 1, H.t):
                for i in self.dims:
                    tgt = i + H.nk[k] + H.nk[l]
                    if self.dim_at(tgt) == 0:
                        continue
                    lk = self.block(l, i + H.nk[k]) @ self.block(k, i)
                    kl = self.block(k, i + H.nk[l]) @ self.block(l, i)
                    if lk != kl:
                        raise CommutationViolation(
                            f"d{k + 1} and d{l + 1} do not commute at degree {i}")

    # basic data ---------------------------------------------------------------------

    @property
    def field(self):
        return self.structure.field

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    def dim_at(self, i: int) -> int:
        return self.dims.get(i, 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def __len__(self):
        return self.total_dim

    def is_zero(self) -> bool:
        return not self.dims

    def graded_dimension(self) -> LaurentPolynomial:
        return LaurentPolynomial.from_dict(self.dims)

    dim_nu = graded_dimension

    def block(self, k: int, i: int) -> Matrix:
        """Matrix of d_{k+1} from degree i (0-based k); zero if absent."""
        mat = self.actions[k].get(i)
        if mat is None:
            return _mat(self.structure, self.dim_at(i + self.structure.nk[k]), self.dim_at(i))
        return mat

    def action_power(self, k: int, power: int, i: int) -> Matrix:
        step = self.structure.nk[k]
        out = Matrix.identity(self.field, self.dim_at(i))
        for r in range(power):
            out = self.block(k, i + r * step) @ out
        return out

    def monomial_action(self, a, i: int) -> Matrix:
        """Matrix of d^a from degree i."""
        H = self.structure
        out = Matrix.identity(self.field, self.dim_at(i))
        deg = i
        for k, e in enumerate(a):
            for _ in range(e):
                out = self.block(k, deg) @ out
                deg += H.nk[k]
        return out

    def element_action(self, h: BosonizedElement, i: int) -> dict:
        """Action of a bosonization element on degree i, as ``target degree -> Matrix``."""
        H = self.structure
        out: dict = {}
        for (a, j), c in h.terms.items():
            scal = c * H.q(j * i)
            tgt = i + H.degree(a)
            mat = self.monomial_action(a, i).scale(scal)
            out[tgt] = out[tgt] + mat if tgt in out else mat
        return out

    def lambda_action(self, i: int) -> Matrix:
        return self.monomial_action(self.structure.top, i)

    # vectors ------------------------------------------------------------------------

    def zero_vector(self) -> dict:
        return {}

    def basis_vector(self, i: int, idx: int) -> dict:
        vec = [self.field.zero] * self.dim_at(i)
        vec[idx] = self.field.one
        return {i: vec}

    def basis(self):
        for i in self.degrees:
            for idx in range(self.dims[i]):
                yield (i, idx)

    def act(self, k: int, vec: dict) -> dict:
        out = {}
        step = self.structure.nk[k]
        for i, coords in vec.items():
            if self.dim_at(i + step) == 0:
                continue
            img = self.block(k, i).apply(coords)
            if any(img):
                out[i + step] = img
        return out

    def __eq__(self, other):
        if not isinstance(other, GradedModule):
            return NotImplemented
        return (self.structure is other.structure and self.dims == other.dims
                and all(a == b for a, b in zip(self.actions, other.actions)))

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<GradedModule{label} n={self.structure.n} dim={self.total_dim} dim_v={self.graded_dimension()}>"


# --- maps -----------------------------------------------------------------------------

class ModuleMap:
    """Graded linear map of fixed degree: block i sends source degree i to target degree i + degree."""

    def __init__(self, source: GradedModule, target: GradedModule, degree: int = 0, blocks=None):
        if source.structure is not target.structure:
            raise ModuleError("source and target have different structures")
        self.source = source
        self.target = target
        self.degree = degree
        self.blocks = {}
        for i, mat in (blocks or {}).items():
            want = (target.dim_at(i + degree), source.dim_at(i))
            if mat.shape != want:
                if mat.is_zero() and 0 in want:
                    continue
                raise ShapeMismatch(f"map block at degree {i}: shape {mat.shape}, expected {want}")
            if not mat.is_zero():
                self.blocks[i] = mat
        self._intertwiner = None

    @property
    def structure(self):
        return self.source.structure

    @property
    def field(self):
        return self.source.field

    def block(self, i: int) -> Matrix:
        mat = self.blocks.get(i)
        if mat is None:
            return Matrix.zeros(self.field, self.target.dim_at(i + self.degree), self.source.dim_at(i))
        return mat

    @classmethod
    def zero(cls, source, target, degree=0) -> ModuleMap:
        return cls(source, target, degree, {})

    @classmethod
    def identity(cls, module: GradedModule) -> ModuleMap:
        F = module.field
        return cls(module, module, 0, {i: Matrix.identity(F, d) for i, d in module.dims.items()})

    def is_zero(self) -> bool:
        return not self.blocks

    def __call__(self, vec: dict) -> dict:
        out = {}
        for i, coords in vec.items():
            if i in self.blocks:
                img = self.blocks[i].apply(coords)
                if any(img):
                    out[i + self.degree] = img
        return out

    def compose(self, other: ModuleMap) -> ModuleMap:
        """self after other."""
        if other.target is not self.source and not _same_shape(other.target, self.source):
            raise ModuleError("composition of incompatible maps")
        blocks = {}
        for i, mat in other.blocks.items():
            j = i + other.degree
            if j in self.blocks:
                blocks[i] = self.blocks[j] @ mat
        return ModuleMap(other.source, self.target, self.degree + other.degree, blocks)

    __matmul__ = compose

    def __add__(self, other: ModuleMap) -> ModuleMap:
        if other.degree != self.degree:
            raise ModuleError("adding maps of different degrees")
        blocks = dict(self.blocks)
        for i, mat in other.blocks.items():
            blocks[i] = blocks[i] + mat if i in blocks else mat
        return ModuleMap(self.source, self.target, self.degree, blocks)

    def __neg__(self):
        return self.scale(-self.field.one)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> ModuleMap:
        c = self.field.coerce(c)
        return ModuleMap(self.source, self.target, self.degree,
                         {i: m.scale(c) for i, m in self.blocks.items()})

    def __eq__(self, other):
        if not isinstance(other, ModuleMap):
            return NotImplemented
        return self.degree == other.degree and self.blocks == other.blocks

    def is_intertwiner(self) -> bool:
        """f d_k = d_k f for every k, checked blockwise."""
        if self._intertwiner is None:
            H = self.structure
            ok = True
            for k in range(H.t):
                step = H.nk[k]
                for i in self.source.dims:
                    if self.target.dim_at(i + self.degree + step) == 0:
                        continue
                    lhs = self.block(i + step) @ self.source.block(k, i)
                    rhs = self.target.block(k, i + self.degree) @ self.block(i)
                    if lhs != rhs:
                        ok = False
                        break
                if not ok:
                    break
            self._intertwiner = ok
        return self._intertwiner

    def is_invertible(self) -> bool:
        if self.degree != 0 or self.source.dims != self.target.dims:
            return False
        return all(is_invertible(self.block(i)) for i in self.source.dims)

    def inverse(self) -> ModuleMap:
        if not self.is_invertible():
            raise ModuleError("map is not invertible")
        return ModuleMap(self.target, self.source, 0, {i: inverse(m) for i, m in self.blocks.items()})

    def flatten(self) -> dict:
        """Sparse coordinates keyed by (source degree, row, col)."""
        out = {}
        for i, mat in self.blocks.items():
            for r, row in enumerate(mat.data):
                for c, x in enumerate(row):
                    if x:
                        out[(i, r, c)] = x
        return out

    def rank(self) -> int:
        return sum(rank(m) for m in self.blocks.values())

    def __repr__(self):
        return f"<ModuleMap degree={self.degree} {self.source!r} -> {self.target!r}>"


def _same_shape(a: GradedModule, b: GradedModule) -> bool:
    return a.dims == b.dims


def map_from_flat(source, target, degree, vec: dict) -> ModuleMap:
    F = source.field
    blocks: dict = {}
    for (i, r, c), x in vec.items():
        if i not in blocks:
            blocks[i] = Matrix.zeros(F, target.dim_at(i + degree), source.dim_at(i))
        blocks[i].data[r][c] = x
    return ModuleMap(source, target, degree, blocks)


def linear_combination(maps, coeffs) -> ModuleMap:
    maps = list(maps)
    out = maps[0].scale(coeffs[0])
    for f, c in zip(maps[1:], coeffs[1:]):
        if c:
            out = out + f.scale(c)
    return out


# --- standard modules ---------------------------------------------------------------------

def _check_prime_index(H, k):
    if not 1 <= k <= H.t:
        raise IndexError(f"prime index k={k} out of range 1..{H.t} for n={H.n}")


def trivial(H: HnStructure, b: int = 0) -> GradedModule:
    """k{b}: one-dimensional, sitting in degree -b."""
    return GradedModule(H, {-b: 1}, name=f"k{{{b}}}")


def string_module(H: HnStructure, k: int, length: int, start: int = 0) -> GradedModule:
    """d_k-string of the given length starting in degree ``start`` (k counted from 1)."""
    _check_prime_index(H, k)
    if not 1 <= length <= H.ps[k - 1]:
        raise ValueError(f"string length must be in 1..{H.ps[k - 1]}")
    step = H.nk[k - 1]
    F = H.field
    dims = {start + r * step: 1 for r in range(length)}
    actions = [{} for _ in range(H.t)]
    for r in range(length - 1):
        actions[k - 1][start + r * step] = Matrix(F, 1, 1, [[F.one]])
    return GradedModule(H, dims, actions, name=f"string{k}x{length}")


def v_k(H: HnStructure, k: int, b: int = 0) -> GradedModule:
    """V_k{b}: the p_k-dimensional d_k-string, generator in degree -b."""
    M = string_module(H, k, H.ps[k - 1], -b)
    M.name = f"V{k}{{{b}}}"
    return M


def free(H: HnStructure, b: int = 0) -> GradedModule:
    """H_n{b}, the regular module with basis d^a in degree deg(a) - b."""
    F = H.field
    dims: dict = {}
    position = {}
    for a in H.exponents:
        deg = H.degree(a) - b
        position[a] = (deg, dims.get(deg, 0))
        dims[deg] = dims.get(deg, 0) + 1
    actions = [{} for _ in range(H.t)]
    for a in H.exponents:
        deg, idx = position[a]
        for k in range(H.t):
            if a[k] + 1 >= H.ps[k]:
                continue
            a2 = tuple(x + (1 if j == k else 0) for j, x in enumerate(a))
            deg2, idx2 = position[a2]
            fam = actions[k]
            if deg not in fam:
                fam[deg] = Matrix.zeros(F, dims[deg2], dims[deg])
            fam[deg].data[idx2][idx] = F.one
    M = GradedModule(H, dims, actions, name=f"H{{{b}}}")
    M.monomial_position = position
    return M


def _from_arrows(H, vectors: dict, arrows) -> GradedModule:
    """Module from named basis vectors (name -> degree) and arrows (k, src, dst)."""
    F = H.field
    dims: dict = {}
    pos = {}
    for name, deg in vectors.items():
        pos[name] = (deg, dims.get(deg, 0))
        dims[deg] = dims.get(deg, 0) + 1
    actions = [{} for _ in range(H.t)]
    for k, src, dst in arrows:
        (d1, i1), (d2, i2) = pos[src], pos[dst]
        if d2 - d1 != H.nk[k - 1]:
            raise ShapeMismatch(f"arrow d{k} {src}->{dst} has wrong degree step")
        fam = actions[k - 1]
        if d1 not in fam:
            fam[d1] = Matrix.zeros(F, dims[d2], dims[d1])
        fam[d1].data[i2][i1] = F.one
    M = GradedModule(H, dims, actions)
    M.named_basis = pos
    return M


def _two_prime_k(H):
    if H.n % 6 or H.ps[:2] != [2, 3] or H.t != 2:
        raise ModuleError(f"two-prime examples need n = 2^a 3^b divisible by 6, got n={H.n}")
    return H.n // 6


def example_V(H: HnStructure) -> GradedModule:
    """Extension of V_2 by V_2{-k}, n = 6k: rows 0,2k,4k and k,3k,5k joined by d_1."""
    k = _two_prime_k(H)
    vec = {"t0": 0, "t1": 2 * k, "t2": 4 * k, "b0": k, "b1": 3 * k, "b2": 5 * k}
    arrows = [(2, "t0", "t1"), (2, "t1", "t2"), (2, "b0", "b1"), (2, "b1", "b2"),
              (1, "t0", "b1"), (1, "t1", "b2")]
    M = _from_arrows(H, vec, arrows)
    M.name = "V"
    return M


def example_Vprime(H: HnStructure) -> GradedModule:
    """Rows 0,2k,4k and 3k,5k,7k with d_1 vertical everywhere (the free module)."""
    k = _two_prime_k(H)
    vec = {"t0": 0, "t1": 2 * k, "t2": 4 * k, "b0": 3 * k, "b1": 5 * k, "b2": 7 * k}
    arrows = [(2, "t0", "t1"), (2, "t1", "t2"), (2, "b0", "b1"), (2, "b1", "b2"),
              (1, "t0", "b0"), (1, "t1", "b1"), (1, "t2", "b2")]
    M = _from_arrows(H, vec, arrows)
    M.name = "V'"
    return M


def example_Vdoubleprime(H: HnStructure) -> GradedModule:
    """Extension of V_2 by V_2{k}: rows 0,2k,4k and -k,k,3k with one d_1 arrow 0 -> 3k."""
    k = _two_prime_k(H)
    vec = {"t0": 0, "t1": 2 * k, "t2": 4 * k, "b0": -k, "b1": k, "b2": 3 * k}
    arrows = [(2, "t0", "t1"), (2, "t1", "t2"), (2, "b0", "b1"), (2, "b1", "b2"),
              (1, "t0", "b2")]
    M = _from_arrows(H, vec, arrows)
    M.name = "V''"
    return M


def example_I_three_primes(H: HnStructure) -> GradedModule:
    """n = 30k: a d_2-string from -n_1 glued by d_1 onto the top of a d_3-string ending in 0."""
    if H.ps[:3] != [2, 3, 5] or H.t != 3:
        raise ModuleError(f"three-prime example needs n divisible by 30 with primes 2,3,5, got n={H.n}")
    n1, n2, n3 = H.nk
    vec = {"t0": -n1, "t1": -n1 + n2, "t2": -n1 + 2 * n2}
    vec.update({f"b{r}": -4 * n3 + r * n3 for r in range(5)})
    arrows = [(2, "t0", "t1"), (2, "t1", "t2")]
    arrows += [(3, f"b{r}", f"b{r + 1}") for r in range(4)]
    arrows.append((1, "t0", "b4"))
    M = _from_arrows(H, vec, arrows)
    M.name = "three-prime"
    return M


# --- monoidal structure -----------------------------------------------------------------

class _Layout:
    """Ordering of a graded tensor product: component s = sum over i of M^i (x) N^{s-i}."""

    def __init__(self, M: GradedModule, N: GradedModule):
        self.offsets: dict = {}
        dims: dict = {}
        for i in M.degrees:
            for j in N.degrees:
                s = i + j
                self.offsets[(i, j)] = dims.get(s, 0)
                dims[s] = dims.get(s, 0) + M.dims[i] * N.dims[j]
        self.dims = dims
        self.M, self.N = M, N

    def index(self, i, x, j, y) -> int:
        return self.offsets[(i, j)] + x * self.N.dims[j] + y


def tensor(M: GradedModule, N: GradedModule, variant: str = "q", check: bool = False) -> GradedModule:
    """M (x) N with d_k(x (x) y) = d_k x (x) y + xi_k^{+-deg x} x (x) d_k y."""
    if M.structure is not N.structure:
        raise ModuleError("tensor of modules over different structures")
    if variant not in ("q", "q_inverse"):
        raise ValueError("variant must be 'q' or 'q_inverse'")
    H = M.structure
    F = H.field
    sign = 1 if variant == "q" else -1
    lay = _Layout(M, N)
    actions = [{} for _ in range(H.t)]
    for k in range(H.t):
        step = H.nk[k]
        fam = actions[k]
        for (i, j) in lay.offsets:
            s = i + j
            if lay.dims.get(s + step, 0) == 0:
                continue
            if s not in fam:
                fam[s] = Matrix.zeros(F, lay.dims[s + step], lay.dims[s])
            out = fam[s].data
            dm = N.dims[j]
            if M.dim_at(i + step):
                A = M.block(k, i)
                for x2, row in enumerate(A.data):
                    for x, c in enumerate(row):
                        if c:
                            for y in range(dm):
                                out[lay.index(i + step, x2, j, y)][lay.index(i, x, j, y)] = c
            if N.dim_at(j + step):
                B = N.block(k, j)
                tw = H.q(sign * step * i)
                for y2, row in enumerate(B.data):
                    for y, c in enumerate(row):
                        if c:
                            val = tw * c
                            for x in range(M.dims[i]):
                                r = lay.index(i, x, j + step, y2)
                                cidx = lay.index(i, x, j, y)
                                out[r][cidx] = out[r][cidx] + val
    T = GradedModule(H, lay.dims, actions, check=check)
    T.layout = lay
    T.variant = variant
    return T


def tensor_maps(f: ModuleMap, g: ModuleMap, source: GradedModule, target: GradedModule) -> ModuleMap:
    """f (x) g between tensor products built by ``tensor`` (degree-0 maps)."""
    if f.degree or g.degree:
        raise ModuleError("tensor_maps supports degree-0 maps")
    ls, lt = source.layout, target.layout
    F = f.field
    blocks = {s: Matrix.zeros(F, target.dim_at(s), d) for s, d in source.dims.items()}
    for (i, j) in ls.offsets:
        fi, gj = f.block(i), g.block(j)
        for x2, frow in enumerate(fi.data):
            for x, a in enumerate(frow):
                if not a:
                    continue
                for y2, grow in enumerate(gj.data):
                    for y, b in enumerate(grow):
                        if b:
                            blocks[i + j].data[lt.index(i, x2, j, y2)][ls.index(i, x, j, y)] = (
                                blocks[i + j].data[lt.index(i, x2, j, y2)][ls.index(i, x, j, y)] + a * b)
    return ModuleMap(source, target, 0, blocks)


def shift(M: GradedModule, b: int) -> GradedModule:
    """M{b}, with (M{b})^i = M^{i+b}."""
    dims = {i - b: d for i, d in M.dims.items()}
    actions = [{i - b: m for i, m in fam.items()} for fam in M.actions]
    out = GradedModule(M.structure, dims, actions, check=False)
    out.name = f"{M.name}{{{b}}}" if M.name else ""
    return out


def shift_map(f: ModuleMap, source: GradedModule, target: GradedModule, b: int) -> ModuleMap:
    return ModuleMap(source, target, f.degree, {i - b: m for i, m in f.blocks.items()})


def direct_sum(*modules: GradedModule) -> GradedModule:
    if not modules:
        raise ValueError("direct_sum needs at least one module")
    H = modules[0].structure
    F = H.field
    dims: dict = {}
    offsets = []
    for M in modules:
        off = {}
        for i, d in M.dims.items():
            off[i] = dims.get(i, 0)
            dims[i] = dims.get(i, 0) + d
        offsets.append(off)
    actions = [{} for _ in range(H.t)]
    for k in range(H.t):
        step = H.nk[k]
        for M, off in zip(modules, offsets):
            for i, mat in M.actions[k].items():
                fam = actions[k]
                if i not in fam:
                    fam[i] = Matrix.zeros(F, dims[i + step], dims[i])
                r0, c0 = off[i + step], off[i]
                for r, row in enumerate(mat.data):
                    fam[i].data[r0 + r][c0:c0 + len(row)] = row
    S = GradedModule(H, dims, actions, check=False)
    S.summand_offsets = offsets
    S.summands = modules
    return S


def summand_inclusion(S: GradedModule, idx: int) -> ModuleMap:
    M, off = S.summands[idx], S.summand_offsets[idx]
    F = S.field
    blocks = {}
    for i, d in M.dims.items():
        mat = Matrix.zeros(F, S.dims[i], d)
        for r in range(d):
            mat.data[off[i] + r][r] = F.one
        blocks[i] = mat
    return ModuleMap(M, S, 0, blocks)


def summand_projection(S: GradedModule, idx: int) -> ModuleMap:
    M, off = S.summands[idx], S.summand_offsets[idx]
    F = S.field
    blocks = {}
    for i, d in M.dims.items():
        mat = Matrix.zeros(F, d, S.dims[i])
        for r in range(d):
            mat.data[r][off[i] + r] = F.one
        blocks[i] = mat
    return ModuleMap(S, M, 0, blocks)


def dual(M: GradedModule) -> GradedModule:
    """M* with (M*)^j = Hom(M^{-j}, k) and (h f)(x) = f(S^{-1}(h) x).

    The action matrices are the transposes of the action of S^{-1}(d_k) on M,
    computed from the bosonization rather than from a closed formula.
    """
    H = M.structure
    dims = {-i: d for i, d in M.dims.items()}
    actions = [{} for _ in range(H.t)]
    for k in range(H.t):
        sinv = antipode_inverse(H.d(k + 1))
        step = H.nk[k]
        for j in dims:
            # (d_k f)(x) for x in M^{-j-step}, f in (M*)^j
            src = -j - step
            if M.dim_at(src) == 0:
                continue
            images = M.element_action(sinv, src)
            mat = images.get(-j)
            if mat is not None and not mat.is_zero():
                actions[k][j] = mat.transpose()
    D = GradedModule(H, dims, actions, check=False)
    D.name = f"{M.name}*" if M.name else ""
    return D


def internal_hom(M: GradedModule, N: GradedModule) -> GradedModule:
    """Hom(M, N) realized as M* (x) N."""
    return tensor(dual(M), N)


class _HomLayout:
    """Coordinates of Hom^s(M, N) = sum over i of Hom(M^i, N^{i+s}); entry (r, c) of block i."""

    def __init__(self, M, N):
        self.offsets: dict = {}
        dims: dict = {}
        for i in M.degrees:
            for j in N.degrees:
                s = j - i
                self.offsets[(s, i)] = dims.get(s, 0)
                dims[s] = dims.get(s, 0) + N.dims[j] * M.dims[i]
        self.dims = dims
        self.M, self.N = M, N

    def index(self, s, i, r, c) -> int:
        return self.offsets[(s, i)] + r * self.M.dims[i] + c


def internal_hom_direct(M: GradedModule, N: GradedModule) -> GradedModule:
    """Hom(M, N) on blocks with (d_k f)(v) = xi_k^{-deg v} (d_k f(v) - f(d_k v))."""
    H = M.structure
    F = H.field
    lay = _HomLayout(M, N)
    actions = [{} for _ in range(H.t)]
    for k in range(H.t):
        step = H.nk[k]
        fam = actions[k]
        for (s, i) in lay.offsets:
            if lay.dims.get(s + step, 0) == 0:
                continue
            if s not in fam:
                fam[s] = Matrix.zeros(F, lay.dims[s + step], lay.dims[s])
            out = fam[s].data
            tw = H.q(-step * i)
            dimc = M.dims[i]
            j = i + s
            # d_k f(v): block (s, i) -> block (s + step, i), rows pushed by B = d_k on N^j
            if N.dim_at(j + step):
                B = N.block(k, j)
                for r2, row in enumerate(B.data):
                    for r, c in enumerate(row):
                        if c:
                            val = tw * c
                            for col in range(dimc):
                                out[lay.index(s + step, i, r2, col)][lay.index(s, i, r, col)] += val
        # -f(d_k v): block (s, i + step) -> block (s + step, i), columns pulled by A = d_k on M^i
        for (s2, i) in lay.offsets:
            s = s2 - step
            if (s, i + step) not in lay.offsets:
                continue
            if s not in fam:
                fam[s] = Matrix.zeros(F, lay.dims[s2], lay.dims[s])
            out = fam[s].data
            tw = H.q(-step * i)
            A = M.block(k, i)
            for c2, row in enumerate(A.data):
                for col, c in enumerate(row):
                    if c:
                        val = -tw * c
                        for r in range(N.dim_at(i + s2)):
                            out[lay.index(s2, i, r, col)][lay.index(s, i + step, r, c2)] += val
    Hm = GradedModule(H, lay.dims, actions, check=False)
    Hm.hom_layout = lay
    return Hm


def hom_element_to_map(Hm: GradedModule, s: int, coords: list) -> ModuleMap:
    """Read a degree-s element of ``internal_hom_direct`` as a map M -> N of degree s."""
    lay = Hm.hom_layout
    M, N = lay.M, lay.N
    F = M.field
    blocks = {}
    for (s2, i), off in lay.offsets.items():
        if s2 != s:
            continue
        rows, cols = N.dims[i + s], M.dims[i]
        blocks[i] = Matrix(F, rows, cols,
                           [[coords[off + r * cols + c] for c in range(cols)] for r in range(rows)])
    return ModuleMap(M, N, s, blocks)


def canonical_dual_tensor_to_hom(M: GradedModule, N: GradedModule, T=None, Hm=None) -> ModuleMap:
    """phi (x) y |-> phi(-) y from M* (x) N to the direct internal hom."""
    T = T or internal_hom(M, N)
    Hm = Hm or internal_hom_direct(M, N)
    F = M.field
    lt, lh = T.layout, Hm.hom_layout
    blocks = {s: Matrix.zeros(F, Hm.dim_at(s), d) for s, d in T.dims.items()}
    # basis phi_c of (M*)^{-i} is dual to basis vector c of M^i
    for (negi, j) in lt.offsets:
        i = -negi
        s = negi + j
        for c in range(M.dims[i]):
            for r in range(N.dims[j]):
                blocks[s].data[lh.index(s, i, r, c)][lt.index(negi, c, j, r)] = F.one
    return ModuleMap(T, Hm, 0, blocks)


# --- hom spaces ---------------------------------------------------------------------------

def hom_space(M: GradedModule, N: GradedModule, j: int = 0) -> list[ModuleMap]:
    """Basis of degree-j module maps M -> N (solutions of f d_k = d_k f)."""
    if M.structure is not N.structure:
        raise ModuleError("hom between modules over different structures")
    H = M.structure
    F = H.field
    unknowns = []
    for i in M.degrees:
        if N.dim_at(i + j):
            for r in range(N.dims[i + j]):
                for c in range(M.dims[i]):
                    unknowns.append((i, r, c))
    if not unknowns:
        return []
    ech = Echelon(F)
    for k in range(H.t):
        step = H.nk[k]
        for i in M.degrees:
            tgt = i + j + step
            if N.dim_at(tgt) == 0:
                continue
            A = M.block(k, i)            # M^i -> M^{i+step}
            B = N.block(k, i + j)        # N^{i+j} -> N^{tgt}
            src_ok = N.dim_at(i + j) > 0
            nxt_ok = M.dim_at(i + step) > 0
            for r in range(N.dims[tgt]):
                for c in range(M.dims[i]):
                    row: dict = {}
                    if src_ok:
                        for s, b in enumerate(B.data[r]):
                            if b:
                                key = (i, s, c)
                                row[key] = row[key] + b if key in row else b
                    if nxt_ok:
                        for s in range(M.dims[i + step]):
                            a = A.data[s][c]
                            if a:
                                key = (i + step, r, s)
                                row[key] = row[key] - a if key in row else -a
                    if row:
                        ech.add(row)
    return [map_from_flat(M, N, j, vec) for vec in ech.nullspace(unknowns)]


def hom_dimension(M, N, j=0) -> int:
    return len(hom_space(M, N, j))


def invariants(M: GradedModule, degree: int) -> list[list]:
    """Degree-``degree`` vectors killed by every d_k."""
    H = M.structure
    F = H.field
    dim = M.dim_at(degree)
    if not dim:
        return []
    ech = Echelon(F)
    for k in range(H.t):
        if M.dim_at(degree + H.nk[k]):
            for row in M.block(k, degree).data:
                ech.add({c: x for c, x in enumerate(row) if x})
    out = []
    for vec in ech.nullspace(range(dim)):
        dense = [F.zero] * dim
        for c, x in vec.items():
            dense[c] = x
        out.append(dense)
    return out


# --- isomorphism search -------------------------------------------------------------------

class IsoResult:
    def __init__(self, iso: ModuleMap | None, certified: bool, reason: str):
        self.iso = iso
        self.certified = certified
        self.reason = reason

    def __bool__(self):
        return self.iso is not None

    def __repr__(self):
        return f"IsoResult(found={self.iso is not None}, certified={self.certified}, {self.reason!r})"


def isomorphism_search(M: GradedModule, N: GradedModule, seed: int = 0, tries: int = 12,
                       grid_limit: int = 20000) -> IsoResult:
    if M.dims != N.dims:
        return IsoResult(None, True, "graded dimensions differ")
    if M.is_zero():
        return IsoResult(ModuleMap.identity(M), True, "both zero")
    basis = hom_space(M, N, 0)
    if not basis:
        return IsoResult(None, True, "no degree-0 module maps")
    for f in basis:
        if f.is_invertible():
            return IsoResult(f, True, "basis element")
    F = M.field
    rng = random.Random(seed)
    for _ in range(tries):
        coeffs = [F.from_int(rng.randint(-10**6, 10**6)) for _ in basis]
        f = linear_combination(basis, coeffs)
        if f.is_invertible():
            return IsoResult(f, True, "random combination")
    # deterministic grid search: a block determinant polynomial of degree d in h
    # variables vanishing on a (d+1)^h grid is identically zero
    h = len(basis)
    degs = {i: d for i, d in M.dims.items()}
    for i, d in degs.items():
        if (d + 1) ** h > grid_limit:
            return IsoResult(None, False, "search exhausted; grid too large to certify")
        found = False
        for pt in iproduct(range(d + 1), repeat=h):
            mat = None
            for f, c in zip(basis, pt):
                if c:
                    term = f.block(i).scale(F.from_int(c))
                    mat = term if mat is None else mat + term
            if mat is not None and determinant(mat):
                found = True
                break
        if not found:
            return IsoResult(None, True, f"determinant vanishes identically at degree {i}")
    total = sum(degs.values())
    if (total + 1) ** h > grid_limit:
        return IsoResult(None, False, "search exhausted; grid too large to certify")
    for pt in iproduct(range(total + 1), repeat=h):
        f = linear_combination(basis, [F.from_int(c) for c in pt])
        if f.is_invertible():
            return IsoResult(f, True, "grid point")
    return IsoResult(None, True, "product of block determinants vanishes")


def is_isomorphic(M: GradedModule, N: GradedModule, seed: int = 0) -> ModuleMap | None:
    return isomorphism_search(M, N, seed).iso


# --- braiding ------------------------------------------------------------------------------

def braiding_iso(V: GradedModule, W: GradedModule, VW=None, WV=None) -> ModuleMap:
    """v (x) w |-> q^{-ij} w (x) v from V (x)_q W to W (x)_{q^-1} V."""
    H = V.structure
    F = H.field
    VW = VW or tensor(V, W, "q")
    WV = WV or tensor(W, V, "q_inverse")
    ls, lt = VW.layout, WV.layout
    blocks = {s: Matrix.zeros(F, WV.dim_at(s), d) for s, d in VW.dims.items()}
    for (i, j) in ls.offsets:
        scal = H.q(-i * j)
        for x in range(V.dims[i]):
            for y in range(W.dims[j]):
                blocks[i + j].data[lt.index(j, y, i, x)][ls.index(i, x, j, y)] = scal
    return ModuleMap(VW, WV, 0, blocks)


# --- submodules and quotients -------------------------------------------------------------------

class _Coordinates:
    """Left inverse of a full-column-rank block, for expressing vectors in a chosen basis."""

    def __init__(self, F, columns: list[list], dim: int):
        self.columns = columns
        self.dim = dim
        self.F = F
        ncol = len(columns)
        mat = Matrix(F, dim, ncol, [[columns[c][r] for c in range(ncol)] for r in range(dim)])
        ech = Echelon(F)
        rows = []
        for r in range(dim):
            if ech.add({c: x for c, x in enumerate(mat.data[r]) if x}) is not None:
                rows.append(r)
        if len(rows) != ncol:
            raise ModuleError("basis vectors are dependent")
        self.rows = rows
        self.inv = inverse(Matrix(F, ncol, ncol, [mat.data[r] for r in rows]))

    def __call__(self, vec: list) -> list:
        return self.inv.apply([vec[r] for r in self.rows])


def _span_closure(M: GradedModule, generators) -> dict:
    """Degreewise bases (lists of dense vectors) of the submodule generated by vectors."""
    F = M.field
    H = M.structure
    echs: dict = {}
    bases: dict = {}
    queue = []
    for g in generators:
        for i, coords in g.items():
            if any(coords):
                queue.append((i, list(coords)))
    if any(len({i for i, c in g.items() if any(c)}) > 1 for g in generators):
        raise ModuleError("submodule generators must be homogeneous")
    while queue:
        i, v = queue.pop()
        ech = echs.setdefault(i, Echelon(F))
        if ech.add({c: x for c, x in enumerate(v) if x}) is None:
            continue
        bases.setdefault(i, []).append(v)
        for k in range(H.t):
            if M.dim_at(i + H.nk[k]):
                w = M.block(k, i).apply(v)
                if any(w):
                    queue.append((i + H.nk[k], w))
    return bases


def submodule(M: GradedModule, generators) -> tuple[GradedModule, ModuleMap]:
    """Submodule generated by homogeneous vectors, with its inclusion map."""
    bases = _span_closure(M, generators)
    return submodule_from_bases(M, bases)


def submodule_from_bases(M: GradedModule, bases: dict) -> tuple[GradedModule, ModuleMap]:
    H = M.structure
    F = H.field
    dims = {i: len(b) for i, b in bases.items() if b}
    coords = {i: _Coordinates(F, bases[i], M.dims[i]) for i in dims}
    actions = [{} for _ in range(H.t)]
    for k in range(H.t):
        step = H.nk[k]
        for i in dims:
            if i + step not in dims:
                continue
            cols = [coords[i + step](M.block(k, i).apply(v)) for v in bases[i]]
            mat = Matrix(F, dims[i + step], dims[i],
                         [[cols[c][r] for c in range(dims[i])] for r in range(dims[i + step])])
            actions[k][i] = mat
    S = GradedModule(H, dims, actions, check=False)
    blocks = {i: Matrix(F, M.dims[i], dims[i],
                        [[bases[i][c][r] for c in range(dims[i])] for r in range(M.dims[i])])
              for i in dims}
    return S, ModuleMap(S, M, 0, blocks)


def quotient(M: GradedModule, inclusion: ModuleMap) -> tuple[GradedModule, ModuleMap]:
    """M / S for a submodule given by its inclusion, with the projection map.

    The complement in each degree consists of the first standard basis vectors
    independent of the submodule (identity-order pivoting).
    """
    H = M.structure
    F = H.field
    qdims: dict = {}
    change: dict = {}   # degree -> inverse of [sub basis | complement]
    comp: dict = {}
    for i, d in M.dims.items():
        S_i = inclusion.block(i) if inclusion.source.dim_at(i) else Matrix.zeros(F, d, 0)
        ech = Echelon(F)
        cols = [S_i.column(c) for c in range(S_i.cols)]
        for v in cols:
            if ech.add({r: x for r, x in enumerate(v) if x}) is None:
                raise ModuleError("inclusion is not injective")
        chosen = []
        for r in range(d):
            if ech.add({r: F.one}) is not None:
                chosen.append(r)
        comp[i] = chosen
        if chosen:
            qdims[i] = len(chosen)
        full = [list(v) for v in cols]
        for r in chosen:
            e = [F.zero] * d
            e[r] = F.one
            full.append(e)
        P = Matrix(F, d, d, [[full[c][r] for c in range(d)] for r in range(d)])
        change[i] = (inverse(P), len(cols))
    actions = [{} for _ in range(H.t)]
    for k in range(H.t):
        step = H.nk[k]
        for i in qdims:
            if i + step not in qdims:
                continue
            Pinv, s = change[i + step]
            A = M.block(k, i)
            left = Matrix(F, qdims[i + step], M.dims[i + step], Pinv.data[s:])
            right = Matrix(F, M.dims[i], qdims[i],
                           [[F.one if r == c else F.zero for c in comp[i]] for r in range(M.dims[i])])
            rows = (left @ A @ right).data
            actions[k][i] = Matrix(F, qdims[i + step], qdims[i], rows)
    Q = GradedModule(H, qdims, actions, check=False)
    blocks = {}
    for i in qdims:
        Pinv, s = change[i]
        blocks[i] = Matrix(F, qdims[i], M.dims[i], [list(Pinv.data[s + r]) for r in range(qdims[i])])
    proj = ModuleMap(M, Q, 0, blocks)
    Q.complement = comp
    return Q, proj


def kernel(f: ModuleMap) -> tuple[GradedModule, ModuleMap]:
    from .linalg import nullspace
    bases = {}
    for i in f.source.degrees:
        if f.target.dim_at(i + f.degree) == 0:
            F = f.field
            d = f.source.dims[i]
            bases[i] = [[F.one if r == c else F.zero for r in range(d)] for c in range(d)]
        else:
            ns = nullspace(f.block(i))
            if ns:
                bases[i] = ns
    return submodule_from_bases(f.source, bases)


def image(f: ModuleMap) -> tuple[GradedModule, ModuleMap]:
    from .linalg import column_space_basis
    if f.degree:
        raise ModuleError("image of a nonzero-degree map: shift first")
    bases = {}
    for i, mat in f.blocks.items():
        cols = column_space_basis(mat)
        if cols:
            bases[i + f.degree] = [mat.column(c) for c in cols]
    return submodule_from_bases(f.target, bases)


def cokernel(f: ModuleMap) -> tuple[GradedModule, ModuleMap]:
    _, inc = image(f)
    return quotient(f.target, inc)


# --- extensions and random modules --------------------------------------------------------------

def _power_chain(M: GradedModule, k: int, start: int, power: int) -> Matrix:
    return M.action_power(k, power, start)


def cocycle_space(A: GradedModule, B: GradedModule) -> tuple[list, list[dict]]:
    """Linear space of gluing data c_k: B^i -> A^{i+n_k} making [[a, c], [0, b]] a module.

    Returns (unknown keys, basis of solutions as sparse dicts keyed by (k, i, r, s)).
    """
    H = A.structure
    F = H.field
    unknowns = []
    for k in range(H.t):
        step = H.nk[k]
        for i in B.degrees:
            for r in range(A.dim_at(i + step)):
                for s in range(B.dims[i]):
                    unknowns.append((k, i, r, s))
    if not unknowns:
        return [], []
    ech = Echelon(F)
    for k in range(H.t):
        p, step = H.ps[k], H.nk[k]
        # top-right block of d_k^p from B^i: sum_j a^j c b^{p-1-j}
        for i in B.degrees:
            tgt = i + p * step
            if A.dim_at(tgt) == 0:
                continue
            rows: dict = {}
            for j in range(p):
                mid = i + (p - 1 - j) * step        # c acts from B^mid to A^{mid+step}
                if B.dim_at(mid) == 0 or A.dim_at(mid + step) == 0:
                    continue
                L = A.action_power(k, j, mid + step)
                R = B.action_power(k, p - 1 - j, i)
                for r in range(A.dims[tgt]):
                    for s in range(B.dims[i]):
                        row = rows.setdefault((r, s), {})
                        for u in range(A.dims[mid + step]):
                            lu = L.data[r][u]
                            if not lu:
                                continue
                            for v in range(B.dims[mid]):
                                rv = R.data[v][s]
                                if rv:
                                    key = (k, mid, u, v)
                                    val = lu * rv
                                    row[key] = row[key] + val if key in row else val
            for row in rows.values():
                if row:
                    ech.add(row)
    for k in range(H.t):
        for l in range(k + 1, H.t):
            sk, sl = H.nk[k], H.nk[l]
            for i in B.degrees:
                tgt = i + sk + sl
                if A.dim_at(tgt) == 0:
                    continue
                # a_l c_k + c_l b_k - a_k c_l - c_k b_l = 0 from B^i to A^tgt
                terms = []
                if A.dim_at(i + sk):
                    terms.append((A.block(l, i + sk), (k, i), None, 1))
                if B.dim_at(i + sk):
                    terms.append((None, (l, i + sk), B.block(k, i), 1))
                if A.dim_at(i + sl):
                    terms.append((A.block(k, i + sl), (l, i), None, -1))
                if B.dim_at(i + sl):
                    terms.append((None, (k, i + sl), B.block(l, i), -1))
                for r in range(A.dims[tgt]):
                    for s in range(B.dims[i]):
                        row: dict = {}
                        for L, (kk, deg), R, sign in terms:
                            if L is not None:
                                for u in range(L.cols):
                                    x = L.data[r][u]
                                    if x:
                                        key = (kk, deg, u, s)
                                        val = x if sign > 0 else -x
                                        row[key] = row[key] + val if key in row else val
                            else:
                                for v in range(R.rows):
                                    x = R.data[v][s]
                                    if x:
                                        key = (kk, deg, r, v)
                                        val = x if sign > 0 else -x
                                        row[key] = row[key] + val if key in row else val
                        row = {a: b for a, b in row.items() if b}
                        if row:
                            ech.add(row)
    return unknowns, ech.nullspace(unknowns)


def extension(A: GradedModule, B: GradedModule, gluing: dict) -> GradedModule:
    """Module on A (+) B (A first in every degree) with d_k = [[a_k, c_k], [0, b_k]]."""
    H = A.structure
    F = H.field
    S = direct_sum(A, B)
    actions = [{i: m.copy() for i, m in fam.items()} for fam in S.actions]
    offA, offB = S.summand_offsets
    for (k, i, r, s), x in gluing.items():
        if not x:
            continue
        step = H.nk[k]
        fam = actions[k]
        if i not in fam:
            fam[i] = Matrix.zeros(F, S.dims[i + step], S.dims[i])
        fam[i].data[offA[i + step] + r][offB[i] + s] = x
    E = GradedModule(H, S.dims, actions, check=True)
    E.summand_offsets = S.summand_offsets
    E.summands = (A, B)
    return E


def random_extension(A: GradedModule, B: GradedModule, rng: random.Random,
                     split_probability: float = 0.1) -> GradedModule:
    F = A.field
    _, sols = cocycle_space(A, B)
    gluing: dict = {}
    if sols and rng.random() >= split_probability:
        for vec in sols:
            roll = rng.random()
            if roll < 0.2:
                continue
            cf = F.random_element(rng, 2) if roll < 0.5 else F.from_int(rng.choice((-1, 1, 2)))
            for key, x in vec.items():
                gluing[key] = gluing[key] + cf * x if key in gluing else cf * x
    return extension(A, B, gluing)


def random_piece(H: HnStructure, rng: random.Random, max_dim: int, window: int = 6,
                 anchors=None, kinds=("trivial", "string", "vk", "free")) -> GradedModule:
    """A trivial module, truncated string, V_k or free module, randomly shifted.

    With ``anchors`` (degrees of an existing module), the piece is usually
    placed so that one of its degrees sits n_k away from an anchor, which
    makes non-split extensions likely.
    """
    kinds = [x for x in kinds if x != "free" or H.dim <= max_dim]
    kinds = [x for x in kinds if x != "vk" or min(H.ps) <= max_dim] or ["trivial"]
    kind = rng.choice(kinds)
    k = rng.randint(1, H.t)
    if kind == "vk":
        k = rng.choice([j + 1 for j, p in enumerate(H.ps) if p <= max_dim])
        M = v_k(H, k, 0)
    elif kind == "free":
        M = free(H, 0)
    elif kind == "string" and max_dim >= 2:
        M = string_module(H, k, rng.randint(1, min(H.ps[k - 1], max_dim)), 0)
    else:
        M = trivial(H, 0)
    if anchors and rng.random() < 0.85:
        anchor = rng.choice(list(anchors))
        own = rng.choice(M.degrees)
        step = rng.choice(H.nk) * rng.choice((-1, 1))
        b = own - (anchor + step)
    else:
        b = rng.randint(-window, window)
    out = shift(M, b)
    out.name = M.name.split('{')[0] + f'{{{b}}}'
    return out


def random_module(H: HnStructure, rng: random.Random, max_dim: int = 6, window: int = 6,
                  min_dim: int = 1, kinds=("trivial", "string", "vk", "free")) -> GradedModule:
    """Iterated random extension of standard pieces, total dimension in [min_dim, max_dim]."""
    target = rng.randint(min_dim, max_dim)
    M = random_piece(H, rng, target, window, kinds=kinds)
    while M.total_dim < target:
        P = random_piece(H, rng, target - M.total_dim, window, anchors=M.dims, kinds=kinds)
        M = random_extension(P, M, rng) if rng.random() < 0.5 else random_extension(M, P, rng)
    return M


def random_intertwiner(M: GradedModule, N: GradedModule, rng: random.Random) -> ModuleMap:
    basis = hom_space(M, N, 0)
    if not basis:
        return ModuleMap.zero(M, N)
    F = M.field
    return linear_combination(basis, [F.from_int(rng.randint(-3, 3)) for _ in basis])
