"""Stable-category computations: projective stripping, null-homotopic maps, shifts and cones."""
from __future__ import annotations

from dataclasses import dataclass

from .arith.laurent import LaurentPolynomial
from .gradedmod import (GradedModule, ModuleError, ModuleMap, cokernel, direct_sum, dual, free,
                        hom_space, internal_hom_direct, kernel, map_from_flat, shift, tensor)
from .hopf import antipode_inverse
from .linalg import Echelon, Matrix, row_space, same_span


@dataclass
class StrippedModule:
    """M = H_n^{f(v)} (+) reduced, with the witnessing isomorphism."""

    free_multiplicity: LaurentPolynomial
    reduced: GradedModule
    iso: ModuleMap            # (free summands (+) reduced) -> M
    generators: list          # (degree, vector in M) generating each free summand

    @property
    def iso_inverse(self) -> ModuleMap:
        return self.iso.inverse()


def _lambda_witness(M: GradedModule):
    """A degree i and basis index c with Lambda e_c != 0, or None."""
    ell = M.structure.ell
    for i in M.degrees:
        if M.dim_at(i + ell) == 0:
            continue
        L = M.lambda_action(i)
        for c in range(L.cols):
            if any(L.data[r][c] for r in range(L.rows)):
                return i, c, L
    return None


def _free_projection(M: GradedModule, i: int, m: list, lam_m: list) -> ModuleMap:
    """pi(x) = sum_a lambda(d^{top-a} x) d^a m, the H-linear projection onto H m."""
    H = M.structure
    F = H.field
    r0 = next(r for r, x in enumerate(lam_m) if x)
    scale = lam_m[r0].inverse()
    images = {}     # exponent a -> d^a m, living in degree i + deg a
    for a in H.exponents:
        images[a] = M.monomial_action(a, i).apply(m)
    blocks = {}
    for x_deg, d in M.dims.items():
        rows = M.dims[x_deg]
        mat = Matrix.zeros(F, rows, d)
        touched = False
        for a in H.exponents:
            if i + H.degree(a) != x_deg:
                continue
            comp = tuple(t - s for t, s in zip(H.top, a))
            # x in degree x_deg, d^{top-a} x lands in degree i + ell
            D = M.monomial_action(comp, x_deg)
            if D.rows == 0:
                continue
            functional = [v * scale for v in D.data[r0]]
            img = images[a]
            for r, y in enumerate(img):
                if not y:
                    continue
                for c, phi in enumerate(functional):
                    if phi:
                        mat.data[r][c] = mat.data[r][c] + y * phi
                        touched = True
        if touched:
            blocks[x_deg] = mat
    return ModuleMap(M, M, 0, blocks)


def strip_projectives(M: GradedModule) -> StrippedModule:
    """Split off free summands H m (one per m with Lambda m != 0) until Lambda acts by zero."""
    H = M.structure
    F = H.field
    current = M
    to_original = ModuleMap.identity(M)
    gens = []
    while True:
        found = _lambda_witness(current)
        if found is None:
            break
        i, c, L = found
        m = [F.zero] * current.dims[i]
        m[c] = F.one
        pi = _free_projection(current, i, m, L.column(c))
        gens.append((i, to_original({i: m}).get(i)))
        sub, inc = kernel(pi)
        to_original = to_original.compose(inc)
        current = sub
    f = LaurentPolynomial.from_dict(_count(i for i, _ in gens))
    reduced = current
    if reduced is not M:
        reduced.name = f"{M.name}_red" if M.name else ""
    iso = _assemble_iso(M, gens, reduced, to_original)
    return StrippedModule(f, reduced, iso, gens)


def _count(items) -> dict:
    out: dict = {}
    for x in items:
        out[x] = out.get(x, 0) + 1
    return out


def _assemble_iso(M, gens, reduced, reduced_inc) -> ModuleMap:
    H = M.structure
    F = H.field
    pieces = [free(H, -i) for i, _ in gens] + [reduced]
    S = direct_sum(*pieces)
    blocks = {d: Matrix.zeros(F, M.dim_at(d), n) for d, n in S.dims.items()}
    for idx, (i, m) in enumerate(gens):
        P = pieces[idx]
        off = S.summand_offsets[idx]
        for a, (deg, pos) in P.monomial_position.items():
            img = M.monomial_action(a, i).apply(m)
            col = off[deg] + pos
            for r, y in enumerate(img):
                blocks[deg].data[r][col] = y
    off = S.summand_offsets[-1]
    for d, mat in reduced_inc.blocks.items():
        for r, row in enumerate(mat.data):
            for c, y in enumerate(row):
                blocks[d].data[r][off[d] + c] = y
    return ModuleMap(S, M, 0, blocks)


def is_projective(M: GradedModule) -> bool:
    return strip_projectives(M).reduced.is_zero()


# --- null-homotopic maps ---------------------------------------------------------------------

def _lambda_hom_images(M: GradedModule, N: GradedModule, j: int) -> list[dict]:
    """Flattened Lambda . g for g running over the unit maps of Hom^{j - ell}(M, N)."""
    H = M.structure
    src_deg = j - H.ell
    terms = []
    for ((b, kpow), (rest, _)), c in H.lambda_coproduct.items():
        sinv = antipode_inverse(H.element({(b, kpow): H.field.one}))
        terms.append((sinv, rest, c, H.degree(b)))
    out: dict = {}
    for i in M.degrees:
        if N.dim_at(i + j) == 0:
            continue
        for sinv, rest, c, db in terms:
            i2 = i + db
            if M.dim_at(i2) == 0 or N.dim_at(i2 + src_deg) == 0:
                continue
            P = M.element_action(sinv, i).get(i2)
            if P is None:
                continue
            Q = N.monomial_action(rest, i2 + src_deg)
            for r in range(N.dims[i2 + src_deg]):
                qcol = [Q.data[x][r] for x in range(Q.rows)]
                if not any(qcol):
                    continue
                for cc in range(M.dims[i2]):
                    prow = P.data[cc]
                    if not any(prow):
                        continue
                    vec = out.setdefault((i2, r, cc), {})
                    for x, qv in enumerate(qcol):
                        if not qv:
                            continue
                        cq = c * qv
                        for y, pv in enumerate(prow):
                            if pv:
                                key = (i, x, y)
                                val = cq * pv
                                s = vec.get(key)
                                s = val if s is None else s + val
                                if s:
                                    vec[key] = s
                                else:
                                    vec.pop(key, None)
    return [v for v in out.values() if v]


def null_homotopic_basis(M: GradedModule, N: GradedModule, j: int = 0,
                         verify: bool = True) -> list[ModuleMap]:
    """Basis of Lambda . Hom^{j - ell}(M, N), computed from the coproduct of Lambda."""
    F = M.field
    ech = row_space(_lambda_hom_images(M, N, j), F)
    maps = [map_from_flat(M, N, j, row) for row in ech.pivots.values()]
    if verify:
        bad = [f for f in maps if not f.is_intertwiner()]
        if bad:
            raise ModuleError("Lambda-image contains a non-intertwiner")
    return maps


def null_homotopic_via_hom_action(M: GradedModule, N: GradedModule, j: int = 0) -> list[ModuleMap]:
    """Same subspace, computed by applying d^{top} through the internal-hom action matrices."""
    H = M.structure
    F = H.field
    Hm = internal_hom_direct(M, N)
    lay = Hm.hom_layout
    src = j - H.ell
    if Hm.dim_at(src) == 0:
        return []
    L = Hm.lambda_action(src)
    rows = []
    keys = {}
    for (s, i), off in lay.offsets.items():
        if s != j:
            continue
        for r in range(N.dims[i + s]):
            for c in range(M.dims[i]):
                keys[off + r * M.dims[i] + c] = (i, r, c)
    for col in range(L.cols):
        vec = {keys[r]: L.data[r][col] for r in range(L.rows) if L.data[r][col]}
        if vec:
            rows.append(vec)
    ech = row_space(rows, F)
    return [map_from_flat(M, N, j, row) for row in ech.pivots.values()]


def rho(M: GradedModule, target: GradedModule | None = None) -> ModuleMap:
    """rho_M: m |-> m (x) Lambda into (M (x) H){ell}."""
    H = M.structure
    F = H.field
    Hf = free(H, 0)
    T = tensor(M, Hf)
    I = target or shift(T, H.ell)
    lay = T.layout
    top_deg, top_pos = Hf.monomial_position[H.top]
    blocks = {}
    for i, d in M.dims.items():
        mat = Matrix.zeros(F, I.dim_at(i), d)
        for x in range(d):
            mat.data[lay.index(i, x, top_deg, top_pos)][x] = F.one
        blocks[i] = mat
    I.tensor_layout = lay
    return ModuleMap(M, I, 0, blocks)


def factoring_through_rho(M: GradedModule, N: GradedModule) -> list[ModuleMap]:
    """Basis of {g o rho_M : g in Hom_H((M (x) H){ell}, N)}."""
    r = rho(M)
    F = M.field
    comps = [g.compose(r) for g in hom_space(r.target, N, 0)]
    ech = row_space([f.flatten() for f in comps], F)
    return [map_from_flat(M, N, 0, row) for row in ech.pivots.values()]


def same_subspace(maps_a, maps_b, field) -> bool:
    return same_span([f.flatten() for f in maps_a], [f.flatten() for f in maps_b], field)


@dataclass
class StableHom:
    total: list
    null_homotopic: list
    stable_dimension: int


def stable_hom(M: GradedModule, N: GradedModule) -> StableHom:
    total = hom_space(M, N, 0)
    null = null_homotopic_basis(M, N, 0)
    ech = Echelon(M.field)
    for f in total:
        ech.add(f.flatten())
    if any(not ech.contains(f.flatten()) for f in null):
        raise ModuleError("null-homotopic maps not contained in the hom space")
    return StableHom(total, null, len(total) - len(null))


# --- triangulated structure ----------------------------------------------------------------------

def shift_plus(M: GradedModule, strip: bool = True) -> GradedModule:
    """M[1]: cokernel of rho_M, with projective summands removed."""
    r = rho(M)
    Q, _ = cokernel(r)
    return strip_projectives(Q).reduced if strip else Q


def shift_minus(M: GradedModule) -> GradedModule:
    """M[-1] = (M*[1])*."""
    return dual(shift_plus(dual(M)))


def shift_times(M: GradedModule, times: int) -> GradedModule:
    out = strip_projectives(M).reduced if times == 0 else M
    for _ in range(abs(times)):
        out = shift_plus(out) if times > 0 else shift_minus(out)
    return out


@dataclass
class Cone:
    module: GradedModule
    from_target: ModuleMap       # N -> C_f
    injective_hull: GradedModule  # (M (x) H){ell}


def cone(f: ModuleMap) -> Cone:
    """Pushout of rho_M and f: ((M (x) H){ell} (+) N) / {(rho(m), -f(m))}."""
    if f.degree != 0 or not f.is_intertwiner():
        raise ModuleError("cone needs a degree-0 module map")
    M, N = f.source, f.target
    r = rho(M)
    I = r.target
    S = direct_sum(I, N)
    F = M.field
    blocks = {}
    offI, offN = S.summand_offsets
    for i, d in M.dims.items():
        mat = Matrix.zeros(F, S.dim_at(i), d)
        rb = r.block(i)
        for row in range(rb.rows):
            mat.data[offI[i] + row] = list(rb.data[row])
        if N.dim_at(i):
            fb = f.block(i)
            for row in range(fb.rows):
                mat.data[offN[i] + row] = [-x for x in fb.data[row]]
        blocks[i] = mat
    g = ModuleMap(M, S, 0, blocks)
    C, proj = cokernel(g)
    inc = ModuleMap(N, S, 0, {i: Matrix(F, S.dims[i], d,
                                        [[F.one if rr == offN[i] + cc else F.zero for cc in range(d)]
                                         for rr in range(S.dims[i])])
                              for i, d in N.dims.items()})
    return Cone(C, proj.compose(inc), I)


def is_quasi_isomorphism(f: ModuleMap, budget: int = 10_000, seed: int = 0):
    """Whether f becomes invertible after killing the ideal: the stripped cone must lie in it."""
    from .ideal import is_in_I
    C = cone(f).module
    return is_in_I(C, budget=budget, seed=seed)
