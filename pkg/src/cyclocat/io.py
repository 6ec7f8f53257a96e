"""JSON files for graded modules and module maps.

Module file::

    {"n": 6,
     "degrees": {"0": 1, "2": 1},
     "actions": {"d2": [{"from_degree": 0, "matrix": [["1"]]}]}}

Entries are field elements written as polynomials in ``z`` (a primitive
N-th root of unity).  Degrees missing from ``degrees`` are zero.  A map
file has ``source`` and ``target`` (module objects or paths relative to the
map file), ``degree`` and ``blocks`` (a list of ``{from_degree, matrix}``).
"""
from __future__ import annotations

import json
from pathlib import Path

from .gradedmod import GradedModule, ModuleError, ModuleMap
from .hopf import HnStructure, build_structure
from .linalg import Matrix


class ModuleFileError(ValueError):
    """Malformed or invalid module/map file; the message names the violated invariant."""


def _matrix(F, raw, rows: int, cols: int, where: str) -> Matrix:
    if not isinstance(raw, list) or any(not isinstance(r, list) for r in raw):
        raise ModuleFileError(f"{where}: matrix must be a list of rows")
    if len(raw) != rows or any(len(r) != cols for r in raw):
        got = (len(raw), len(raw[0]) if raw else 0)
        raise ModuleFileError(f"shape invariant violated at {where}: matrix is {got}, "
                              f"expected ({rows}, {cols})")
    try:
        return Matrix(F, rows, cols, [[F.coerce(x) for x in r] for r in raw])
    except (ValueError, TypeError) as exc:
        raise ModuleFileError(f"{where}: bad field element ({exc})") from exc


def module_from_dict(data: dict, structure: HnStructure | None = None, field=None) -> GradedModule:
    if not isinstance(data, dict):
        raise ModuleFileError("module file must hold a JSON object")
    for key in ("n", "degrees"):
        if key not in data:
            raise ModuleFileError(f"missing field {key!r}")
    n = data["n"]
    if not isinstance(n, int) or n < 2:
        raise ModuleFileError(f"n must be an integer >= 2, got {n!r}")
    H = structure or build_structure(n, field)
    if H.n != n:
        raise ModuleFileError(f"module is for n={n}, expected n={H.n}")
    try:
        dims = {int(i): int(d) for i, d in data["degrees"].items()}
    except (AttributeError, ValueError) as exc:
        raise ModuleFileError("degrees must map integer degrees to integer dimensions") from exc
    if any(d < 0 for d in dims.values()):
        raise ModuleFileError("shape invariant violated: negative dimension")
    dims = {i: d for i, d in dims.items() if d}
    actions = [{} for _ in range(H.t)]
    for name, entries in (data.get("actions") or {}).items():
        if not (name.startswith("d") and name[1:].isdigit()) or not 1 <= int(name[1:]) <= H.t:
            raise ModuleFileError(f"unknown action {name!r}; n={n} has d1..d{H.t}")
        k = int(name[1:]) - 1
        for entry in entries:
            try:
                i = int(entry["from_degree"])
                raw = entry["matrix"]
            except (KeyError, TypeError, ValueError) as exc:
                raise ModuleFileError(f"{name}: entries need from_degree and matrix") from exc
            tgt = i + H.nk[k]
            if i in actions[k]:
                raise ModuleFileError(f"{name} given twice from degree {i}")
            rows, cols = dims.get(tgt, 0), dims.get(i, 0)
            actions[k][i] = _matrix(H.field, raw, rows, cols,
                                    f"{name} from degree {i} (degree {i} -> {tgt})")
        for i, mat in list(actions[k].items()):
            if mat.rows == 0 or mat.cols == 0:
                del actions[k][i]
    try:
        return GradedModule(H, dims, actions, check=True, name=data.get("name", ""))
    except ModuleError as exc:
        kind = type(exc).__name__
        label = {"NilpotencyViolation": "nilpotency invariant violated",
                 "CommutationViolation": "commutation invariant violated",
                 "ShapeMismatch": "shape invariant violated"}.get(kind, "invalid module")
        raise ModuleFileError(f"{label}: {exc}") from exc


def _matrix_rows(mat: Matrix) -> list:
    return [[str(x) for x in r] for r in mat.data]


def module_to_dict(M: GradedModule) -> dict:
    H = M.structure
    out = {"n": H.n, "degrees": {str(i): d for i, d in sorted(M.dims.items())}, "actions": {}}
    for k, fam in enumerate(M.actions):
        entries = [{"from_degree": i, "matrix": _matrix_rows(m)} for i, m in sorted(fam.items())]
        if entries:
            out["actions"][f"d{k + 1}"] = entries
    if M.name:
        out["name"] = M.name
    return out


def _load_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ModuleFileError(f"no such file: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ModuleFileError(f"{path}: not valid JSON ({exc})") from exc


def load_module(path, structure: HnStructure | None = None, field=None) -> GradedModule:
    return module_from_dict(_load_json(path), structure, field)


def save_module(M: GradedModule, path) -> None:
    Path(path).write_text(json.dumps(module_to_dict(M), indent=1) + "\n")


def map_from_dict(data: dict, base: Path | None = None, structure: HnStructure | None = None,
                  field=None) -> ModuleMap:
    if not isinstance(data, dict):
        raise ModuleFileError("map file must hold a JSON object")
    for key in ("source", "target", "blocks"):
        if key not in data:
            raise ModuleFileError(f"missing field {key!r}")

    def side(raw, S):
        if isinstance(raw, str):
            return load_module((base or Path(".")) / raw, S, field)
        return module_from_dict(raw, S, field)

    src = side(data["source"], structure)
    H = src.structure
    tgt = side(data["target"], H)
    degree = int(data.get("degree", 0))
    blocks = {}
    for entry in data["blocks"]:
        i = int(entry["from_degree"])
        blocks[i] = _matrix(H.field, entry["matrix"], tgt.dim_at(i + degree), src.dim_at(i),
                            f"block from degree {i}")
    f = ModuleMap(src, tgt, degree, {i: b for i, b in blocks.items() if b.rows and b.cols})
    if not f.is_intertwiner():
        raise ModuleFileError("intertwining invariant violated: map does not commute with the d_k")
    return f


def map_to_dict(f: ModuleMap) -> dict:
    return {"source": module_to_dict(f.source), "target": module_to_dict(f.target),
            "degree": f.degree,
            "blocks": [{"from_degree": i, "matrix": _matrix_rows(b)}
                       for i, b in sorted(f.blocks.items())]}


def load_map(path, structure: HnStructure | None = None, field=None) -> ModuleMap:
    path = Path(path)
    return map_from_dict(_load_json(path), path.parent, structure, field)


def save_map(f: ModuleMap, path) -> None:
    Path(path).write_text(json.dumps(map_to_dict(f), indent=1) + "\n")
