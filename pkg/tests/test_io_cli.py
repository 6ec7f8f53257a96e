import json
import random

import pytest

from cyclocat.cli import main
from cyclocat.gradedmod import ModuleMap, example_V, random_intertwiner, random_module, v_k
from cyclocat.hopf import build_structure
from cyclocat.io import (ModuleFileError, load_map, load_module, module_from_dict, module_to_dict,
                         save_map, save_module)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def v2_file(tmp_path):
    path = tmp_path / "v2.json"
    path.write_text(json.dumps({
        "n": 6, "degrees": {"0": 1, "2": 1, "4": 1},
        "actions": {"d2": [{"from_degree": 0, "matrix": [["1"]]},
                           {"from_degree": 2, "matrix": [["1"]]}]}}))
    return path


def test_module_roundtrip(H6, tmp_path):
    rng = random.Random(1)
    for t in range(5):
        M = random_module(H6, rng, 6)
        path = tmp_path / f"m{t}.json"
        save_module(M, path)
        assert load_module(path, H6) == M


def test_map_roundtrip(H6, tmp_path):
    rng = random.Random(2)
    M, N = random_module(H6, rng, 5), random_module(H6, rng, 5)
    f = random_intertwiner(M, N, rng)
    save_map(f, tmp_path / "f.json")
    g = load_map(tmp_path / "f.json", H6)
    assert g.flatten() == f.flatten() and g.degree == 0


def test_map_with_relative_paths(H6, tmp_path, v2_file):
    (tmp_path / "id.json").write_text(json.dumps({
        "source": "v2.json", "target": "v2.json",
        "blocks": [{"from_degree": d, "matrix": [["1"]]} for d in (0, 2, 4)]}))
    f = load_map(tmp_path / "id.json", H6)
    assert f == ModuleMap.identity(f.source)


def test_cyclotomic_entries_roundtrip(H6):
    data = {"n": 6, "degrees": {"0": 1, "3": 1},
            "actions": {"d1": [{"from_degree": 0, "matrix": [["z^2 - 1/2"]]}]}}
    M = module_from_dict(data, H6)
    assert module_to_dict(M)["actions"]["d1"][0]["matrix"] == [[str(H6.field.parse("z^2 - 1/2"))]]


@pytest.mark.parametrize("data, message", [
    ({"n": 6, "degrees": {"0": 1, "3": 1}, "actions": {"d1": [{"from_degree": 0, "matrix": [["1", "0"]]}]}},
     "shape invariant violated at d1 from degree 0"),
    ({"n": 6, "degrees": {"0": 1, "2": 1, "4": 1, "6": 1},
      "actions": {"d2": [{"from_degree": i, "matrix": [["1"]]} for i in (0, 2, 4)]}},
     "nilpotency invariant violated"),
    ({"n": 6, "degrees": {"0": 1, "2": 1, "3": 1, "5": 1},
      "actions": {"d1": [{"from_degree": 0, "matrix": [["1"]]}, {"from_degree": 2, "matrix": [["1"]]}],
                  "d2": [{"from_degree": 0, "matrix": [["1"]]}]}},
     "commutation invariant violated"),
    ({"n": 6, "degrees": {"0": 1}, "actions": {"d3": []}}, "unknown action 'd3'"),
    ({"degrees": {}}, "missing field 'n'"),
    ({"n": 1, "degrees": {}}, "n must be an integer >= 2"),
])
def test_invalid_modules_name_the_invariant(data, message):
    with pytest.raises(ModuleFileError, match=message):
        module_from_dict(data)


def test_non_intertwining_map_rejected(H6, tmp_path, v2_file):
    (tmp_path / "bad.json").write_text(json.dumps({
        "source": "v2.json", "target": "v2.json",
        "blocks": [{"from_degree": 0, "matrix": [["1"]]}]}))
    with pytest.raises(ModuleFileError, match="intertwining invariant violated"):
        load_map(tmp_path / "bad.json", H6)


def test_cli_verify_hopf(capsys):
    code, out, _ = run(capsys, "verify-hopf", "--n", "6")
    assert code == 0 and "FAIL" not in out


def test_cli_prime_field(capsys):
    code, _, _ = run(capsys, "verify-hopf", "--n", "6", "--field", "fp:37")
    assert code == 0
    code, _, err = run(capsys, "verify-hopf", "--n", "6", "--field", "fp:5")
    assert code == 2 and "config error" in err and "N = 6" in err


def test_cli_missing_n(capsys):
    code, _, err = run(capsys, "verify-hopf")
    assert code == 2 and "--n" in err


def test_cli_k0(capsys, v2_file):
    code, out, _ = run(capsys, "k0", "--n", "6", str(v2_file))
    assert code == 0 and out.strip() == "0"
    code, out, _ = run(capsys, "k0", "--n", "6", "--ring", "stmod", "--json", str(v2_file))
    data = json.loads(out)
    assert data["ring"] == "stmod" and data["rep"] == "1 + v^2 + v^4"


def test_cli_k0_ideal(capsys):
    code, out, _ = run(capsys, "k0-ideal", "--n", "30")
    assert code == 0 and "equal: yes" in out


def test_cli_ideal_test(capsys, v2_file, tmp_path):
    code, out, _ = run(capsys, "ideal-test", "--n", "6", "--k", "2", str(v2_file))
    assert code == 0 and out.startswith("MEMBER")
    triv = tmp_path / "k.json"
    triv.write_text(json.dumps({"n": 6, "degrees": {"0": 1}}))
    code, out, _ = run(capsys, "ideal-test", "--n", "6", "--json", str(triv))
    assert json.loads(out)["status"] == "NOT-MEMBER"
    code, _, err = run(capsys, "ideal-test", "--n", "6", "--k", "3", str(v2_file))
    assert code == 2


def test_cli_stable_hom(capsys, v2_file):
    code, out, _ = run(capsys, "stable-hom", "--n", "6", "--json", str(v2_file), str(v2_file))
    data = json.loads(out)
    assert code == 0 and data["total"] - data["null_homotopic"] == data["stable"]


def test_cli_shift_and_cone_emit_modules(capsys, tmp_path, H6):
    save_module(v_k(H6, 2), tmp_path / "v.json")
    code, out, _ = run(capsys, "shift", "--n", "6", "--times", "2", str(tmp_path / "v.json"))
    assert code == 0
    assert module_from_dict(json.loads(out), H6).total_dim > 0
    save_map(ModuleMap.identity(example_V(H6)), tmp_path / "id.json")
    code, out, _ = run(capsys, "cone", "--n", "6", str(tmp_path / "id.json"))
    assert code == 0 and json.loads(out)["n"] == 6


def test_cli_invalid_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _, err = run(capsys, "k0", "--n", "6", str(bad))
    assert code == 2 and "invalid input" in err


def test_cli_examples(capsys):
    code, out, _ = run(capsys, "examples", "--n", "6")
    assert code == 0 and "three-prime example unavailable" in out
    code, out, _ = run(capsys, "examples", "--n", "30", "--json")
    data = json.loads(out)
    assert code == 0 and data["two_prime"] is None and data["three_prime"]["I"]["status"] == "MEMBER"


def test_cli_cyclotomic(capsys, tmp_path):
    out_file = tmp_path / "c.txt"
    code, _, _ = run(capsys, "cyclotomic", "--n", "12", "--out", str(out_file))
    text = out_file.read_text()
    assert code == 0 and "Phi_12 = 1 - v^2 + v^4" in text


def test_cli_all_checks_subset(capsys):
    code, out, _ = run(capsys, "all-checks", "--n", "6", "--only", "1", "3", "6")
    assert code == 0 and "summary: 3/3 criteria passed" in out


def test_structure_mismatch(H6, tmp_path):
    save_module(v_k(build_structure(10), 1), tmp_path / "m.json")
    with pytest.raises(ModuleFileError, match="n=10"):
        load_module(tmp_path / "m.json", H6)
