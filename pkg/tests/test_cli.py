import io
import json

import pytest

from surfcut import oracle
from surfcut.cli import main


@pytest.fixture
def path_file(tmp_path):
    f = tmp_path / "path.json"
    f.write_text(oracle.path_instance().to_json())
    return f


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip() else None


def test_solve_then_validate(capsys, path_file, tmp_path):
    code, sol = run(capsys, "solve", path_file)
    assert code == 0 and sol["weight"] == "1" and sol["cut_edges"] == ["xb"]
    cut = tmp_path / "cut.json"
    cut.write_text(json.dumps(sol))
    assert run(capsys, "validate", path_file, cut) == (0, {"valid": True})
    cut.write_text("[]")
    assert run(capsys, "validate", path_file, cut) == (0, {"valid": False})


def test_exact_agrees(capsys, path_file):
    assert run(capsys, "exact", path_file) == (0, {"weight": "1", "cut_edges": ["xb"]})


def test_generated_instance_solves_the_same_twice(capsys, monkeypatch):
    code, inst = run(capsys, "gen", "--seed", 7, "--vertices", 8, "--max-edges", 14)
    assert code == 0
    text = json.dumps(inst)
    outs = []
    for _ in range(2):
        monkeypatch.setattr("sys.stdin", io.StringIO(text))
        outs.append(run(capsys, "solve", "-", "--certificate"))
    assert outs[0] == outs[1] and outs[0][0] == 0
    assert outs[0][1]["certificate"] is not None


@pytest.mark.parametrize("argv", [
    ["solve", "/does/not/exist.json"],
    ["solve", "--epsilon", "0", "x"],
    ["solve", "--epsilon", "abc", "x"],
    ["frobnicate"],
    ["gen", "--vertices", 3, "--terminals", 5],
])
def test_bad_input_exits_with_one(capsys, argv):
    assert main([str(a) for a in argv]) == 1


def test_malformed_instance(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{not json")
    assert main(["solve", str(f)]) == 1
    assert main(["validate", str(f), str(f)]) == 1


def test_unknown_edge_in_cut(capsys, path_file, tmp_path):
    cut = tmp_path / "cut.json"
    cut.write_text('["nope"]')
    assert main(["validate", str(path_file), str(cut)]) == 1


def test_no_pairs(capsys, tmp_path):
    d = oracle.path_instance().to_dict()
    d["pairs"] = []
    f = tmp_path / "empty.json"
    f.write_text(json.dumps(d))
    assert main(["solve", str(f)]) == 1
    assert main(["trace", str(f)]) == 1


def test_exact_over_cap_exits_with_two(capsys, tmp_path):
    f = tmp_path / "big.json"
    f.write_text(oracle.random_planar_instance(0, 12, 3, max_edges=25).to_json())
    assert main(["exact", str(f), "--oracle-cap", "5"]) == 2


def test_skeleta_dump(capsys, path_file):
    code, out = run(capsys, "skeleta", path_file, "--kappa-init", 1)
    assert code == 0 and out["built"] >= len(out["skeleta"]) > 0
    sk = out["skeleta"][0]
    assert {"id", "topology", "ranges", "length", "portals", "edges"} <= set(sk)
    assert all(e["role"] in ("core", "left", "right", "link") for e in sk["edges"])


def test_trace(capsys, path_file):
    code, out = run(capsys, "trace", path_file)
    assert code == 0 and out["weight"] == "1"
    assert out["g"] == 0 and out["t"] == 2 and "rounds" in out["stats"]


def test_torus_and_projective_generators(capsys):
    for kind in ("torus", "projective"):
        code, inst = run(capsys, "gen", "--kind", kind)
        assert code == 0
        assert oracle.instance_from_dict(inst).surface.genus >= 1
