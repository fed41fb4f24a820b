import json
import subprocess
import sys

import networkx as nx
import pytest

from cubecage.cli import main
from cubecage.io import load_complex
from oracles import graph_of


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_validate_good(capsys, fixtures):
    code, out, _ = run(capsys, "validate", "--input", fixtures / "q3.json", "--format", "json")
    assert code == 0 and json.loads(out)["median"] is True


def test_validate_k23_prints_triple(capsys, fixtures):
    code, out, err = run(capsys, "validate", "--input", fixtures / "k23.json")
    assert code == 2
    assert "x" in err + out and "z" in err + out


def test_malformed_json_reports_position(capsys, fixtures):
    code, _, err = run(capsys, "validate", "--input", fixtures / "broken.json")
    assert code == 2 and "line" in err and "column" in err


def test_unknown_subcommand(capsys):
    code, _, err = run(capsys, "nope")
    assert code == 2 and "invalid choice" in err


def test_missing_file(capsys, tmp_path):
    code, _, _ = run(capsys, "validate", "--input", tmp_path / "none.json")
    assert code == 2


def test_racg_certify_p4(capsys, fixtures):
    code, out, _ = run(capsys, "racg", "--graph", fixtures / "p4.json", "certify")
    assert code == 0 and out.strip() == "∂X = B(X): true (Γ not a join)"


def test_racg_certify_c4_with_cage(capsys, fixtures):
    code, out, _ = run(capsys, "racg", "certify", "--graph", fixtures / "c4.json",
                       "--with-cage", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["boundary_equals_BX"] is False
    assert data["product_tight_cage"]["verdicts"] == {
        "size": True, "sector": True, "unbounded": True, "edges": True}


def test_tight_cages_grid(capsys, fixtures):
    code, out, _ = run(capsys, "tight-cages", "find", "--input", fixtures / "grid_3x5.json",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["sectorless_tight_cages"] == 1
    assert data["cages"][0]["core"] == [5, 6, 7, 8, 9]
    assert data["loose_hyperplanes"] == [1, 5]


def test_cages_reduce_trace(capsys, fixtures):
    code, out, _ = run(capsys, "cages", "reduce", "--input", fixtures / "path5.json",
                       "--ultrafilter", 2, "--halfspaces", "0:1,3:0", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["cage"] == ["1:1", "2:0"]
    assert [t["path"] for t in data["trace"]] == [[1, 2, 3], [2, 3]]


def test_cages_reduce_outside_ultrafilter(capsys, fixtures):
    code, _, _ = run(capsys, "cages", "reduce", "--input", fixtures / "path5.json",
                     "--ultrafilter", 0, "--halfspaces", "0:1")
    assert code == 2


def test_ultrafilters(capsys, fixtures):
    code, out, _ = run(capsys, "ultrafilters", "enumerate", "--input", fixtures / "q2.json",
                       "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["consistent"] == 4 and data["bijection"] is True


def test_collapse_with_reflection(capsys, fixtures):
    code, out, _ = run(capsys, "collapse", "--input", fixtures / "grid_3x5.json", "--class", 1,
                       "--action", fixtures / "reflect.json", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["orbit"] == [1, 5]
    assert len(data["target"]["vertices"]) == 5 and all(data["checks"].values())


def test_collapse_bad_class(capsys, fixtures):
    code, _, _ = run(capsys, "collapse", "--input", fixtures / "q3.json", "--class", 9)
    assert code == 2


def test_uncage_json_lines(capsys, fixtures):
    code, out, _ = run(capsys, "uncage", "--input", fixtures / "grid_3x5.json",
                       "--action", fixtures / "trivial.json")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0
    assert lines[0]["step"] == 1 and lines[1] == {"steps": 1, "stop": "no sectorless tight cage"}


def test_uncage_reflection_refused(capsys, fixtures):
    code, out, err = run(capsys, "uncage", "--input", fixtures / "grid_3x5.json",
                         "--action", fixtures / "reflect.json")
    assert code == 1 and "core carrier reflection" in err + out


def test_export_dot(capsys, fixtures):
    code, out, _ = run(capsys, "export", "--input", fixtures / "q2.json", "--format", "dot",
                       "--class", 0)
    assert code == 0 and out.startswith("graph complex {") and out.count(" -- ") == 4


@pytest.mark.parametrize("name", ["grid_3x5.json", "q3.json", "path5.json", "q2.json"])
def test_export_round_trip(capsys, fixtures, tmp_path, name):
    code, out, _ = run(capsys, "export", "--input", fixtures / name, "--format", "json")
    assert code == 0
    copy = tmp_path / name
    copy.write_text(out)
    a, b = load_complex(fixtures / name), load_complex(copy)
    assert nx.is_isomorphic(graph_of(a), graph_of(b))
    assert sorted(map(str, a.frontier)) == sorted(map(str, b.frontier))


def test_analyze_fuzz_is_seeded(capsys):
    first = run(capsys, "analyze", "--fuzz", 3, "--seed", 5)
    second = run(capsys, "analyze", "--fuzz", 3, "--seed", 5)
    assert first == second and first[0] == 0


@pytest.mark.parametrize("argv", [
    ["tight-cages", "find", "--input", "grid_3x5.json", "--format", "json"],
    ["racg", "analyze", "--graph", "c4.json"],
    ["uncage", "--input", "grid_3x5.json"],
    ["analyze", "--input", "grid_3x5.json"],
])
def test_reports_are_byte_identical(fixtures, argv):
    cmd = [sys.executable, "-m", "cubecage", *argv]
    runs = [subprocess.run(cmd, cwd=fixtures, capture_output=True) for _ in range(2)]
    assert runs[0].returncode == 0
    assert runs[0].stdout == runs[1].stdout and runs[0].stdout
