import json

import pytest

import cubecover.serialize as S
from cubecover.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_kneser_gen_petersen(tmp_path, capsys):
    code, out, _ = run(capsys, "kneser", "gen", "--delta", 5, "--n", 2, "-o", tmp_path / "p.json",
                       "--emit-dot", tmp_path / "p.dot")
    assert code == 0
    L = S.read(tmp_path / "p.json", "kneser")
    assert L.num_vertices == 10 and len(L.edges) == 15
    dot = (tmp_path / "p.dot").read_text()
    assert dot.startswith("graph cubecover {") and dot.count("--") == 15


def test_corrupted_complex_exit_2(tmp_path, capsys):
    doc = json.loads(S.dumps(__import__("cubecover.fixtures").fixtures.strip()))
    doc["squares"][0] = [0, 2, 4, 6]
    (tmp_path / "bad.json").write_text(json.dumps(doc))
    code, _, err = run(capsys, "complex", "check", tmp_path / "bad.json")
    assert code == 2
    assert "OpenSquareBoundary" in err and "square/0" in err


def test_unparsable_exit_2(tmp_path, capsys):
    (tmp_path / "x.json").write_text("{ nope")
    code, _, err = run(capsys, "complex", "check", tmp_path / "x.json")
    assert code == 2 and "line 1" in err


def test_unknown_command_exit_2(capsys):
    code, _, err = run(capsys, "frobnicate")
    assert code == 2 and "UnknownCommand" in err


def test_certify_reports_cells(capsys):
    code, out, _ = run(capsys, "hyperplanes", "certify", "fixture:torus")
    assert code == 1
    assert "CELL vertex/0: hyperplane 0 self-osculates" in out


def test_delta_pipeline(tmp_path, capsys):
    cx = tmp_path / "c.json"
    assert run(capsys, "complex", "gen", "petersen", "-o", cx)[0] == 0
    pre, dc, cov = tmp_path / "pre.json", tmp_path / "dc.json", tmp_path / "k.json"
    assert run(capsys, "delta", "build", cx, "--L", "k2_3", "-o", pre)[0] == 0
    assert run(capsys, "delta", "extend", pre, "--choice", "0:1,0", "-o", dc)[0] == 0
    assert run(capsys, "delta", "verify", dc)[0] == 0
    code, out, _ = run(capsys, "holonomy", "compute", dc)
    assert code == 0 and "not flat" in out
    code, out, _ = run(capsys, "holonomy", "flatten", dc, "-o", cov)
    assert code == 0
    assert run(capsys, "cover", "verify", cov)[0] == 0


def test_trivialize_and_davis(tmp_path, capsys):
    assert run(capsys, "cover", "davis", "--L", "k2_3", "-o", tmp_path / "d.json")[0] == 0
    assert S.read(tmp_path / "d.json").cell_counts() == (8, 12, 0, 0)
    assert run(capsys, "delta", "build", tmp_path / "d.json", "--L", "k2_3", "-o", tmp_path / "p.json")[0] == 0
    code, out, _ = run(capsys, "cover", "trivialize", tmp_path / "p.json", "-o", tmp_path / "t.json")
    assert code == 0 and "degree 1" in out


def test_voltage(tmp_path, capsys):
    (tmp_path / "g.json").write_text(json.dumps({"0": [1, 0], "2": [1, 0]}))
    code, out, _ = run(capsys, "cover", "voltage", "fixture:theta", "--degree", 2, "--gains", tmp_path / "g.json",
                       "-o", tmp_path / "v.json")
    assert code == 0 and "(4, 6, 0, 0)" in out


def test_leighton_common_and_manifest_replay(tmp_path, capsys):
    for name in ("petersen", "theta"):
        run(capsys, "complex", "gen", name, "-o", tmp_path / f"{name}.json")
    run(capsys, "kneser", "gen", "--delta", 3, "--n", 2, "-o", tmp_path / "k2_3.json")
    out_dir = tmp_path / "out"
    code, out, _ = run(capsys, "leighton", "common", tmp_path / "petersen.json", tmp_path / "theta.json",
                       "--L", tmp_path / "k2_3.json", "--out-dir", out_dir, "--manifest-out", tmp_path / "m.json")
    assert code == 0 and "X1 composite: degree 6: verified" in out
    first = {p.name: p.read_bytes() for p in out_dir.iterdir()}
    assert run(capsys, "cover", "verify", out_dir / "x1_chain.json")[0] == 0
    assert run(capsys, "cover", "verify", out_dir / "x2_chain.json")[0] == 0
    assert run(capsys, "leighton", "verify", out_dir / "common_coloring.json")[0] == 0
    for p in out_dir.iterdir():
        p.unlink()
    assert run(capsys, "run", tmp_path / "m.json")[0] == 0
    assert {p.name: p.read_bytes() for p in out_dir.iterdir()} == first


def test_leighton_color_product(tmp_path, capsys):
    c1, c2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "leighton", "color", "fixture:petersen", "--L", "k2_3", "-o", c1)[0] == 0
    assert run(capsys, "leighton", "color", "fixture:theta", "--L", "k2_3", "-o", c2)[0] == 0
    code, out, _ = run(capsys, "leighton", "product", c1, c2, "--all-components", "--out-dir", tmp_path / "fp")
    assert code == 0 and "component 0" in out


def test_common_obstruction_exit_1(capsys):
    code, _, err = run(capsys, "leighton", "common", "fixture:petersen", "fixture:k5", "--L", "k2_3")
    assert code == 1 and "LinkMismatch" in err and "input 2" in err


def test_console_script_entry_point():
    from importlib.metadata import entry_points

    eps = [e for e in entry_points(group="console_scripts") if e.name == "cubecover"]
    assert eps and eps[0].value == "cubecover.cli:main"
