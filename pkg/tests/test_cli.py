import json
import subprocess
import sys

import numpy as np
import pytest

from isowrist.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def usage_error(capsys, *argv):
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    capsys.readouterr()
    return exc.value.code


@pytest.mark.parametrize("solid, n, sigma2", [("tetrahedron", 4, 4 / 3), ("cube", 8, 8 / 3), ("icosahedron", 12, 4.0)])
def test_platonic(capsys, solid, n, sigma2):
    code, out, _ = run(capsys, "platonic", solid)
    assert code == 0
    doc = json.loads(out)
    assert len(doc["pointset"]["points"]) == n
    assert doc["report"]["sigma_squared"] == pytest.approx(sigma2, abs=1e-10)
    assert doc["report"]["isotropic"] is True


def test_platonic_csv(capsys):
    code, out, _ = run(capsys, "platonic", "octahedron", "--format", "csv")
    assert code == 0 and len(out.strip().splitlines()) == 7


def test_platonic_bad_solid(capsys):
    assert usage_error(capsys, "platonic", "pyramid") == 2


def test_solve_json_and_csv(capsys):
    code, out, _ = run(capsys, "solve", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["solutions"]) == 32
    assert doc["bezout"] == 256 and doc["bkk"] == 192
    code, out, _ = run(capsys, "solve", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 33 and lines[0].startswith("id,c,s,x,y,z,u,v,w")


def test_solve_impossible_tolerance(capsys):
    code, _, err = run(capsys, "solve", "--tolerance", "1e-30")
    assert code == 1


def test_bad_tolerance_is_usage_error(capsys):
    assert usage_error(capsys, "solve", "--tolerance", "-1") == 2


def test_verify(capsys):
    code, out, err = run(capsys, "verify", "--seed", "1", "--starts", "5000")
    assert code == 0
    assert "32 == 32, all matched" in err
    doc = json.loads(out)
    assert (doc["bezout"], doc["bkk"], doc["closed_form"], doc["oracle"]) == (256, 192, 32, 32)
    assert doc["all_matched"] is True


def test_verify_other_seed_same_roots(capsys):
    from isowrist.solver import match_solution_sets, oracle_solve

    code, _, err = run(capsys, "verify", "--seed", "7")
    assert code == 0 and "all matched" in err
    ok, _ = match_solution_sets(oracle_solve(7, 5000), oracle_solve(1, 5000), tol=1e-8)
    assert ok


def test_verify_too_few_starts(capsys):
    assert usage_error(capsys, "verify", "--starts", "100") == 2


def test_classify(capsys):
    code, out, err = run(capsys, "classify")
    assert code == 0
    doc = json.loads(out)
    archs = doc["architectures"]
    assert len(archs) == 8
    for a in archs:
        for al in a["alpha_deg"]:
            assert min(abs(al - 70.53), abs(al - 109.47)) < 0.01
        assert all(s["chain"][0] == 1 for s in a["sources"])
    assert doc["antipodal_map"]["P2P3P4"] == 15
    assert doc["reflection_map"]["x-y"][0] == 19
    assert len(err.strip().splitlines()) == 8


def test_classify_csv(capsys):
    code, out, _ = run(capsys, "classify", "--format", "csv")
    assert code == 0 and len(out.strip().splitlines()) == 33


def test_export_sphere(capsys, tmp_path):
    path = tmp_path / "s18.txt"
    code, _, _ = run(capsys, "export-sphere", "18", "--output", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    verts = np.array([[float(t) for t in ln.split()[1:]] for ln in lines if ln.startswith("v ")])
    segs = [tuple(map(int, ln.split()[1:])) for ln in lines if ln.startswith("l ")]
    assert np.abs(np.linalg.norm(verts, axis=1) - 1).max() <= 1e-12
    r2, r6 = np.sqrt(2), np.sqrt(6)
    expected = [[1, 0, 0], [-1 / 3, -2 * r2 / 3, 0], [-1 / 3, r2 / 3, r6 / 3], [-1 / 3, r2 / 3, -r6 / 3]]
    assert np.abs(verts[:4] - expected).max() <= 1e-12
    assert all(1 <= i <= len(verts) and 1 <= j <= len(verts) for i, j in segs)
    # each arc starts and ends on consecutive axis vertices
    assert segs[0][0] == 1 and (segs[-1][1] == 4)


def test_export_sphere_unknown_id(capsys):
    assert usage_error(capsys, "export-sphere", "99") == 2


def test_outputs_are_deterministic(capsys, tmp_path):
    for argv in (["solve"], ["classify"], ["platonic", "dodecahedron"], ["export-sphere", "5"]):
        a, b = tmp_path / "a", tmp_path / "b"
        assert main(argv + ["--output", str(a)]) == 0
        assert main(argv + ["--output", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()
    capsys.readouterr()


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "isowrist", "solve", "--format", "csv"],
                         capture_output=True, text=True)
    assert out.returncode == 0
    assert len(out.stdout.strip().splitlines()) == 33
