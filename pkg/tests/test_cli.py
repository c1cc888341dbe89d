import json
import subprocess
import sys

import numpy as np
import pytest

from closedform import p0_roots


def run_cli(*args):
    proc = subprocess.run([sys.executable, "-m", "bvtp.cli", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


def data_lines(stdout):
    return [l for l in stdout.splitlines() if l and not l.startswith("#")]


def parse_csv(stdout):
    lines = data_lines(stdout)
    header = lines[0].split(",")
    rows = [dict(zip(header, line.split(","))) for line in lines[1:]]
    return header, rows


def test_validate_p0(problems_dir):
    code, out, _ = run_cli("validate", str(problems_dir / "p0.bvtp"))
    assert code == 0
    assert "kappa1=1 kappa2=1" in out


def test_validate_flipped_rows_names_interface(tmp_path, problems_dir):
    text = (problems_dir / "p2.bvtp").read_text()
    text = text.replace("row1 = 1.0 0.0 -0.5 0.0", "row1 = 0.0 1.0 0.0 -2.0")
    text = text.replace("row2 = 0.0 1.0 0.0 -2.0", "row2 = 1.0 0.0 -0.5 0.0")
    bad = tmp_path / "bad.bvtp"
    bad.write_text(text)
    code, _, err = run_cli("validate", str(bad))
    assert code == 1
    assert "ThetaDegenerate" in err
    assert "interface 1" in err


def test_validate_missing_key(tmp_path, problems_dir):
    text = (problems_dir / "p0.bvtp").read_text()
    text = text.replace("gamma4 = -1.0\n", "")
    bad = tmp_path / "missing.bvtp"
    bad.write_text(text)
    code, _, err = run_cli("validate", str(bad))
    assert code == 1
    assert "gamma4" in err


def test_missing_file_is_input_error():
    code, _, err = run_cli("validate", "no/such/file.bvtp")
    assert code == 1


def test_eigs_matches_closed_form(problems_dir):
    code, out, _ = run_cli("eigs", str(problems_dir / "p0.bvtp"),
                           "--window", "-5", "150")
    assert code == 0
    _, rows = parse_csv(out)
    got = [float(r["lambda"]) for r in rows]
    ref = p0_roots(-5.0, 150.0)
    assert len(got) == len(ref)
    assert max(abs(a - b) for a, b in zip(got, ref)) < 1e-9
    assert [int(r["index"]) for r in rows] == list(range(1, len(ref) + 1))


def test_eigs_deterministic(problems_dir):
    args = ("eigs", str(problems_dir / "p1.bvtp"), "--window", "-5", "60")
    _, out1, _ = run_cli(*args)
    _, out2, _ = run_cli(*args)
    assert data_lines(out1) == data_lines(out2)


def test_eigs_p1_agrees_with_p0(problems_dir):
    _, out0, _ = run_cli("eigs", str(problems_dir / "p0.bvtp"),
                         "--window", "-5", "60")
    _, out1, _ = run_cli("eigs", str(problems_dir / "p1.bvtp"),
                         "--window", "-5", "60")
    _, rows0 = parse_csv(out0)
    _, rows1 = parse_csv(out1)
    assert len(rows0) == len(rows1)
    for r0, r1 in zip(rows0, rows1):
        assert abs(float(r0["lambda"]) - float(r1["lambda"])) < 1e-9


def test_charfn_output(problems_dir):
    code, out, _ = run_cli("charfn", str(problems_dir / "p0.bvtp"),
                           "--window", "0", "1", "--grid", "2")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["lambda", "omega"]
    assert len(rows) == 2
    assert abs(float(rows[0]["omega"]) - 1.0) < 1e-9


def test_green_grid_and_symmetry(problems_dir):
    code, out, _ = run_cli("green", str(problems_dir / "p0.bvtp"),
                           "--lambda", "-1", "--grid", "21")
    assert code == 0
    _, rows = parse_csv(out)
    assert len(rows) == 441
    vals = {(r["x"], r["y"]): float(r["g"]) for r in rows}
    worst = 0.0
    for (x, y), g in vals.items():
        if x == y:
            continue
        worst = max(worst, abs(g - vals[(y, x)]) / max(abs(g), 1e-30))
    assert worst < 1e-8


def test_solve_manifest_residuals(problems_dir):
    code, out, _ = run_cli("solve", str(problems_dir / "p2.bvtp"),
                           "--lambda", "-3", "--f", "const:1")
    assert code == 0
    manifest = json.loads(out.splitlines()[0].removeprefix("# manifest: "))
    assert manifest["options"]["residual_ode"] < 1e-6
    assert manifest["options"]["residual_bc"] < 1e-6
    assert manifest["options"]["residual_trans"] < 1e-7


def test_solve_near_eigenvalue_is_numeric_error(problems_dir):
    ref = p0_roots(1.0, 2.0)[0]
    code, _, err = run_cli("solve", str(problems_dir / "p0.bvtp"),
                           "--lambda", repr(ref), "--f", "const:1")
    assert code == 2
    assert "NearEigenvalue" in err


def test_bad_f_spec_is_input_error(problems_dir):
    code, _, err = run_cli("solve", str(problems_dir / "p0.bvtp"),
                           "--lambda", "-1", "--f", "sin:1")
    assert code == 1


def test_expand_residual_column(problems_dir):
    code, out, _ = run_cli("expand", str(problems_dir / "p0.bvtp"),
                           "--window", "-5", "600", "--n", "6",
                           "--f", "poly:0,1,-1")
    assert code == 0
    _, rows = parse_csv(out)
    residuals = [float(r["residual"]) for r in rows]
    assert all(a >= b - 1e-12 for a, b in zip(residuals, residuals[1:]))
    assert residuals[-1] < residuals[0]


def test_jsonl_format(problems_dir):
    code, out, _ = run_cli("eigs", str(problems_dir / "p0.bvtp"),
                           "--window", "-5", "20", "--format", "jsonl")
    assert code == 0
    lines = out.splitlines()
    manifest = json.loads(lines[0])
    assert manifest["manifest"]["command"] == "eigs"
    recs = [json.loads(l) for l in lines[1:]]
    assert all("lambda" in r for r in recs)


def test_output_file(problems_dir, tmp_path):
    target = tmp_path / "eigs.csv"
    code, out, _ = run_cli("eigs", str(problems_dir / "p0.bvtp"),
                           "--window", "-5", "20", "--out", str(target))
    assert code == 0
    assert out == ""
    assert target.read_text().count("\n") >= 3


def test_eigenfunction_dump(problems_dir):
    code, out, _ = run_cli("eigenfunction", str(problems_dir / "p2.bvtp"),
                           "--window", "-5", "30", "--index", "1",
                           "--points", "11")
    assert code == 0
    header, rows = parse_csv(out)
    assert header == ["x", "u", "du"]
    assert len(rows) == 22  # 11 per subinterval, one-sided at the interface


@pytest.mark.slow
def test_verify_p0(problems_dir):
    code, out, _ = run_cli("verify", str(problems_dir / "p0.bvtp"), "--quiet")
    payload = json.loads(out)
    assert payload["failures"] == 0
    assert code == 0
    names = {c["name"] for c in payload["checks"]}
    assert "wronskian_recursion" in names and "oracle_agreement" in names
