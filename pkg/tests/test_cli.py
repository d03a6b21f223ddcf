import csv
import io
import json

import pytest

from rotset.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def csv_rows(text):
    body = "\n".join(line for line in text.splitlines() if not line.startswith("#"))
    return list(csv.DictReader(io.StringIO(body)))


def test_classify_reports_not_extreme(capsys):
    code, out, _ = run(capsys, "classify", "--rho", "0.645+pi*1e-5")
    assert code == 0
    data = json.loads(out)
    assert data["classification"] == "NotExtreme"
    assert data["threshold"] == 4
    assert data["d"] == {"num": 1, "den": 3}
    assert data["config"]["rho_num"] == 129006283185307
    assert data["config"]["rho_den"] == 200000000000000


def test_classify_verify_and_table(capsys):
    code, out, _ = run(capsys, "classify", "--rho", "0.395+pi*1e-5", "--verify")
    assert code == 0
    assert json.loads(out)["classification"] == "NotExtreme"
    code, out, _ = run(capsys, "classify", "--rho", "0.395+pi*1e-5", "--emit", "csv", "--terms", "10")
    assert code == 0
    assert len(csv_rows(out)) == 10


def test_certify_pass_and_fail(capsys):
    code, out, _ = run(capsys, "certify", "--rho", "0.93+pi*1e-5", "--max-index", "100000")
    assert code == 0
    assert json.loads(out)["status"] == "PASS"
    code, out, _ = run(capsys, "certify", "--rho", "0.93", "--max-index", "98", "--uncertainty", "1/100")
    assert code == 2
    data = json.loads(out)
    assert data["status"] == "FAIL"
    assert data["first_failure"] == 12


def test_domain_errors_exit_one(capsys):
    code, out, err = run(capsys, "alpha", "--rho", "0.5")
    assert code == 1
    assert "boundary" in err
    assert out == ""
    code, _, err = run(capsys, "hull", "--rho", "0.93", "--max-index", "500")
    assert code == 1
    assert "window" in err


def test_alpha_csv_header_and_columns(capsys):
    code, out, _ = run(capsys, "alpha", "--rho", "0.93+pi*1e-5", "--count", "3")
    assert code == 0
    assert "# rho_den=200000000000000" in out
    assert "# max_safe_index=100000" in out
    rows = csv_rows(out)
    assert [r["m"] for r in rows] == ["1", "2", "3"]
    assert rows[0]["alpha_num"] == "13993716814693"
    assert rows[0]["member_I"] == "1"


def test_hull_outputs(capsys, tmp_path):
    code, out, _ = run(capsys, "hull", "--rho", "0.645+pi*1e-5", "--max-index", "300")
    assert code == 0
    data = json.loads(out)
    assert data["config"]["max_safe_index"] == 300
    assert data["best_diagonal_in_family"] == {"num": 1, "den": 3}
    assert len(data["vertices"]) == 7
    target = tmp_path / "hull.csv"
    code, _, _ = run(capsys, "hull", "--rho", "0.645+pi*1e-5", "--max-index", "40", "--emit", "csv", "--out", str(target))
    assert code == 0
    rows = csv_rows(target.read_text())
    assert set(rows[0]) == {"m", "n", "sign_x", "sign_y", "x_num", "x_den", "y_num", "y_den", "is_extreme"}
    assert any(r["is_extreme"] == "1" for r in rows)


def test_hull_svg_viewport(capsys, tmp_path):
    target = tmp_path / "hull.svg"
    code, _, _ = run(capsys, "hull", "--rho", "0.5+1e-6", "--max-index", "2000", "--quadrants", "4",
                     "--emit", "svg", "--out", str(target))
    assert code == 0
    head = target.read_text()[:2000]
    assert 'viewBox="0 0 1000 1000"' in head


def test_roundness_json(capsys):
    code, out, _ = run(capsys, "roundness", "--rho", "0.93+pi*1e-5", "--max-index", "10000")
    assert code == 0
    data = json.loads(out)
    assert data["sandwich_ok"] is True
    assert data["lower_decimal"] == "0.659161886127"
    assert data["iso_decimal"] == "0.73214477434"
    assert data["factor_unit"] == "1/pi"


def test_scan_csv(capsys):
    code, out, _ = run(capsys, "scan", "--from", "0.6", "--to", "0.7", "--step", "0.05", "--max-index", "1000")
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 3
    assert rows[0]["rho_expr"] == "0.6+pi*1e-7"
    assert "# from=0.6" in out


def test_simulate_csv(capsys):
    code, out, _ = run(capsys, "simulate", "--rho", "0.93+pi*1e-5", "--steps", "1000", "--orbits", "10",
                       "--wander", "300", "--seed", "7")
    assert code == 0
    rows = csv_rows(out)
    assert len(rows) == 10
    assert list(rows[0]) == ["orbit_id", "start_circle", "start_angle", "est_x", "est_y", "inside_hull"]
    assert all(r["inside_hull"] == "1" for r in rows)


def test_claim_check(capsys):
    code, out, _ = run(capsys, "claim-check", "--rho", "0.645+pi*1e-5", "--difference-bound", "10", "--max-index", "41")
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_unknown_subcommand_is_rejected():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
