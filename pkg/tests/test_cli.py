import csv
import io
import json
import subprocess
import sys

import pytest

from curved_pauli.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_reduce_worked_example_json(capsys):
    code, out, _ = run(capsys, "reduce", "--kappa-ab2", "-4", "--eps-bar", "5", "--j", "1/2")
    assert code == 0
    doc = json.loads(out)
    assert doc["q"] == [-7.0, 0.0] and doc["gamma"] == [5.0, 0.0]
    for key in ("a", "b", "c", "g0", "g1", "A", "B", "C", "gamma", "delta", "epsH", "alpha", "beta", "q"):
        assert isinstance(doc[key], list) and len(doc[key]) == 2
    assert complex(*doc["alpha"]) * complex(*doc["beta"]) == pytest.approx(19)


def test_reduce_json_round_trip(capsys, tmp_path):
    target = tmp_path / "r.json"
    code, _, _ = run(capsys, "reduce", "--kappa-ab2", "0.3", "--eps-bar", "2+1j", "--two-j", "3",
                     "--output", str(target))
    assert code == 0
    doc = json.loads(target.read_text())
    assert json.loads(json.dumps(doc)) == doc
    assert doc["nu_bar"] == 4


@pytest.mark.parametrize("argv", [
    ["reduce", "--eps-bar", "5"],
    ["spectrum", "--j", "1/2"],
    ["spectrum", "--kappa-ab2", "0.01", "--j", "0.5"],
    ["spectrum", "--kappa-ab2", "0.01", "--j", "1/2", "--two-j", "1"],
    ["nonsense"],
    ["oracle", "--kappa-ab2", "0", "--parity", "2"],
])
def test_usage_errors_exit_64(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 64 and err


def test_flat_spectrum_points_to_oracle(capsys):
    code, _, err = run(capsys, "spectrum", "--kappa-ab2", "0", "--j", "1/2")
    assert code == 2 and "oracle" in err


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--kappa-ab2", "0.01", "--j", "1/2", "--n-max", "3")
    assert code == 0
    assert out.splitlines()[0].startswith("n,N,n_principal,accepted,eps_over_ry,det_n,poly_exists")
    table = {int(r["n"]): r for r in rows(out)}
    assert table[1]["accepted"] == "true" and float(table[1]["eps_over_ry"]) == pytest.approx(-0.21)
    assert float(table[1]["det_n"]) == pytest.approx(8)
    assert table[2]["accepted"] == "not-single-valued"
    assert float(table[3]["eps_over_ry"]) == pytest.approx(-1 / 9 + 0.09)
    assert all(r["accepted"] in {"true", "not-single-valued", "no-admissible-branch"} for r in table.values())


def test_spectrum_hyperbolic_reason(capsys):
    code, out, _ = run(capsys, "spectrum", "--kappa-ab2", "-0.2", "--j", "1/2", "--n-max", "7")
    assert code == 0
    assert "no-admissible-branch" in {r["accepted"] for r in rows(out)}


def test_spectrum_imag_column_only_when_needed(capsys):
    # spherical: complex lam_bar gives complex even-N determinants
    _, out, _ = run(capsys, "spectrum", "--kappa-ab2", "0.01", "--n-max", "2")
    assert "det_n_im" in out.splitlines()[0]
    assert any(float(r["det_n_im"]) != 0 for r in rows(out))
    # hyperbolic: everything is real, so no imaginary column
    _, out, _ = run(capsys, "spectrum", "--kappa-ab2", "-0.01", "--n-max", "2")
    assert "_im" not in out.splitlines()[0]


def test_check_poly(capsys):
    code, out, _ = run(capsys, "check-poly", "--kappa-ab2", "0.01", "--two-j", "3", "--n", "1",
                       "--discrepancy", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["determinant"] == pytest.approx([24.0, 0.0]) and doc["exists"] is False
    assert doc["discrepancy"]["derived_diagonal"] == "q-2m"


def test_oracle_flat_1s(capsys):
    code, out, _ = run(capsys, "oracle", "--kappa-ab2", "0", "--j", "1/2", "--parity", "-1", "--levels", "1")
    assert code == 0
    assert out.splitlines()[0] == "level,eps_over_ry,h,richardson,err_est"
    assert float(rows(out)[0]["richardson"]) == pytest.approx(-1, rel=1e-4)


def test_compare_geometric_shift(capsys):
    code, out, _ = run(capsys, "compare", "--kappa-ab2", "0.01", "--j", "1/2", "--levels", "2", "--h", "0.08")
    assert code == 0
    for r in rows(out):
        assert float(r["geometric_shift"]) == pytest.approx(0.01, abs=1e-14)


def test_output_dir_env(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("CURVED_PAULI_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "spectrum", "--kappa-ab2", "0.01", "--n-max", "2", "--output", "s.csv")
    assert code == 0 and out == ""
    assert (tmp_path / "s.csv").read_text().startswith("n,N,")


def test_determinism_byte_identical():
    cmd = [sys.executable, "-m", "curved_pauli", "compare", "--kappa-ab2", "-0.01", "--levels", "2", "--h", "0.1"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0
    assert "FAIL" not in out
