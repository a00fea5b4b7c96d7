import json
import subprocess
import sys
from pathlib import Path

import pytest

from kvjet.cli import ORDER_CAP, run

GOLDEN = Path(__file__).parent / "golden"


def run_capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "argv,golden",
    [
        (["series", "--name", "gamma", "--order", "6"], "series_gamma_6.json"),
        (["compare-appendix", "--order", "6"], "compare_solutions_6.json"),
        (["series", "--name", "phi1", "--order", "4", "--format", "csv"], "series_phi1_4.csv"),
    ],
)
def test_golden(capsys, argv, golden):
    code, out, _ = run_capture(capsys, argv)
    assert code == 0
    assert out == (GOLDEN / golden).read_text()


def test_gamma_example(capsys):
    code, out, _ = run_capture(capsys, ["series", "--name", "gamma", "--alpha", "1/4", "--order", "4", "--format", "json"])
    assert code == 0
    assert json.loads(out)["coeffs"] == ["0", "1/24", "1/48", "1/360", "-1/2880"]


def test_compare_example(capsys):
    code, out, _ = run_capture(capsys, ["compare-appendix", "--order", "4"])
    assert code == 0
    assert json.loads(out)["degree4"] == {"universal": "-1/480", "vergne": "-1/360", "am": "-1/720"}


def test_deterministic(capsys):
    first = run_capture(capsys, ["bch", "--order", "5"])
    second = run_capture(capsys, ["bch", "--order", "5"])
    assert first == second


def test_bch_dynkin(capsys):
    code, out, _ = run_capture(capsys, ["bch", "--order", "5", "--dynkin"])
    rep = json.loads(out)
    assert code == 0 and rep["dynkin_agrees"]
    assert rep["hall_coords"]["2"] == {"[x,y]": "1/2"}
    assert rep["hall_coords"]["3"] == {"[x,[x,y]]": "1/12", "[y,[x,y]]": "-1/12"}


def test_hall_counts(capsys):
    code, out, _ = run_capture(capsys, ["hall", "--order", "6"])
    assert code == 0
    assert json.loads(out)["counts"] == [2, 1, 2, 3, 6, 9]


def test_verify_eq1_scan(capsys):
    code, out, _ = run_capture(capsys, ["verify-eq1", "--order", "4", "--scan-conventions"])
    rep = json.loads(out)
    assert code == 0
    assert rep["convention_scan"] == {"neg_phi1_sum": False, "phi1_neg_sum": True}


def test_verify_eq1_neg_phi1_sum_fails(capsys):
    code, out, _ = run_capture(capsys, ["verify-eq1", "--order", "4", "--convention", "neg_phi1_sum"])
    assert code == 1
    assert json.loads(out)["failures"]


def test_verify_trace_exit_codes(capsys):
    assert run_capture(capsys, ["verify-trace", "--order", "8"])[0] == 0
    code, out, _ = run_capture(capsys, ["verify-trace", "--order", "8", "--rho", "1"])
    assert code == 1 and json.loads(out)["eps0"]


def test_symmetry(capsys):
    assert run_capture(capsys, ["verify-symmetry"])[0] == 0
    assert run_capture(capsys, ["verify-symmetry", "--alpha", "0"])[0] == 1


def test_f_check(capsys):
    assert run_capture(capsys, ["f-check", "--order", "6"])[0] == 0
    code, out, _ = run_capture(capsys, ["f-check", "--order", "6", "--perturb", "2:1/3"])
    assert code == 1
    # an eps t^2 term in f shows up as -2 eps t in gamma_f
    assert json.loads(out)["first_failure"] == {"series": "gamma_f_odd", "degree": 1, "value": "-5/8", "expected": "1/24"}
    assert run_capture(capsys, ["f-check", "--perturb", "nonsense"])[0] == 2


def test_independence(capsys):
    code, out, _ = run_capture(capsys, ["independence", "--order", "7"])
    rep = json.loads(out)
    assert code == 0 and rep["lemma_l14"] == {"0": True, "1": True, "2": True}
    assert run_capture(capsys, ["independence", "--order", "4", "--n", "3"])[0] == 2


def test_usage_errors(capsys):
    code, _, err = run_capture(capsys, ["series", "--name", "phi1", "--order", str(ORDER_CAP + 1)])
    assert code == 2 and "--unsafe-order" in err
    assert run_capture(capsys, ["series", "--name", "phi1", "--order", "14", "--unsafe-order"])[0] == 0
    assert run_capture(capsys, ["series", "--name", "nope"])[0] == 2
    assert run_capture(capsys, ["series", "--name", "phi1", "--alpha", "x/y"])[0] == 2
    assert run_capture(capsys, ["verify-d2", "--order", "2"])[0] == 2
    assert run_capture(capsys, ["series", "--name", "phi1", "--order", "0"])[0] == 2


def test_pretty_and_output_file(capsys, tmp_path):
    code, out, _ = run_capture(capsys, ["series", "--name", "phi1", "--order", "2", "--format", "pretty"])
    assert out == "1 - 1/2 t + 1/12 t^2\n"
    target = tmp_path / "r.json"
    assert run_capture(capsys, ["verify-d2", "--order", "4", "--output", str(target)])[0] == 0
    assert json.loads(target.read_text())["pass"] is True


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "kvjet", "series", "--name", "psi", "--order", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["coeffs"] == ["0", "1/4", "-1/24"]
