import json

import numpy as np
import pytest

from qutrit_qsa.cli import main

FAST = ["--samples", "65536", "--replicates", "4", "--seed", "3"]


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_assign_json(capsys):
    code, out, _ = run(capsys, "assign", "--counts", "1,2,0", *FAST)
    assert code == 0
    d = json.loads(out)
    assert d["schema_version"] == 1 and d["counts"] == [1, 2, 0]
    assert sum(d["diagonal"]) == pytest.approx(1.0)
    assert out.endswith("}\n")


def test_assign_exact_mixed(capsys):
    code, out, _ = run(capsys, "assign", "--counts", "0,0,0", *FAST)
    d = json.loads(out)
    assert d["exact_by_symmetry"] is True
    np.testing.assert_array_equal(d["rho_real"], np.eye(3) / 3)


def test_assign_rerun_is_byte_identical(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["assign", "--counts", "0,3,1", *FAST, "--output", str(a)]) == 0
    assert main(["assign", "--counts", "0,3,1", *FAST, "--threads", "1", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize("fmt", ["csv", "text"])
def test_assign_other_formats(capsys, fmt):
    code, out, _ = run(capsys, "assign", "--counts", "0,1,0", *FAST, "--format", fmt)
    assert code == 0 and out.count("\n") == 4


def test_assign_with_kernel(capsys):
    k = "0.9,0.05,0.05;0.05,0.9,0.05;0.05,0.05,0.9"
    code, out, _ = run(capsys, "assign", "--counts", "0,1,0", *FAST, "--kernel", k)
    d = json.loads(out)
    assert code == 0 and d["kernel"] == k
    assert 1 / 3 < d["diagonal"][1] < 0.4


def test_bad_kernel_reports_error(capsys):
    code, _, err = run(capsys, "assign", "--counts", "0,1,0", *FAST, "--kernel", "1,0;0,0.5")
    assert code == 1 and err.startswith("error:")


@pytest.mark.parametrize(
    "argv",
    [
        ["conjecture", "--N", "1"],
        ["conjecture", "--N", "6"],
        ["assign", "--counts", "1,2"],
        ["assign", "--counts", "1,-2,0"],
        ["assign", "--counts", "1,2,0", "--samples", "100"],
        ["assign", "--counts", "1,2,0", "--replicates", "1"],
        ["marginal", "--grid", "8"],
    ],
)
def test_argument_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_conjecture(capsys):
    code, out, _ = run(capsys, "conjecture", "--N", "2", *FAST, "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["pass"] and len(d["rows"]) == 6


def test_conjecture_gaussian_needs_flag(capsys):
    code, _, err = run(capsys, "conjecture", "--N", "2", *FAST, "--prior", "gaussian")
    assert code == 2 and "experimental" in err
    code, _, _ = run(capsys, "conjecture", "--N", "2", *FAST, "--prior", "gaussian", "--experimental")
    assert code == 0


def test_marginal_csv(capsys):
    code, out, _ = run(capsys, "marginal", "--grid", "16", "--samples-per-cell", "256")
    rows = [line.split(",") for line in out.strip().split("\n")]
    assert code == 0 and len(rows) == 17 and all(len(r) == 17 for r in rows)


def test_marginal_json(capsys):
    code, out, _ = run(capsys, "marginal", "--grid", "16", "--samples-per-cell", "256", "--format", "json",
                       "--prior", "gaussian")
    d = json.loads(out)
    assert np.array(d["density"]).shape == (16, 16)
    assert d["prior"]["kind"] == "gaussian"


def test_section(capsys):
    code, out, _ = run(capsys, "section", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["axes"] == [3, 8] and len(d["polylines"]) == 1
    code, out, _ = run(capsys, "section", "--axes", "1,2", "--resolution", "32")
    assert code == 0 and len(out.strip().split("\n")) >= 32
    code, _, err = run(capsys, "section", "--axes", "4,4")
    assert code == 1 and "error" in err


def test_validate_suites(capsys):
    code, out, _ = run(capsys, "validate", "--suite", "basis")
    assert code == 0 and "PASS" in out
    code, out, _ = run(capsys, "validate", "--suite", "oracle", "--points", "20000", "--format", "json")
    assert code == 0 and json.loads(out)["pass"]
