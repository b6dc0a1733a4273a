import json
import math
import subprocess
import sys

import numpy as np
import pytest

from kratzer_spectra import ab, oracle
from kratzer_spectra.cli import DEMO_SWEEP, main
from kratzer_spectra.io import (
    format_value,
    parse_sweep_text,
    read_csv_table,
    to_csv,
)
from kratzer_spectra.model import DomainError, RadialProblem


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spectrum_coulomb(capsys):
    code, out, _ = run(capsys, "spectrum", "--A", "1", "--B", "0", "--l", "0", "--levels", "3")
    assert code == 0
    rows = read_csv_table(out)
    assert [r["n"] for r in rows] == [0, 1, 2]
    np.testing.assert_allclose([r["energy"] for r in rows], [-0.5, -0.125, -1 / 18], rtol=1e-15)
    assert [r["s"] for r in rows] == [1, 1, 1]


def test_spectrum_b1_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--A", "1", "--B", "1", "--levels", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert [r["energy"] for r in doc["rows"]] == [-0.125, pytest.approx(-1 / 18, rel=1e-15)]
    assert set(doc["rows"][0]) == {"A", "B", "l", "n", "energy", "s", "decay_alpha"}


def test_spectrum_long_aliases(capsys):
    _, a, _ = run(capsys, "spectrum", "--A", "2", "--B", "0.5", "--l", "1", "--levels", "2")
    _, b, _ = run(capsys, "spectrum", "--coulomb-strength", "2", "--inverse-square-strength", "0.5",
                  "--angular-momentum", "1", "--levels", "2")
    assert a == b


def test_spectrum_regularity_violation(capsys):
    code, _, err = run(capsys, "spectrum", "--A", "1", "--B", "-1", "--l", "0")
    assert code != 0
    assert "-0.125" in err and "regularity" in err


def test_verify_b1(capsys):
    code, out, _ = run(capsys, "verify", "--A", "1", "--B", "1", "--levels", "2")
    assert code == 0
    rows = read_csv_table(out)
    assert all(r["status"] == "PASS" and r["max_deviation"] < 1e-6 for r in rows)


def test_verify_coulomb_l2(capsys):
    code, out, _ = run(capsys, "verify", "--A", "1", "--B", "0", "--l", "2", "--levels", "1")
    (row,) = read_csv_table(out)
    assert code == 0
    for key in ("E_closed", "E_fd", "E_galerkin"):
        assert row[key] == pytest.approx(-1 / 18, abs=1e-6)


def test_verify_too_tight_tolerance(capsys):
    code, out, _ = run(capsys, "verify", "--A", "1", "--B", "1", "--levels", "2", "--tol", "1e-12")
    assert code != 0
    assert any(r["status"] == "FAIL" for r in read_csv_table(out))


def test_verify_oracle_failure_marks_rows(capsys):
    code, out, _ = run(capsys, "verify", "--A", "1", "--B", "1", "--M", "150000")
    (row,) = read_csv_table(out)
    assert code != 0 and row["status"] == "FAILED"


def test_compare_ab_demo(capsys):
    code, out, err = run(capsys, "compare-ab")
    rows = read_csv_table(out)
    assert code == 0
    assert len(rows) == len(DEMO_SWEEP)
    assert sorted(r["verdict"] for r in rows) == sorted([ab.CONFIRMS_CORRECTED] * 3 + [ab.DEGENERATE])
    assert "CONFIRMS_CORRECTED=3" in err and "DEGENERATE=1" in err


def test_compare_ab_single_row(capsys):
    code, out, _ = run(capsys, "compare-ab", "--A", "1", "--B", "1", "--l", "0")
    (row,) = read_csv_table(out)
    assert row["E_ab"] == pytest.approx(-0.190983, abs=1e-6)
    assert row["E_ab_corrected"] == -0.125
    assert row["level_bound"] == 1 and row["exceeds_ab_bound"] is False


def test_compare_ab_json_fields(capsys):
    code, out, _ = run(capsys, "compare-ab", "--A", "1", "--B", "1", "--levels", "3",
                       "--format", "json", "--oracle", "galerkin")
    doc = json.loads(out)
    assert code == 0
    assert list(doc["rows"][0]) == list(ab.DiscrepancyRow.__dataclass_fields__)
    assert doc["summary"] == {ab.CONFIRMS_CORRECTED: 3}
    assert [r["exceeds_ab_bound"] for r in doc["rows"]] == [False, False, True]
    assert doc["oracle"] == "galerkin" and doc["tol"] == 1e-8


def test_wavefunction_hydrogen(capsys):
    code, out, _ = run(capsys, "wavefunction", "--A", "1", "--B", "0", "--rmin", "0.1",
                       "--rmax", "10", "--samples", "50")
    rows = read_csv_table(out)
    r = np.array([row["r"] for row in rows])
    phi = np.array([row["phi"] for row in rows])
    ratio = phi / (r * np.exp(-r))
    np.testing.assert_allclose(ratio, ratio[0], rtol=1e-13)


def test_wavefunction_with_oracle_node(capsys):
    code, out, _ = run(capsys, "wavefunction", "--A", "1", "--B", "1", "--n", "1", "--rmin", "0.05",
                       "--rmax", "40", "--samples", "800", "--with-oracle")
    rows = read_csv_table(out)
    phi = np.array([row["phi"] for row in rows])
    phio = np.array([row["phi_oracle"] for row in rows])
    assert code == 0
    np.testing.assert_allclose(phio, phi, atol=1e-4 * np.max(np.abs(phi)))
    r = np.array([row["r"] for row in rows])
    grid = oracle.default_grid(RadialProblem.from_params(1, 1, 0), 1)
    cross = r[np.nonzero(np.diff(np.sign(phio)))[0]]
    assert len(cross) == 1 and abs(cross[0] - 6.0) < grid.h + (r[1] - r[0])


@pytest.mark.parametrize("extra", [["--samples", "0"], ["--rmin", "0"], ["--rmin", "-1"]])
def test_wavefunction_usage_errors(capsys, extra):
    with pytest.raises(SystemExit) as err:
        main(["wavefunction", "--A", "1", "--B", "0", *extra])
    assert err.value.code == 2


def test_missing_parameters_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["spectrum", "--A", "1"])
    assert err.value.code == 2


def test_determinism_and_stamp(capsys):
    args = ["compare-ab", "--A", "2", "--B", "0.5", "--l", "1", "--levels", "2"]
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert a == b
    _, c, _ = run(capsys, *args, "--stamp")
    assert c.startswith("# tool: kratzer_spectra")
    assert read_csv_table(c) == read_csv_table(a)


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "out.csv"
    code, out, _ = run(capsys, "spectrum", "--A", "1", "--B", "1", "--output", str(dest))
    assert code == 0 and out == ""
    assert read_csv_table(dest.read_text())[0]["energy"] == -0.125


SWEEP_TEXT = """\
# A B l n_max
1 1 0 1
2 0.5 1 0  M=8000 N_b=20   # overrides
0.5 0 0 1 lambda=0.5 mu=1 nu=2
"""


def test_sweep_line_format():
    recs = parse_sweep_text(SWEEP_TEXT)
    assert [(r.A, r.B, r.l, r.n_max) for r in recs] == [(1, 1, 0, 1), (2, 0.5, 1, 0), (0.5, 0, 0, 1)]
    assert recs[1].overrides == {"M": 8000, "N_b": 20}
    assert recs[2].overrides == {"lambda": 0.5, "mu": 1.0, "nu": 2.0}


def test_sweep_json_format():
    recs = parse_sweep_text(SWEEP_TEXT)
    again = parse_sweep_text(json.dumps([r.to_dict() for r in recs]))
    assert again == recs
    assert parse_sweep_text(json.dumps({"records": [r.to_dict() for r in recs]})) == recs


@pytest.mark.parametrize("text, exc", [
    ("1 1 0", ValueError),
    ("1 1 0 1 bogus=3", ValueError),
    ("1 1 0 1 M", ValueError),
    ("1 -1 0 0", DomainError),
    ("-1 1 0 0", DomainError),
])
def test_sweep_errors(text, exc):
    with pytest.raises(exc):
        parse_sweep_text(text)


def test_sweep_driven_commands(tmp_path, capsys):
    path = tmp_path / "sweep.txt"
    path.write_text(SWEEP_TEXT)
    code, out, _ = run(capsys, "spectrum", "--sweep", str(path))
    assert code == 0 and len(read_csv_table(out)) == 5
    code, out, _ = run(capsys, "verify", "--sweep", str(path))
    rows = read_csv_table(out)
    assert code == 0 and len(rows) == 5 and all(r["status"] == "PASS" for r in rows)
    code, out, _ = run(capsys, "compare-ab", "--sweep", str(path), "--oracle", "galerkin")
    assert len(read_csv_table(out)) == 5


def test_csv_round_trip(capsys):
    code, out, _ = run(capsys, "compare-ab")
    parsed = read_csv_table(out)
    report = ab.build_discrepancy_report(DEMO_SWEEP)
    assert len(parsed) == len(report.rows)
    for got, row in zip(parsed, report.as_dicts()):
        assert set(got) == set(row)
        for key, val in row.items():
            if isinstance(val, float) and math.isnan(val):
                assert math.isnan(got[key])
            elif val == "":
                assert got[key] is None
            else:
                assert got[key] == val, key


def test_format_value_exact():
    for v in (0.1, -1 / 3, 1e-300, 2.0 ** 0.5, -0.19098300562505258):
        assert float(format_value(v)) == v
    assert format_value(True) == "true" and format_value(None) == ""


def test_to_csv_header():
    text = to_csv([{"a": 1.5}], ["a"], header=["x: y"])
    assert text == "# x: y\na\n1.5\n"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "kratzer_spectra.cli", "spectrum", "--A", "1", "--B", "0"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.splitlines()[1] == "1,0,0,0,-0.5,1,1"
