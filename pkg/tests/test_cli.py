"""Command-line interface tests: exit codes, output schema, determinism.

The JSON record is validated against the schema shipped in the package
data; sweep output is checked against the documented fixed column order.
"""

import importlib.resources
import json
import math

import jsonschema
import numpy as np
import pytest

from anyonspec.cli import (
    EXIT_CONFIG,
    EXIT_CONVERGENCE,
    EXIT_OK,
    EXIT_VERIFY,
    RunConfig,
    SWEEP_COLUMNS,
    main,
)
from anyonspec.forms import _coeff_defect
from anyonspec.specfun import Order, bessel_k

PI2 = math.pi**2


def _schema() -> dict:
    ref = importlib.resources.files("anyonspec") / "data" / "result_schema.json"
    return json.loads(ref.read_text())


def _run(capsys, *argv: str) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# ---------------------------------------------------------------------------
# specfun


def test_specfun_prints_value(capsys):
    code, out, _ = _run(capsys, "specfun", "--alpha", "0.5", "--x", "1")
    assert code == EXIT_OK
    value = float(out.splitlines()[0])
    assert value == pytest.approx(0.46106850444789454, rel=1e-13)


def test_specfun_json_payload(capsys):
    code, out, _ = _run(capsys, "specfun", "--alpha", "0.3", "--x", "0.7", "--json")
    assert code == EXIT_OK
    payload = json.loads(out)
    assert payload["value"] == pytest.approx(0.689562489756975, rel=1e-12)
    assert payload["regime"] == "series"
    assert payload["abs_error_bound"] > 0.0


def test_specfun_prime_flag(capsys):
    code, out, _ = _run(capsys, "specfun", "--alpha", "0.5", "--x", "1", "--prime")
    assert code == EXIT_OK
    assert float(out.splitlines()[0]) == pytest.approx(
        -0.6916027566718418, rel=1e-12
    )


def test_specfun_domain_error_names_constraint(capsys):
    code, _, err = _run(capsys, "specfun", "--alpha", "1.2", "--x", "1")
    assert code == EXIT_CONFIG
    payload = json.loads(err)
    assert "(0, 1)" in payload["error"]["message"]


def test_specfun_rejects_nonpositive_x(capsys):
    code, _, err = _run(capsys, "specfun", "--alpha", "0.5", "--x", "-1")
    assert code == EXIT_CONFIG
    assert "positive" in json.loads(err)["error"]["message"]


# ---------------------------------------------------------------------------
# spectrum records


def test_spectrum_record_validates_and_reproduces_reference(capsys):
    code, out, _ = _run(
        capsys, "spectrum", "--alpha", "0.5", "--beta", str(-PI2)
    )
    assert code == EXIT_OK
    record = json.loads(out)
    jsonschema.validate(record, _schema())
    assert record["schema_version"] == "1"
    assert record["closed_form_reference"] == pytest.approx(-1.0)
    assert record["eigenvalues"][0] == pytest.approx(-1.0, rel=1e-9)
    assert record["converged"] is True
    assert all(c["passed"] for c in record["identity_checks"])
    assert len(record["config_hash"]) == 64


def test_spectrum_friedrichs_record(capsys):
    code, out, _ = _run(capsys, "spectrum", "--alpha", "0.5", "--beta", "friedrichs")
    assert code == EXIT_OK
    record = json.loads(out)
    jsonschema.validate(record, _schema())
    assert record["charge"] is None
    assert record["charges"] is None
    assert record["eigenvalues"][0] >= -1e-9


def test_spectrum_numeric_fields_deterministic(capsys):
    argv = ("spectrum", "--alpha", "0.4", "--beta", "-2.5", "--basis-size", "20")
    code1, out1, _ = _run(capsys, *argv)
    code2, out2, _ = _run(capsys, *argv)
    assert code1 == code2 == EXIT_OK
    rec1, rec2 = json.loads(out1), json.loads(out2)
    rec1.pop("wall_time")
    rec2.pop("wall_time")
    assert rec1 == rec2


def test_spectrum_csv_format(capsys):
    code, out, _ = _run(
        capsys,
        "spectrum",
        "--alpha",
        "0.5",
        "--beta",
        "-1",
        "--output-format",
        "csv",
    )
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == SWEEP_COLUMNS
    fields = lines[1].split(",")
    assert float(fields[2]) == pytest.approx(-1.0 / math.pi**4, rel=1e-8)


def test_spectrum_extra_sectors(capsys):
    code, out, _ = _run(
        capsys,
        "spectrum",
        "--alpha",
        "0.5",
        "--beta",
        "-1",
        "--basis-size",
        "16",
        "--sectors",
        "1",
    )
    assert code == EXIT_OK
    record = json.loads(out)
    jsonschema.validate(record, _schema())
    extras = record["extra_sectors"]
    assert extras[0]["sector"] == 1
    assert min(extras[0]["eigenvalues"]) > 0.0


def test_spectrum_unconverged_exit_code(capsys):
    code, out, _ = _run(
        capsys,
        "spectrum",
        "--alpha",
        "0.5",
        "--beta",
        str(-PI2),
        "--basis-size",
        "2",
        "--lambda",
        "5.0",
        "--tolerance",
        "1e-10",
    )
    assert code == EXIT_CONVERGENCE
    record = json.loads(out)
    assert record["converged"] is False


def test_config_file_with_flag_override(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(
        "# comment line\nalpha = 0.3\nbeta = -2\nbasis_size = 14\n"
    )
    code, out, _ = _run(
        capsys, "spectrum", "--config", str(cfg), "--alpha", "0.5"
    )
    assert code == EXIT_OK
    record = json.loads(out)
    assert record["config"]["alpha"] == 0.5  # flag wins
    assert record["config"]["beta"] == -2.0
    assert record["config"]["basis_size"] == 14


def test_config_file_unknown_key_rejected(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("alpah = 0.3\n")
    code, _, err = _run(capsys, "spectrum", "--config", str(cfg))
    assert code == EXIT_CONFIG
    assert "alpah" in json.loads(err)["error"]["message"]


def test_invalid_potential_rejected_before_compute(capsys):
    code, _, err = _run(
        capsys,
        "spectrum",
        "--alpha",
        "0.5",
        "--beta",
        "-1",
        "--potential",
        "well:depth=1",
    )
    assert code == EXIT_CONFIG
    assert "well" in json.loads(err)["error"]["message"]


def test_run_config_hash_tracks_content():
    a = RunConfig(alpha=0.5, beta=-1.0)
    b = RunConfig(alpha=0.5, beta=-1.0)
    c = RunConfig(alpha=0.5, beta=-2.0)
    assert a.content_hash() == b.content_hash()
    assert a.content_hash() != c.content_hash()


# ---------------------------------------------------------------------------
# sweep


def test_sweep_grid_schema_and_order(capsys):
    code, out, _ = _run(
        capsys,
        "sweep",
        "--alpha-grid",
        "0.25,0.5,0.75",
        "--beta-grid=-5,-1,1",
        "--basis-size",
        "16",
    )
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert lines[0] == SWEEP_COLUMNS
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 9
    # row-major, alpha outer
    assert [r[0] for r in rows] == ["0.25"] * 3 + ["0.5"] * 3 + ["0.75"] * 3
    assert [r[1] for r in rows[:3]] == ["-5.0", "-1.0", "1.0"]
    # beta >= 0 rows leave the closed-form column empty
    for r in rows:
        if float(r[1]) > 0.0:
            assert r[3] == ""
        else:
            assert r[3] != ""
    # within each alpha, E0 is non-decreasing in beta
    for i in range(0, 9, 3):
        e0 = [float(r[2]) for r in rows[i : i + 3]]
        assert e0[0] <= e0[1] <= e0[2]


def test_sweep_reference_row(capsys):
    code, out, _ = _run(
        capsys,
        "sweep",
        "--alpha-grid",
        "0.5",
        "--beta-grid",
        str(-PI2),
    )
    assert code == EXIT_OK
    fields = out.strip().splitlines()[1].split(",")
    assert float(fields[2]) == pytest.approx(-1.0, rel=1e-6)
    assert fields[7] == "true"


def test_sweep_linspace_grid(capsys):
    code, out, _ = _run(
        capsys,
        "sweep",
        "--alpha-grid",
        "0.2:0.8:4",
        "--beta-grid",
        "-1",
        "--basis-size",
        "10",
    )
    assert code == EXIT_OK
    rows = out.strip().splitlines()[1:]
    assert [r.split(",")[0] for r in rows] == ["0.2", "0.4", "0.6000000000000001", "0.8"]


def test_sweep_partial_failure_keeps_going(capsys):
    code, out, _ = _run(
        capsys,
        "sweep",
        "--alpha-grid",
        "0.5,1.5",
        "--beta-grid",
        "-1",
        "--basis-size",
        "10",
    )
    assert code == EXIT_OK
    rows = out.strip().splitlines()[1:]
    good = rows[0].split(",")
    bad = rows[1].split(",")
    assert good[7] == "true"
    assert bad[7] == "false"
    assert bad[2] == ""  # no energy reported for the failed row


def test_sweep_all_rows_failing_exits_three(capsys):
    code, out, _ = _run(
        capsys, "sweep", "--alpha-grid", "1.5", "--beta-grid", "-1"
    )
    assert code == EXIT_CONVERGENCE
    assert out.strip().splitlines()[1].endswith(",false")


def test_sweep_workers_match_serial(capsys):
    argv = (
        "sweep",
        "--alpha-grid",
        "0.3,0.6",
        "--beta-grid=-2,-1",
        "--basis-size",
        "10",
    )
    code1, out1, _ = _run(capsys, *argv)
    code2, out2, _ = _run(capsys, *argv, "--workers", "2")
    assert code1 == code2 == EXIT_OK
    assert out1 == out2


def test_sweep_output_file(capsys, tmp_path):
    target = tmp_path / "scan.csv"
    code, out, _ = _run(
        capsys,
        "sweep",
        "--alpha-grid",
        "0.5",
        "--beta-grid",
        "-1",
        "--basis-size",
        "10",
        "--output",
        str(target),
    )
    assert code == EXIT_OK
    assert out == ""
    lines = target.read_text().strip().splitlines()
    assert lines[0] == SWEEP_COLUMNS
    assert len(lines) == 2


# ---------------------------------------------------------------------------
# form-eval


def _write_state(path, alpha: float, q: float, lam: float) -> None:
    r = np.geomspace(1e-6, 40.0, 400)
    phi = np.sqrt(r) * np.exp(-r)
    psi = phi + q * _coeff_defect(Order(alpha), lam, r)
    lines = [f"alpha={alpha} q={q} lambda={lam}", "r,psi0"]
    lines += [f"{float(ri)!r},{float(vi)!r}" for ri, vi in zip(r, psi)]
    path.write_text("\n".join(lines) + "\n")


def test_form_eval_frozen_value(capsys, tmp_path):
    state = tmp_path / "state.csv"
    _write_state(state, 0.5, 1.0, 1.0)
    code, out, _ = _run(
        capsys, "form-eval", "--state", str(state), "--beta", "2", "--json"
    )
    assert code == EXIT_OK
    payload = json.loads(out)
    # 9/4 - pi/2 + pi^2/2, up to grid discretization
    assert payload["form_value"] == pytest.approx(5.614005873749782, rel=1e-3)
    assert payload["lambda_invariance"] <= 1e-7
    assert payload["n_nodes"] == 400


def test_form_eval_friedrichs_rejects_charge(capsys, tmp_path):
    state = tmp_path / "state.csv"
    _write_state(state, 0.5, 0.7, 1.0)
    code, _, err = _run(
        capsys, "form-eval", "--state", str(state), "--beta", "friedrichs"
    )
    assert code == EXIT_CONFIG
    assert "charge" in json.loads(err)["error"]["message"]


def test_form_eval_bad_header(capsys, tmp_path):
    state = tmp_path / "state.csv"
    state.write_text("alpha=0.5 q=1\nr,psi0\n1.0,1.0\n")
    code, _, err = _run(
        capsys, "form-eval", "--state", str(state), "--beta", "1"
    )
    assert code == EXIT_CONFIG
    assert "alpha=" in json.loads(err)["error"]["message"]


# ---------------------------------------------------------------------------
# verify


def test_verify_identities_suite_passes(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "identities")
    assert code == EXIT_OK
    assert "PASS" in out
    assert "FAIL" not in out
    assert "checks passed" in out


def test_verify_deterministic_bytes(capsys):
    code1, out1, _ = _run(capsys, "verify", "--suite", "forms", "--seed", "7")
    code2, out2, _ = _run(capsys, "verify", "--suite", "forms", "--seed", "7")
    assert code1 == code2 == EXIT_OK
    assert out1 == out2


def test_verify_exit_codes_are_distinct():
    assert (EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_CONVERGENCE) == (0, 1, 2, 3)
