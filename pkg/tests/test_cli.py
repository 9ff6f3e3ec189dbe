"""Command-line frontend: dispatch, formats, exit codes, determinism."""

import json

import pytest

from greenkernel.cli import (
    EXIT_AUDIT,
    EXIT_OK,
    EXIT_SCOPE,
    EXIT_USAGE,
    dispatch,
)


def run(capsys, *argv):
    code = dispatch(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_fgl_show(capsys):
    code, out, _ = run(capsys, "fgl", "show", "--p", "2", "--n", "1", "--deg", "2")
    assert code == EXIT_OK
    assert "x*y" in out
    code, out, _ = run(capsys, "fgl", "show", "--p", "2", "--deg", "2", "--format", "json")
    data = json.loads(out)
    assert data["terms"] == {"0,1": 1, "1,0": 1, "1,1": 1}


def test_tower_show_prints_coproduct(capsys):
    code, out, _ = run(capsys, "tower", "show", "--p", "2", "--n", "1", "--r", "1")
    assert code == EXIT_OK
    assert "psi(x) = x⊗1 + 1⊗x + x⊗x" in out


def test_tower_check(capsys):
    code, out, _ = run(capsys, "tower", "check", "--p", "2", "--n", "1", "--r", "1",
                       "--s", "1", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["all_pass"] is True
    assert data["pdiv"]["all_pass"] is True
    assert data["axioms"]["H_2"]["all_pass"] is True


def test_green_value_s3(capsys):
    code, out, _ = run(capsys, "green", "value", "--group", "S3", "--p", "3",
                       "--n", "1", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["dim"] == 2
    assert data["kind"] == "general"


def test_green_value_p_prime_group(capsys):
    code, out, _ = run(capsys, "green", "value", "--group", "C2", "--p", "3",
                       "--n", "1", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["dim"] == 1


def test_green_res_ind(capsys):
    code, out, _ = run(capsys, "green", "res", "--group", "C4", "--p", "2",
                       "--subgroup", "(1 3)(2 4)", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["source_dim"] == 4 and data["target_dim"] == 2
    code, out, _ = run(capsys, "green", "ind", "--group", "S3", "--p", "3",
                       "--subgroup", "sylow", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["source_dim"] == 3 and data["target_dim"] == 2


def test_green_stable(capsys):
    code, out, _ = run(capsys, "green", "stable", "--group", "A4", "--p", "2",
                       "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["lim_dim"] == 2 == data["colim_dim"]


def test_group_file_input(tmp_path, capsys):
    path = tmp_path / "v4.grp"
    path.write_text("# klein four\n(1 2)(3 4)\n(1 3)(2 4)\n")
    code, out, _ = run(capsys, "green", "value", "--group-file", str(path),
                       "--p", "2", "--format", "json")
    assert code == EXIT_OK
    assert json.loads(out)["dim"] == 4


def test_malformed_group_file_reports_line(tmp_path, capsys):
    path = tmp_path / "bad.grp"
    path.write_text("(1 2)(3 4)\n(1 2\n")
    code, _, err = run(capsys, "green", "value", "--group-file", str(path), "--p", "2")
    assert code == EXIT_USAGE
    assert "line 2" in err


def test_unknown_group_is_usage_error(capsys):
    code, _, err = run(capsys, "green", "value", "--group", "NOPE", "--p", "2")
    assert code == EXIT_USAGE
    assert "unknown group" in err


def test_budget_exceeded_exit_code(capsys):
    code, _, err = run(capsys, "green", "value", "--group", "C9", "--p", "3",
                       "--budget", "4")
    assert code == EXIT_SCOPE
    assert "required budget: 9" in err


def test_env_budget_override(capsys, monkeypatch):
    monkeypatch.setenv("GREENKERNEL_BUDGET", "4")
    code, _, err = run(capsys, "green", "value", "--group", "C9", "--p", "3")
    assert code == EXIT_SCOPE


def test_scope_error_nonabelian_sylow(capsys):
    code, _, err = run(capsys, "green", "stable", "--group", "D4", "--p", "2")
    assert code == EXIT_SCOPE
    assert "scope" in err


def test_audit_assumptions_exit_zero(capsys):
    code, out, _ = run(capsys, "audit", "assumptions", "--p", "2", "--format", "json",
                       "--no-timing")
    assert code == EXIT_OK
    data = json.loads(out)
    assert all(r["status"] != "fail" for r in data["checks"])


def test_audit_mackey_s3_exit(capsys):
    # S3 at p=3 has honest MF5 failures on p'-mixing instances -> exit 3
    code, out, _ = run(capsys, "audit", "mackey", "--group", "S3", "--p", "3",
                       "--format", "json", "--no-timing")
    assert code == EXIT_AUDIT
    data = json.loads(out)
    mf5 = [r for r in data["checks"]
           if r["name"] == "MF5" and r["instance"] == "res^S3_C3 ind^S3_C3"]
    assert mf5 and mf5[0]["status"] == "pass-up-to-unit" and mf5[0]["scalar"] == 2
    # audit mackey on C4 is clean -> exit 0
    code, _, _ = run(capsys, "audit", "mackey", "--group", "C4", "--p", "2")
    assert code == EXIT_OK


def test_byte_identical_runs(capsys):
    argv = ["green", "value", "--group", "S3", "--p", "3", "--format", "json"]
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2
    argv = ["audit", "assumptions", "--p", "2", "--battery", "C2,C3",
            "--format", "json", "--no-timing"]
    _, out1, _ = run(capsys, *argv)
    _, out2, _ = run(capsys, *argv)
    assert out1 == out2


def test_jobs_parallel_matches_sequential(capsys):
    base = ["audit", "assumptions", "--p", "2", "--battery", "C2,C3,V4",
            "--format", "json", "--no-timing"]
    _, seq, _ = run(capsys, *base)
    _, par, _ = run(capsys, *(base + ["--jobs", "3"]))
    assert seq == par


def test_out_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code, out, _ = run(capsys, "green", "value", "--group", "V4", "--p", "2",
                       "--format", "json", "--out", str(path))
    assert code == EXIT_OK
    assert out == ""
    assert json.loads(path.read_text())["dim"] == 4


def test_frob_check(capsys):
    code, out, _ = run(capsys, "frob", "check", "--p", "2", "--profile", "4,2",
                       "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["is_frobenius"] is True
    assert data["pairing_rank"] == 8
    code, out, _ = run(capsys, "frob", "check", "--p", "3", "--profile", "3",
                       "--covector", "aug", "--format", "json")
    data = json.loads(out)
    assert data["is_frobenius"] is False


def test_frob_gysin(capsys):
    code, out, _ = run(capsys, "frob", "gysin", "--p", "2", "--source-profile", "4",
                       "--target-profile", "2", "--images", "y", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    # alpha(1) = x^2, alpha(y) = x^3 in the monomial basis
    assert data["gysin_matrix"] == [[0, 0], [0, 0], [1, 0], [0, 1]]


def test_usage_error_on_missing_args(capsys):
    code, _, err = run(capsys, "green", "res", "--group", "C4", "--p", "2")
    assert code == EXIT_USAGE
    code, _, _ = run(capsys, "green")
    assert code == EXIT_USAGE


def test_bad_frob_gysin_images(capsys):
    code, _, err = run(capsys, "frob", "gysin", "--p", "2", "--source-profile", "2",
                       "--target-profile", "4", "--images", "y")
    assert code == EXIT_USAGE  # y^2 != 0 in the target: not an algebra map


def test_subgroup_outside_group_rejected(capsys):
    code, _, err = run(capsys, "green", "res", "--group", "C4", "--p", "2",
                       "--subgroup", "(1 2)")
    assert code == EXIT_SCOPE


def test_composite_p_rejected(capsys):
    code, _, err = run(capsys, "green", "value", "--group", "C4", "--p", "4")
    assert code == EXIT_USAGE
    assert "prime" in err


def test_frob_check_explicit_covector(capsys):
    # the functional "coefficient of x + coefficient of 1" on F_2[x]/(x^2)
    code, out, _ = run(capsys, "frob", "check", "--p", "2", "--profile", "2",
                       "--covector", "1 + x", "--format", "json")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["is_frobenius"] is True and data["form"] == [1, 1]
