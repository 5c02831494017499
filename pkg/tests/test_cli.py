import json

import pytest

from qszego.cli import EXIT_FAIL, EXIT_NUMERICAL, EXIT_PASS, EXIT_USAGE, RunReport, load_schema, main, validate_report

E1 = "1,0,0,0,0,0,0,0"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_constants_report(capsys):
    code, out = run(capsys, "constants", "--n", "1")
    assert code == EXIT_PASS
    doc = json.loads(out)
    validate_report(doc)
    assert doc["outputs"]["c_paper"]["coeff"] == "6237/872"
    assert doc["outputs"]["c_paper"]["pi_half_exponent"] == -6
    assert doc["outputs"]["K"]["coeff"] == "109/1995840"
    code, out = run(capsys, "constants", "--n", "2")
    assert json.loads(out)["outputs"]["c_paper"]["coeff"] == "11486475/193472"


def test_constants_text(capsys):
    code, out = run(capsys, "constants", "--n", "1", "--text")
    assert code == EXIT_PASS
    assert "6237/872" in out


def test_kernel_eval_exact(capsys):
    code, out = run(capsys, "kernel-eval", "--n", "1", "--q", E1, "--p", E1, "--normalization", "unnormalized")
    assert code == EXIT_PASS
    doc = json.loads(out)
    assert doc["outputs"]["S"][0]["exact"] == "3/8"


def test_kernel_eval_conjugate_symmetry(capsys):
    q = "2,1/2,-1,1/3,1/2,1/4,0,-1/2"
    p = "3/2,-1/3,0,1,0,1/2,1/3,0"
    _, a = run(capsys, "kernel-eval", "--n", "1", "--q", q, "--p", p)
    _, b = run(capsys, "kernel-eval", "--n", "1", "--q", p, "--p", q)
    sa = json.loads(a)["outputs"]["S_float"]
    sb = json.loads(b)["outputs"]["S_float"]
    assert sa[0] == pytest.approx(sb[0], rel=1e-12)
    for x, y in zip(sa[1:], sb[1:]):
        assert x == pytest.approx(-y, rel=1e-12, abs=1e-15)


def test_exit_codes(capsys):
    assert run(capsys, "constants", "--n", "0")[0] == EXIT_USAGE
    assert run(capsys, "verify", "--suite", "bogus", "--n", "1")[0] == EXIT_USAGE
    assert run(capsys, "kernel-eval", "--n", "1", "--q", "1,2", "--p", E1)[0] == EXIT_USAGE
    assert run(capsys, "kernel-eval", "--n", "1", "--q", "x,0,0,0,0,0,0,0", "--p", E1)[0] == EXIT_USAGE
    boundary = "0,0,0,0,0,0,0,0"
    code, out = run(capsys, "kernel-eval", "--n", "1", "--q", boundary, "--p", boundary)
    assert code == EXIT_NUMERICAL
    assert json.loads(out)["status"] == "error"
    with pytest.raises(SystemExit) as exc:
        main(["--help"])
    assert exc.value.code == 0


def test_verify_suite_report(capsys):
    code, out = run(capsys, "verify", "--suite", "ode", "--n", "1")
    assert code == EXIT_PASS
    doc = json.loads(out)
    validate_report(doc)
    assert doc["outputs"]["passed"] is True
    code, out = run(capsys, "verify", "--suite", "oracle", "--n", "2", "--text")
    assert code == EXIT_PASS
    assert "PASS" in out


def test_verify_failure_exit_code(capsys):
    # an absurd threshold turns the reproduction check into a failure
    code, out = run(capsys, "verify", "--suite", "reproduce", "--n", "0", "--rel-tol", "1e-30", "--radial-nodes", "8", "--angular-nodes", "3")
    assert code == EXIT_FAIL


def test_report_round_trip():
    rep = RunReport("constants", {"n": 1}, {"x": 1}, {}, "abc", 0.5)
    doc = rep.to_json()
    validate_report(doc)
    assert RunReport.from_json(doc) == rep
    bad = dict(doc, extra=1)
    with pytest.raises(Exception):
        validate_report(bad)
    assert load_schema()["properties"]["schema_version"]
