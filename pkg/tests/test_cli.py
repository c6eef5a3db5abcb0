import json

from qseries.cli import main
from qseries.harness import TIMESTAMP_KEY


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval(capsys):
    code, out, _ = _run(capsys, "eval", "qbinom(4,2,0.5)")
    assert code == 0 and out.strip() == "2.1875"
    code, out, _ = _run(capsys, "eval", "--mode", "rational", "qint(zero_to_one,[],monomial(1),1/2)")
    assert code == 0 and out.strip() == "2/3"


def test_eval_parse_error_exits_2(capsys):
    code, _, err = _run(capsys, "eval", "phi([0.3,0.5)")
    assert code == 2 and "line 1, column 13" in err


def test_eval_math_error_exits_1(capsys):
    code, _, err = _run(capsys, "eval", "phi([0.3,0.4],[0.5],0.5,1.5)")
    assert code == 1 and "ConvergenceError" in err


def test_usage_errors_exit_2(capsys):
    assert _run(capsys, "verify", "no_such_identity")[0] == 2
    assert _run(capsys, "verify-all", "--samples", "0")[0] == 2
    assert _run(capsys, "frobnicate")[0] == 2
    assert _run(capsys, "verify", "q_binomial", "--params", "{oops")[0] == 2


def test_verify_and_forced_failure(capsys):
    code, out, _ = _run(capsys, "verify", "q_saalschutz", "--samples", "4", "--mode", "rational")
    assert code == 0 and out.startswith("PASS identities/q_saalschutz: 4/4")
    code, out, _ = _run(capsys, "verify", "heine_gauss_sum", "--samples", "3", "--tol", "1e-30")
    assert code == 1 and "FAIL" in out


def test_verify_all_other_catalog(capsys):
    code, out, _ = _run(capsys, "verify-all", "--catalog", "transforms", "--samples", "2",
                        "--only", "heine_1", "--only", "heine_2")
    assert code == 0
    assert out.count("PASS transforms/") == 2


def test_list(capsys):
    code, out, _ = _run(capsys, "list", "--catalog", "bibasic")
    assert code == 0 and "delta_6phi5" in out


def test_report_determinism_and_config_precedence(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"seed": 5, "samples": 2, "catalog": "qintegrals"}))
    outs = []
    for name in ("one.json", "two.json"):
        path = tmp_path / name
        assert _run(capsys, "report", "--config", str(cfg), "--out", str(path))[0] == 0
        data = json.loads(path.read_text())
        data.pop(TIMESTAMP_KEY)
        outs.append(json.dumps(data, indent=2))
    assert outs[0] == outs[1]
    path = tmp_path / "three.json"
    assert _run(capsys, "report", "--config", str(cfg), "--samples", "3", "--out", str(path))[0] == 0
    data = json.loads(path.read_text())
    assert data["config"]["seed"] == 5 and data["config"]["samples"] == 3


def test_report_csv(capsys, tmp_path):
    path = tmp_path / "r.csv"
    code, _, _ = _run(capsys, "report", "--format", "csv", "--only", "q_binomial",
                      "--samples", "2", "--out", str(path))
    assert code == 0
    assert path.read_text().splitlines()[0].startswith("catalog,id,index,pass")


def test_bad_config_file_exits_2(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"seed": 1, "flavour": "x"}))
    assert _run(capsys, "verify-all", "--config", str(cfg))[0] == 2
