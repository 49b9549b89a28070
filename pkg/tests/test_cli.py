import json

from relqft import runner
from relqft.cli import main
from relqft.scenarios import CHECKS


def test_verify_fast_check(capsys):
    assert main(["verify", "restriction-duality"]) == 0
    out = capsys.readouterr().out
    assert "restriction-duality" in out
    assert "verified" in out


def test_verify_json_output(capsys):
    assert main(["verify", "spectral-condition", "--format", "json",
                 "--seed", "77"]) == 0
    data = runner.load_report(capsys.readouterr().out)
    assert data["seed"] == 77
    assert data["checks"][0]["name"] == "spectral-condition"
    assert data["checks"][0]["verdict"] == "verified"


def test_verify_unknown_target_exits_2(capsys):
    assert main(["verify", "no-such-check"]) == 2
    assert "config error:" in capsys.readouterr().err


def test_bad_config_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{\n  "modle": {}\n}', encoding="utf-8")
    assert main(["verify", "restriction-duality", "--config", str(p)]) == 2
    err = capsys.readouterr().err
    assert "config error:" in err
    assert "bad.json:2" in err


def test_config_file_seed_applies(tmp_path, capsys):
    p = tmp_path / "scenario.json"
    p.write_text('{"seed": 31}', encoding="utf-8")
    assert main(["verify", "restriction-duality", "--config", str(p),
                 "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 31


def test_tol_flag_round_trips(capsys):
    assert main(["verify", "restriction-duality", "--format", "json",
                 "--tol", "eq=1e-8"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["config"]["tolerances"] == {"tol_eq": 1e-8}


def test_bad_tol_flag_exits_2(capsys):
    assert main(["verify", "restriction-duality", "--tol", "slack=1"]) == 2
    assert "unknown tolerance" in capsys.readouterr().err


def test_list_checks_covers_registry(capsys):
    assert main(["list-checks"]) == 0
    out = capsys.readouterr().out
    for name, check in CHECKS.items():
        assert name in out
        assert check.anchor in out


def test_demo_vacuum_orthogonality(capsys):
    assert main(["demo", "vacuum-orthogonality"]) == 0
    out = capsys.readouterr().out
    assert "1/N^2" in out
    assert "largest deviation" in out
