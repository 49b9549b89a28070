import dataclasses
import json

import numpy as np
import pytest

from relqft import runner
from relqft.config import ConfigError, DEFAULT_CONFIG, ScenarioConfig
from relqft.scenarios import CHECKS, CheckOutcome, SUITES

FAST = ["restriction-duality", "spectral-condition"]


def test_registry_names_and_anchors_are_stable():
    for name, check in CHECKS.items():
        assert name == name.lower()
        assert " " not in name and " " not in check.anchor
        assert check.summary
    assert SUITES["all"] == tuple(CHECKS)
    for suite, names in SUITES.items():
        for name in names:
            assert name in CHECKS
    # every check belongs to exactly one proper suite
    proper = [n for suite, names in SUITES.items() if suite != "all"
              for n in names]
    assert sorted(proper) == sorted(CHECKS)


def test_resolve_checks_expands_and_dedupes():
    names = runner.resolve_checks(["covariance"])
    assert names == list(SUITES["covariance"])
    # mixing a suite with one of its own members adds nothing
    assert runner.resolve_checks(["covariance", names[0]]) == names
    # resolution order is registry order, not request order
    pair = runner.resolve_checks(["net-axioms", "relational-covariance"])
    assert pair == ["relational-covariance", "net-axioms"]
    assert runner.resolve_checks(["all"]) == list(CHECKS)
    assert runner.resolve_checks([]) == []


def test_resolve_checks_rejects_unknown():
    with pytest.raises(ConfigError, match="unknown suite or check"):
        runner.resolve_checks(["covarience"])


def test_validate_semantics_rejects_unknown_frame():
    cfg = dataclasses.replace(DEFAULT_CONFIG, frames=("sharp-regular", "nope"))
    with pytest.raises(ConfigError, match="unknown frame 'nope'"):
        runner.validate_semantics(cfg)


def test_validate_semantics_rejects_bad_momenta():
    # a single momentum is not boost-closed at N = 5
    cfg = dataclasses.replace(DEFAULT_CONFIG,
                              momenta=(DEFAULT_CONFIG.momenta[0],))
    with pytest.raises(ConfigError, match="cannot build a system model"):
        runner.validate_semantics(cfg)


def test_empty_target_list_passes():
    report = runner.run(DEFAULT_CONFIG, targets=[])
    assert report.outcomes == []
    assert report.exit_code == 0
    text = runner.render_text(report)
    assert text.splitlines() == ["check  verdict  worst-residual  seconds"]


def test_run_single_check():
    report = runner.run(DEFAULT_CONFIG, targets=FAST[:1])
    assert len(report.outcomes) == 1
    outcome = report.outcomes[0]
    assert outcome.name == FAST[0]
    assert outcome.verdict == "verified"
    assert outcome.seconds > 0
    assert report.exit_code == 0


def test_json_report_round_trip():
    report = runner.run(DEFAULT_CONFIG, targets=FAST)
    text = runner.render_json(report)
    assert json.loads(text) == report.to_dict()
    assert runner.load_report(text) == report.to_dict()


def test_load_report_rejects_other_schema():
    with pytest.raises(ConfigError, match="unsupported report schema"):
        runner.load_report('{"schema": 99}')


def test_canonical_bytes_exclude_timings():
    report = runner.run(DEFAULT_CONFIG, targets=FAST)
    before = report.canonical_bytes()
    for outcome in report.outcomes:
        outcome.seconds += 17.0
    assert report.canonical_bytes() == before
    assert b"seconds" not in before


def test_same_seed_same_bytes():
    a = runner.run(DEFAULT_CONFIG, targets=FAST)
    b = runner.run(DEFAULT_CONFIG, targets=FAST)
    assert a.canonical_bytes() == b.canonical_bytes()


def test_different_seed_different_bytes():
    cfg = dataclasses.replace(DEFAULT_CONFIG, seed=1)
    a = runner.run(DEFAULT_CONFIG, targets=["restriction-duality"])
    b = runner.run(cfg, targets=["restriction-duality"])
    assert a.canonical_bytes() != b.canonical_bytes()


def test_check_rng_streams():
    a = runner.check_rng(11, "alpha").random(4)
    b = runner.check_rng(11, "alpha").random(4)
    c = runner.check_rng(11, "beta").random(4)
    d = runner.check_rng(12, "alpha").random(4)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)
    assert not np.array_equal(a, d)


def test_exit_code_flags_bad_verdicts():
    good = CheckOutcome("a", "x", "verified", {}, {})
    for bad_verdict in ("failed", "no-certificate"):
        bad = CheckOutcome("b", "y", bad_verdict, {}, {})
        assert runner.RunReport(DEFAULT_CONFIG, 0, [good, bad]).exit_code == 1
    vac = CheckOutcome("c", "z", "vacuous", {}, {})
    assert runner.RunReport(DEFAULT_CONFIG, 0, [good, vac]).exit_code == 0


def test_render_text_table():
    report = runner.run(DEFAULT_CONFIG, targets=FAST)
    lines = runner.render_text(report).splitlines()
    assert lines[0].split() == ["check", "verdict", "worst-residual", "seconds"]
    assert len(lines) == 1 + len(FAST)
    assert lines[1].startswith(FAST[0])
    assert "verified" in lines[1]


def test_emit_rejects_unknown_format():
    report = runner.run(DEFAULT_CONFIG, targets=[])
    with pytest.raises(ConfigError, match="unknown format"):
        runner.emit(report, "yaml")


def test_outcome_record_shape():
    report = runner.run(DEFAULT_CONFIG, targets=FAST[:1])
    record = report.outcomes[0].to_record()
    assert set(record) == {"name", "anchor", "verdict", "residuals",
                           "details", "seconds"}
    assert record["name"] == FAST[0]
    slim = report.outcomes[0].to_record(include_timing=False)
    assert "seconds" not in slim
    # records must be JSON-clean all the way down
    json.dumps(record)
