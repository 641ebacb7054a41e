from __future__ import annotations

import json

import pytest

from superaffine.cli import main
from superaffine.errors import InvalidConfig
from superaffine.roots import A_FOUR
from superaffine.suites import parse_config, report_exit_code, run_suite


def test_config_defaults_and_period():
    cfg = parse_config({"suites": "roots"})
    assert cfg.type_tag == A_FOUR and cfg.p_star == 4
    assert parse_config({"type": "A(2m-1,2n-1)^(2)", "m": 1, "n": 2, "suites": "roots"}).p_star == 2


def test_config_rejects_too_small_window_for_flat_search():
    with pytest.raises(InvalidConfig, match="window"):
        parse_config({"window": 2, "suites": "q-flat-search"})


def test_config_errors_point_at_the_line():
    text = '{\n  "window": "x"\n}'
    with pytest.raises(InvalidConfig, match="cfg.json: line 2: field 'window'"):
        parse_config(None, text, "cfg.json")
    with pytest.raises(InvalidConfig, match="unknown field 'windw'"):
        parse_config(None, '{"windw": 3}', "cfg.json")
    with pytest.raises(InvalidConfig, match="inject_fault"):
        parse_config({"inject_fault": "nope"})


def test_matrix_suites_need_the_order_four_type():
    with pytest.raises(InvalidConfig, match="needs type"):
        parse_config({"type": "D(m+1,n)^(2)", "m": 1, "n": 1, "suites": "sigma"})


def test_config_echo_round_trips():
    cfg = parse_config({"m": 1, "n": 1, "window": 8, "suites": "roots,sigma", "seed": 5})
    again = parse_config(None, json.dumps({k: v for k, v in cfg.echo().items() if k != "p_star"}))
    assert again.echo() == cfg.echo()


def test_roots_suite_emits_only_root_records(capsys):
    assert main(["verify", "--suites", "roots", "--format", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["records"] and all(r["name"].startswith("roots") for r in report["records"])
    assert report["summary"]["fail"] == 0


def test_injected_sigma_fault_fails(capsys):
    assert main(["verify", "sigma", "--inject-fault", "sigma-sign"]) == 1
    out = capsys.readouterr().out
    assert "FAIL" in out and "sigma.bracket" in out


def test_reports_are_deterministic_across_workers():
    cfg1 = parse_config({"suites": "roots,clifford,sigma", "window": 8, "workers": 1})
    cfg3 = parse_config({"suites": "roots,clifford,sigma", "window": 8, "workers": 3})
    a, b = run_suite(cfg1), run_suite(cfg3)
    a["config"].pop("workers", None)
    b["config"].pop("workers", None)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert report_exit_code(a) == 0


def test_exit_codes(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"window": 3.5}')
    assert main(["verify", "--config", str(bad)]) == 2
    assert "line 1" in capsys.readouterr().err
    assert main(["verify", "--config", str(tmp_path / "missing.json")]) == 2
    assert main(["module", "build-vkphi", "--var-degree", "1", "--K", "2"]) == 1


def test_report_subcommand_re_renders(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "roots", "--format", "json", "--out", str(out)]) == 0
    capsys.readouterr()
    assert main(["report", str(out)]) == 0
    text = capsys.readouterr().out
    assert "passed, 0 failed" in text


def test_build_search_and_clifford_commands(capsys):
    assert main(["build", "q", "--window", "4"]) == 0
    assert json.loads(capsys.readouterr().out)
    assert main(["search", "flat", "--module", "grassmann", "--d", "1"]) == 0
    capsys.readouterr()
    assert main(["clifford", "gram", "--lambda", "eval:1"]) == 0
    gram = json.loads(capsys.readouterr().out)
    assert gram["quotient_dim"] == 2
