# tests/test_cli.py

import json

import pytest

from run import main
from src.relations.classifier import classify
from src.relations.models import NotRelated, NotRelatedReason, RelationMode
from src.scenario.parser import parse_scenario_data, build_joint_scenario

from conftest import scenario_path


def _run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_classify_bell(capsys, cli_config):
    code, out, _ = _run(capsys, "classify", scenario_path("bell_phi_plus"), "--config", cli_config)
    assert code == 0
    report = json.loads(out)
    assert report["verdict"]["classification"] == "Entangled"
    assert report["verdict"]["baselines"]["schmidt_rank"] == 2
    assert report["metadata"]["tool"] == "psakit"
    assert report["metadata"]["seed"] is None
    assert report["echo"]["name"] == "bell_phi_plus"
    assert report["joint_tables"]["z|z"]["probabilities"] == [[0.5, 0.0], [0.0, 0.5]]
    assert "timing" not in report["metadata"]


def test_reports_are_byte_identical(capsys, cli_config):
    first = _run(capsys, "classify", scenario_path("werner_05"), "--config", cli_config)[1]
    second = _run(capsys, "classify", scenario_path("werner_05"), "--config", cli_config)[1]
    assert first == second
    assert first.endswith("}\n")


def test_table_format(capsys, cli_config):
    code, out, _ = _run(capsys, "classify", scenario_path("fair_dice"), "--config", cli_config,
                        "--format", "table")
    assert code == 0
    assert "Verdict" in out
    assert "IntensiveOnly" in out


def test_report_to_file(capsys, cli_config, tmp_path):
    target = tmp_path / "reports" / "bell.json"
    code, out, _ = _run(capsys, "classify", scenario_path("bell_phi_plus"), "--config", cli_config,
                        "--out", str(target))
    assert code == 0
    assert out == ""
    assert json.loads(target.read_text(encoding="utf-8"))["scenario"] == "bell_phi_plus"


def test_schema_error_exit_code(capsys, cli_config, tmp_path):
    code, out, err = _run(capsys, "classify", str(tmp_path / "missing.json"), "--config", cli_config)
    assert code == 1
    assert out == ""
    assert "error[schema]: file:" in err


def test_validation_error_names_the_defect(capsys, cli_config, write_scenario):
    path = write_scenario({"schema_version": "1", "dims": [2, 2], "bases_a": ["z"], "bases_b": ["z"],
                           "state": {"matrix": [[[0.6 if i == j == 0 else 0.5 if i == j == 1 else 0, 0]
                                                 for j in range(4)] for i in range(4)]}})
    code, _, err = _run(capsys, "classify", path, "--config", cli_config)
    assert code == 1
    assert "error[validation]: trace_defect=0.1" in err


def test_config_error(capsys, tmp_path):
    code, _, err = _run(capsys, "classify", scenario_path("bell_phi_plus"),
                        "--config", str(tmp_path / "missing.json"))
    assert code == 1
    assert "error[config]" in err


def test_ks_on_cabello_set(capsys, cli_config):
    code, out, _ = _run(capsys, "ks", scenario_path("cabello18"), "--config", cli_config)
    assert code == 0
    result = json.loads(out)["ks"]["system"]
    assert result["exists"] is False
    assert result["contexts_checked"] == 9
    assert result["summary"].startswith("no binary valuation exists")


def test_ks_budget(capsys, cli_config):
    code, _, err = _run(capsys, "ks", scenario_path("cabello18"), "--config", cli_config, "--budget", "1")
    assert code == 1
    assert "error[search_budget]" in err


def test_graph_of_die(capsys, cli_config):
    code, out, _ = _run(capsys, "graph", scenario_path("die"), "--config", cli_config)
    report = json.loads(out)
    assert code == 0
    assert report["graphs"]["system"]["node_count"] == 6
    assert report["graphs"]["system"]["contains_all_contexts"] is True
    assert report["reconstruction"] == {"complete": False, "rank": 6, "needed": 36}
    assert [row["potentia"] for row in report["psa_tables"]["system"]] == [pytest.approx(1 / 6)] * 6


def test_graph_reconstructs_qutrit(capsys, cli_config):
    _, out, _ = _run(capsys, "graph", scenario_path("qutrit_mub"), "--config", cli_config)
    reconstruction = json.loads(out)["reconstruction"]
    assert reconstruction["complete"] is True
    assert reconstruction["frobenius_error"] < 1e-8


def test_sample_bell(capsys, cli_config):
    code, out, _ = _run(capsys, "sample", scenario_path("bell_phi_plus"), "--config", cli_config,
                        "--shots", "2000", "--seed", "5")
    report = json.loads(out)
    assert code == 0
    assert report["metadata"]["seed"] == 5
    assert report["metadata"]["prng"] == "philox4x64"
    assert report["sampling"]["agrees_with_exact"] is True
    counts = report["sampling"]["tallies"]["z|z"]["counts"]
    assert counts[0][1] == counts[1][0] == 0
    assert counts[0][0] + counts[1][1] == 2000


def test_sample_needs_shots_and_seed(capsys, cli_config):
    code, _, err = _run(capsys, "sample", scenario_path("product_0_plus_structural"), "--config", cli_config)
    assert code == 1
    assert "error[sampling]" in err


def test_mode_override(capsys, cli_config):
    _, out, _ = _run(capsys, "classify", scenario_path("bell_phi_plus"), "--config", cli_config,
                     "--mode", "all-matched")
    report = json.loads(out)
    assert report["mode"] == "all_matched"
    assert report["verdict"]["effective"] is True
    assert len(report["joint_tables"]) == 4


def test_tolerance_override_is_recorded(capsys, cli_config):
    _, out, _ = _run(capsys, "classify", scenario_path("bell_phi_plus"), "--config", cli_config,
                     "--tol-effective", "0.001")
    assert json.loads(out)["metadata"]["tolerances"]["tol_effective"] == 0.001


def test_timing_is_opt_in(capsys, cli_config):
    _, out, _ = _run(capsys, "classify", scenario_path("bell_phi_plus"), "--config", cli_config, "--timing")
    assert json.loads(out)["metadata"]["timing"]["seconds"] >= 0


def test_anomaly_exit_code(capsys, cli_config, monkeypatch):
    monkeypatch.setattr("src.relations.classifier.intensive_related",
                        lambda *args: NotRelated(NotRelatedReason.NO_ISOMORPHISM, "forced"))
    code, out, _ = _run(capsys, "classify", scenario_path("bell_phi_plus"), "--config", cli_config)
    assert code == 2
    assert json.loads(out)["verdict"]["classification"] == "EffectiveOnlyAnomaly"


def test_echo_reproduces_the_run_with_overrides(capsys, cli_config):
    _, out, _ = _run(capsys, "classify", scenario_path("werner_09"), "--config", cli_config,
                     "--mode", "all-matched", "--tol-effective", "0.2")
    report = json.loads(out)
    echo = report["echo"]
    assert echo["mode"] == "all_matched"
    assert echo["tolerances"]["tol_effective"] == 0.2

    replay = parse_scenario_data(echo)
    assert replay.mode is RelationMode.ALL_MATCHED_CONTEXTS
    assert replay.settings.tol_effective == 0.2
    verdict = classify(build_joint_scenario(replay), replay.settings)
    assert verdict.classification.value == report["verdict"]["classification"]


def test_sample_echo_records_command_line_shots(capsys, cli_config):
    _, out, _ = _run(capsys, "sample", scenario_path("bell_phi_plus"), "--config", cli_config,
                     "--shots", "1000", "--seed", "9")
    assert json.loads(out)["echo"]["sampling"] == {"shots": 1000, "seed": 9}
