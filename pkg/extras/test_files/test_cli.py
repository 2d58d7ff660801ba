"""
Tests for the command-line surface and report handling
"""
import json
import os

import numpy as np
import pandas as pd
import pytest

from main.synth_main import (
    TOOL_VERSION,
    apply_overrides,
    classify_command,
    main,
    recompute_fitness,
    run_scenario,
    verify_command,
)
from scenarios import builtin_problem
from utils.errors import EXIT_NUMERICAL, EXIT_OK, EXIT_VALIDATION, ValidationError
from utils.file_utils import read_json_report, trace_csv_path, validate_report_file


@pytest.fixture
def fourier_report(tmp_path):
    path = str(tmp_path / "fourier.json")
    code = main(["synth", "--scenario", "fourier4", "--generations", "15", "--restarts", "2",
                 "--seed", "7", "--out", path])
    assert code == EXIT_OK
    return path


def test_list_builtins(capsys):
    assert main(["list-builtins"]) == EXIT_OK
    output = capsys.readouterr().out
    for name in ("fourier4", "cz6", "linear_cluster4"):
        assert name in output


def test_classify_aliases(capsys):
    assert main(["classify", "--target", "fourier"]) == EXIT_OK
    assert "Trivial" in capsys.readouterr().out
    report = classify_command("cz", quiet=True)
    assert report["classification"] == "RequiresAncillas"
    assert report["m_min"] == 3
    identity = classify_command("identity2", quiet=True)
    assert identity["classification"] == "Trivial"
    assert np.allclose(identity["O"], np.eye(2))
    assert np.allclose(identity["R"], [1.0, 1.0])


def test_classify_file(tmp_path):
    path = tmp_path / "squeezer.json"
    path.write_text(json.dumps({"symplectic": [[0.5, 0.0], [0.0, 2.0]]}))
    report = classify_command(str(path), quiet=True)
    assert report["classification"] == "Trivial"
    assert report["R"] == [2.0]


def test_classify_rejects_non_symplectic(tmp_path):
    path = tmp_path / "shear.json"
    path.write_text(json.dumps({"symplectic": [[2.0, 2.0], [0.0, 2.0]]}))
    assert main(["classify", "--target", str(path)]) == EXIT_VALIDATION
    assert main(["classify", "--target", str(tmp_path / "missing.json")]) == EXIT_VALIDATION


def test_synth_writes_report_and_run_log(fourier_report):
    report = read_json_report(fourier_report)
    assert report["tool_version"] == TOOL_VERSION
    assert report["units"] == "SN"
    assert report["seed"] == 7 + report["trace"]["summary"]["restart"]
    assert len(report["trace"]["summary"]["restart_values"]) == 2
    assert report["oracle"]["max_deviation"] <= 1e-7
    assert report["baseline"]["published"]["standard"]["f2"] == 1.68
    frame = pd.read_csv(trace_csv_path(fourier_report))
    assert len(frame) == report["trace"]["summary"]["generations"]
    assert validate_report_file(fourier_report)


def test_report_fitness_recomputes_identically(fourier_report):
    stored, recomputed, _ = recompute_fitness(read_json_report(fourier_report))
    assert stored == recomputed


def test_verify_report(fourier_report):
    outcome = verify_command(fourier_report, 20_000, seed=1, quiet=True)
    assert outcome["fitness_match"]
    assert set(outcome["z_scores"]) >= {"A", "B", "C", "D", "noise_var_x", "noise_var_p"}
    assert outcome["z_limit"] > 3.0
    assert outcome["passed"] == (max(outcome["z_scores"].values()) <= outcome["z_limit"])


def test_verify_sigma_option_widens_the_limit(fourier_report):
    default = verify_command(fourier_report, 20_000, seed=1, quiet=True)
    relaxed = verify_command(fourier_report, 20_000, seed=1, sigma=10.0, quiet=True)
    assert relaxed["z_scores"] == default["z_scores"]
    assert relaxed["z_limit"] > default["z_limit"]
    expected = EXIT_OK if relaxed["passed"] else EXIT_NUMERICAL
    assert main(["verify", "--report", fourier_report, "--samples", "20000", "--seed", "1", "--sigma", "10"]) == expected


def test_verify_detects_tampering(fourier_report):
    with open(fourier_report, "r", encoding="utf-8") as handle:
        report = json.load(handle)
    report["fitness"]["objective"] *= 0.5
    with open(fourier_report, "w", encoding="utf-8") as handle:
        json.dump(report, handle)
    assert main(["verify", "--report", fourier_report, "--samples", "20000"]) == EXIT_NUMERICAL


def test_verify_rejects_small_sample_count(fourier_report):
    assert main(["verify", "--report", fourier_report, "--samples", "100"]) == EXIT_VALIDATION


def test_existing_report_is_backed_up(fourier_report, tmp_path):
    assert main(["synth", "--scenario", "fourier4", "--generations", "3", "--out", fourier_report]) == EXIT_OK
    backups = [name for name in os.listdir(tmp_path) if ".bak" in name]
    assert len(backups) == 1


def test_cluster_report(tmp_path):
    path = str(tmp_path / "cluster.json")
    assert main(["synth", "--scenario", "linear_cluster4", "--generations", "10", "--restarts", "1",
                 "--out", path]) == EXIT_OK
    report = read_json_report(path)
    assert [row["shot_noise"] for row in report["nullifiers"]] == [2.0, 3.0, 3.0, 2.0]
    assert report["mbqc_result"] is None
    assert report["oracle"]["max_deviation"] <= 1e-10
    assert verify_command(path, 20_000, quiet=True)["passed"]


def test_noise_weight_needs_gate_objective(tmp_path):
    code = main(["synth", "--scenario", "linear_cluster4", "--noise-weight", "0.1",
                 "--out", str(tmp_path / "x.json")])
    assert code == EXIT_VALIDATION


def test_noise_weight_override():
    problem = apply_overrides(builtin_problem("fourier4"), noise_weight=0.2, generations=5)
    assert problem.objective.kind == "F1_PLUS_WEIGHTED_F2"
    assert problem.effective_noise_weight() == 0.2
    assert problem.optimizer.generations == 5


def test_thread_setting_from_environment(monkeypatch):
    problem = apply_overrides(builtin_problem("fourier4"), generations=8, restarts=1)
    monkeypatch.setenv("MBQC_SYNTH_THREADS", "3")
    pooled = run_scenario(problem, quiet=True)
    monkeypatch.setenv("MBQC_SYNTH_THREADS", "1")
    single = run_scenario(problem, quiet=True)
    assert pooled.trace.best_fitness == single.trace.best_fitness
    assert pooled.to_dict()["fitness"] == single.to_dict()["fitness"]


def test_invalid_thread_setting(monkeypatch):
    monkeypatch.setenv("MBQC_SYNTH_THREADS", "zero")
    with pytest.raises(ValidationError):
        run_scenario(builtin_problem("fourier4"), quiet=True)
