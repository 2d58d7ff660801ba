"""
Tests for settings, error mapping and report file helpers
"""
import datetime
import json
import os

import pytest

from utils import exit_code_for, load_settings
from utils.errors import (
    EXIT_NUMERICAL,
    EXIT_UNEXPECTED,
    EXIT_VALIDATION,
    NotSymplectic,
    ParseError,
    SingularElimination,
    ValidationError,
)
from utils.file_utils import (
    create_backup,
    ensure_file_can_be_created,
    generate_timestamped_filename,
    read_json_report,
    validate_report_file,
    write_json_report,
)


def test_exit_codes():
    assert exit_code_for(NotSymplectic("bad")) == EXIT_VALIDATION
    assert exit_code_for(SingularElimination("singular")) == EXIT_NUMERICAL
    assert exit_code_for(RuntimeError("boom")) == EXIT_UNEXPECTED


def test_parse_error_location():
    error = ParseError("missing required field", line=3, field="n")
    assert str(error) == "[line 3, field 'n'] missing required field"
    assert isinstance(error, ValidationError)


def test_settings_default(monkeypatch):
    monkeypatch.delenv("MBQC_SYNTH_THREADS", raising=False)
    assert load_settings(dotenv_path=os.devnull) == {"threads": 1}


def test_settings_from_dotenv(monkeypatch, tmp_path):
    monkeypatch.delenv("MBQC_SYNTH_THREADS", raising=False)
    env_file = tmp_path / ".env"
    env_file.write_text("MBQC_SYNTH_THREADS=4\n")
    assert load_settings(dotenv_path=str(env_file)) == {"threads": 4}
    monkeypatch.delenv("MBQC_SYNTH_THREADS", raising=False)


@pytest.mark.parametrize("value", ["0", "-2", "many"])
def test_settings_rejects_bad_threads(monkeypatch, value):
    monkeypatch.setenv("MBQC_SYNTH_THREADS", value)
    with pytest.raises(ValidationError):
        load_settings(dotenv_path=os.devnull)


def test_timestamped_filename():
    name = generate_timestamped_filename("reports/run.json")
    assert name.startswith("reports/run-") and name.endswith(".json")


def test_ensure_file_can_be_created(tmp_path):
    target = tmp_path / "nested" / "report.json"
    assert ensure_file_can_be_created(str(target)) == str(target)
    assert (tmp_path / "nested").is_dir()
    target.write_text("{}")
    assert ensure_file_can_be_created(str(target), overwrite=False) != str(target)


def test_backup_only_when_file_exists(tmp_path):
    target = tmp_path / "report.json"
    assert create_backup(str(target)) is None
    target.write_text("{}")
    backup = create_backup(str(target))
    assert backup is not None and os.path.exists(backup)


class FrozenClock:
    class datetime:
        @staticmethod
        def now():
            return datetime.datetime(2024, 1, 1, 12, 0, 0, 0)


def test_backups_within_the_same_instant_do_not_collide(tmp_path, monkeypatch):
    monkeypatch.setattr("utils.file_utils.datetime", FrozenClock)
    target = tmp_path / "report.json"
    backups = []
    for version in range(3):
        target.write_text(json.dumps({"version": version}))
        backups.append(create_backup(str(target)))
    assert len(set(backups)) == 3
    for version, backup in enumerate(backups):
        with open(backup, "r", encoding="utf-8") as handle:
            assert json.load(handle) == {"version": version}


def test_report_round_trip(tmp_path):
    report = {"tool_version": "x", "problem_digest": "d", "scenario": {}, "best_angles": {}, "fitness": {}}
    path, backup = write_json_report(report, str(tmp_path / "r.json"))
    assert backup is None
    assert read_json_report(path) == report
    assert validate_report_file(path)


def test_report_rejects_nan(tmp_path):
    with pytest.raises(ValueError):
        write_json_report({"fitness": float("nan")}, str(tmp_path / "nan.json"))


def test_read_report_errors(tmp_path):
    with pytest.raises(ParseError):
        read_json_report(str(tmp_path / "absent.json"))
    partial = tmp_path / "partial.json"
    partial.write_text(json.dumps({"tool_version": "x"}))
    with pytest.raises(ParseError) as error:
        read_json_report(str(partial))
    assert error.value.field == "problem_digest"
    assert not validate_report_file(str(partial))


def test_empty_run_log_is_flagged(tmp_path):
    report = {"tool_version": "x", "problem_digest": "d", "scenario": {}, "best_angles": {}, "fitness": {}}
    path, _ = write_json_report(report, str(tmp_path / "r.json"))
    (tmp_path / "r.trace.csv").write_text("generation,best_fitness\n")
    assert not validate_report_file(path)
