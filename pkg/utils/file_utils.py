"""
Utility functions for report and run-log files
"""
import datetime
import json
import os
import shutil

import pandas as pd

from utils.errors import ParseError

REPORT_KEYS = ("tool_version", "problem_digest", "scenario", "best_angles", "fitness")


def generate_timestamped_filename(base_filename):
    """
    Insert a timestamp before the extension of a filename.

    Args:
        base_filename: The original filename

    Returns:
        New filename such as report-20240101_120000_123456.json
    """
    base_name, extension = os.path.splitext(base_filename)
    timestamp = datetime.datetime.now().strftime("%Y%m%d_%H%M%S_%f")
    return f"{base_name}-{timestamp}{extension}"


def _unused_path(file_path):
    """file_path itself, or the first free file_path-1, file_path-2, ... (before the extension)."""
    if not os.path.exists(file_path):
        return file_path
    base_name, extension = os.path.splitext(file_path)
    counter = 1
    while os.path.exists(f"{base_name}-{counter}{extension}"):
        counter += 1
    return f"{base_name}-{counter}{extension}"


def ensure_file_can_be_created(file_path, overwrite=True):
    """
    Make sure the parent directory exists and decide on the final path.

    Args:
        file_path: Desired output path
        overwrite: If False and the file exists, a timestamped sibling path is returned

    Returns:
        The path to write to
    """
    os.makedirs(os.path.dirname(os.path.abspath(file_path)), exist_ok=True)
    if os.path.exists(file_path) and not overwrite:
        return _unused_path(generate_timestamped_filename(file_path))
    return file_path


def create_backup(file_path):
    """
    Copy an existing file to a timestamped .bak sibling.

    Returns:
        Path to the backup, or None when there was nothing to back up
    """
    if not os.path.exists(file_path):
        return None
    try:
        backup_path = _unused_path(generate_timestamped_filename(f"{file_path}.bak"))
        shutil.copy2(file_path, backup_path)
        return backup_path
    except OSError as e:
        print(f"⚠️ Failed to create backup of {file_path}: {e}")
        return None


def trace_csv_path(report_path):
    base_name, _ = os.path.splitext(report_path)
    return f"{base_name}.trace.csv"


def write_json_report(report, file_path, backup=True):
    """
    Write a report dictionary as JSON, backing up any previous file.

    Returns:
        Tuple (written path, backup path or None)
    """
    file_path = ensure_file_can_be_created(file_path)
    backup_path = create_backup(file_path) if backup else None
    with open(file_path, "w", encoding="utf-8") as handle:
        json.dump(report, handle, indent=2, allow_nan=False)
        handle.write("\n")
    return file_path, backup_path


def write_trace_csv(frame, report_path):
    """Write the per-generation run log next to a report."""
    path = trace_csv_path(report_path)
    frame.to_csv(path, index=False)
    return path


def read_json_report(file_path):
    """
    Read a report file.

    Raises:
        ParseError if the file is missing, not JSON, or lacks report fields
    """
    if not os.path.exists(file_path):
        raise ParseError(f"report {file_path} does not exist")
    with open(file_path, "r", encoding="utf-8") as handle:
        try:
            report = json.load(handle)
        except json.JSONDecodeError as error:
            raise ParseError(f"invalid JSON: {error.msg}", line=error.lineno)
    if not isinstance(report, dict):
        raise ParseError("report must be a JSON object")
    for key in REPORT_KEYS:
        if key not in report:
            raise ParseError("missing report field", field=key)
    return report


def validate_report_file(file_path):
    """
    Check that a report file is readable and that its run log, if present, has rows.

    Returns:
        True if valid, False otherwise
    """
    try:
        read_json_report(file_path)
    except ParseError as e:
        print(f"❌ Report {file_path} is not valid: {e}")
        return False
    csv_path = trace_csv_path(file_path)
    if os.path.exists(csv_path):
        try:
            frame = pd.read_csv(csv_path)
        except (pd.errors.ParserError, pd.errors.EmptyDataError) as e:
            print(f"❌ Run log {csv_path} is not valid: {e}")
            return False
        if len(frame) == 0:
            print(f"⚠️ Run log {csv_path} is empty (header only)")
            return False
    return True
