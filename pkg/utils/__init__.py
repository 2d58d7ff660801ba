"""
Utils package
"""
from .errors import SynthesisError, ValidationError, NumericalFailure, exit_code_for
from .settings import load_settings
from .file_utils import (
    generate_timestamped_filename,
    ensure_file_can_be_created,
    create_backup,
    write_json_report,
    write_trace_csv,
    read_json_report,
    validate_report_file,
)

__all__ = [
    'SynthesisError',
    'ValidationError',
    'NumericalFailure',
    'exit_code_for',
    'load_settings',
    'generate_timestamped_filename',
    'ensure_file_can_be_created',
    'create_backup',
    'write_json_report',
    'write_trace_csv',
    'read_json_report',
    'validate_report_file',
]
