"""
Runtime settings read from the environment (optionally a .env file)
"""
import os

from dotenv import load_dotenv

from utils.errors import ValidationError

THREADS_VARIABLE = "MBQC_SYNTH_THREADS"


def load_settings(dotenv_path=None):
    """
    Load runtime settings.

    Args:
        dotenv_path: Optional explicit .env file; by default python-dotenv searches
            upwards from the working directory

    Returns:
        Dictionary with the key 'threads'
    """
    load_dotenv(dotenv_path=dotenv_path)
    raw = os.getenv(THREADS_VARIABLE, "1")
    try:
        threads = int(raw)
    except ValueError:
        raise ValidationError(f"{THREADS_VARIABLE} must be an integer, got {raw!r}")
    if threads < 1:
        raise ValidationError(f"{THREADS_VARIABLE} must be >= 1, got {threads}")
    return {"threads": threads}
