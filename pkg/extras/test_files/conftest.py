"""
Shared test setup: put the project root on the path and gate slow tests
"""
import os
import sys

import pytest

# Add the project root (two levels up) to the path
project_root = os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
if project_root not in sys.path:
    sys.path.insert(0, project_root)


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: full-budget optimizer runs (set MBQC_SYNTH_SLOW=1)")


def pytest_collection_modifyitems(config, items):
    if os.environ.get("MBQC_SYNTH_SLOW") == "1":
        return
    skip_slow = pytest.mark.skip(reason="slow run, set MBQC_SYNTH_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)
