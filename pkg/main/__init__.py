"""
Main package for the synthesis toolkit
"""
# Import the function directly to make it available at the package level
from .synth_main import main, run_scenario, RunReport, TOOL_VERSION
