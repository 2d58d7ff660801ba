#!/usr/bin/env python
"""
Run script for the synthesis toolkit
This provides a clean entry point with synth, classify, verify and list-builtins subcommands
"""
import os
import sys

# Get the directory containing this script
script_dir = os.path.dirname(os.path.abspath(__file__))
sys.path.append(script_dir)

from utils.settings import load_settings
from main.synth_main import main

if __name__ == "__main__":
    # .env must be loaded before any command reads the environment
    load_settings()
    sys.exit(main())
