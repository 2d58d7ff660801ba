#!/usr/bin/env python
"""
Report Verification Tool

This script checks all synthesis reports in a directory and its subdirectories:
each report must parse, its stored fitness must recompute identically from the
stored angles, and gate reports are regressed against Monte-Carlo samples.

Usage:
    python verify_reports.py [--dir=<directory>] [--samples=<count>] [--seed=<seed>]

Options:
    --dir=<directory>   Directory to scan for report files (default: current directory)
    --samples=<count>   Monte-Carlo samples per gate report (default: 100000)
"""

import os
import argparse
import sys

# Add the current directory to the path so we can import our modules
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

try:
    from main.synth_main import verify_command
    from utils.errors import SynthesisError
    from utils.file_utils import validate_report_file
except ImportError:
    print("❌ Could not import the synthesis modules")
    print("Make sure this script is run from the main project directory")
    sys.exit(1)


def find_reports(directory="."):
    """Report files are JSON files that have a sibling run log."""
    reports = []
    for root, _, files in os.walk(directory):
        for file in files:
            if file.endswith('.json') and f"{file[:-len('.json')]}.trace.csv" in files:
                reports.append(os.path.join(root, file))
    return sorted(reports)


def verify_reports(directory=".", samples=100_000, seed=0, sigma=3.0):
    """
    Scan a directory for reports and re-verify them

    Args:
        directory: Directory to scan for report files
        samples: Monte-Carlo samples per gate report
        seed: Monte-Carlo seed
        sigma: Confidence of each report's Monte-Carlo check, in single-test standard errors

    Returns:
        Dictionary of counts
    """
    print(f"Scanning directory: {directory}")
    reports = find_reports(directory)
    print(f"Found {len(reports)} reports to check")

    counts = {"passed": 0, "failed": 0, "invalid": 0}
    for report in reports:
        print(f"\nChecking {report}...")
        if not validate_report_file(report):
            counts["invalid"] += 1
            continue
        try:
            outcome = verify_command(report, samples, seed, sigma=sigma)
        except SynthesisError as e:
            print(f"❌ {report} could not be verified: {e}")
            counts["failed"] += 1
            continue
        if outcome["passed"]:
            print(f"✅ {report} verified")
            counts["passed"] += 1
        else:
            print(f"❌ {report} failed verification")
            counts["failed"] += 1

    print("\n=== Report Verification Summary ===")
    print(f"Total reports checked: {len(reports)}")
    print(f"Verified reports: {counts['passed']}")
    print(f"Failed reports: {counts['failed']}")
    print(f"Invalid reports: {counts['invalid']}")
    return counts


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Verify synthesis reports")
    parser.add_argument("--dir", default=".", help="Directory to scan (default: current directory)")
    parser.add_argument("--samples", type=int, default=100_000, help="Monte-Carlo samples per gate report")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--sigma", type=float, default=3.0, help="Confidence of each Monte-Carlo check (default: 3)")
    args = parser.parse_args()

    counts = verify_reports(args.dir, args.samples, args.seed, args.sigma)
    sys.exit(1 if counts["failed"] or counts["invalid"] else 0)
