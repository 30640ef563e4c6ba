#!/usr/bin/env python3
"""Run the full cross-checking battery and save the JSON report.

Usage:
    python scripts/run_verification.py [--quick] [--report verify.json]

Exits nonzero if any check fails.
"""

import argparse

from johnson_entanglement.cli import main as je_main

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true")
    parser.add_argument("--report", default="verify.json")
    args = parser.parse_args()
    argv = ["verify", "--output", args.report]
    if args.quick:
        argv.append("--quick")
    raise SystemExit(je_main(argv))
