#!/usr/bin/env python3
"""Regenerate every figure-reproduction CSV into an output directory.

Usage:
    python scripts/reproduce_figures.py [--outdir out] [--fast]

``--fast`` shrinks the graphs so the whole set runs in a couple of seconds,
for smoke-testing the pipeline.  Plotting is left to external tools; every
CSV is plain gnuplot-ready columns with a header row.
"""

import argparse
import pathlib
import sys
import time

from johnson_entanglement.cli import main as je_main


def run(outdir: pathlib.Path, fast: bool) -> int:
    outdir.mkdir(parents=True, exist_ok=True)
    n, k = (12, 6) if fast else (30, 15)
    jobs = [
        ("fig2a.csv", ["sweep", "--figure", "fig2a"]),
        ("fig2b.csv", ["sweep", "--figure", "fig2b", "--n", str(n), "--k", str(k)]),
        ("fig3a.csv", ["sweep", "--figure", "fig3a", "--n", str(n), "--k", str(k)]),
        ("fig3b.csv", ["sweep", "--figure", "fig3b", "--n", str(n), "--k", str(k)]),
        ("fig4.csv", ["sweep", "--figure", "fig4", "--n", str(n), "--k", str(k)]),
    ]
    for name, argv in jobs:
        target = outdir / name
        start = time.time()
        code = je_main(argv + ["--output", str(target)])
        if code != 0:
            print(f"{name}: FAILED with exit code {code}", file=sys.stderr)
            return code
        print(f"{name}: wrote {target} in {time.time() - start:.1f}s")
    return 0


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", default="out", type=pathlib.Path)
    parser.add_argument("--fast", action="store_true", help="small graphs, smoke test only")
    args = parser.parse_args()
    raise SystemExit(run(args.outdir, args.fast))
