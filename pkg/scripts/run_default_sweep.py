#!/usr/bin/env python3
"""Run the six-panel classical-to-quantum ladder at default resolution.

Writes per-epsilon run directories plus sweep_manifest.json, the file the
standalone figure renderer consumes.  Expect roughly a minute of runtime
with parallel workers.
"""

import argparse
import os
import sys

from qctransition.cli import SWEEP_EPSILONS, main


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("-o", "--output-dir", default="out/sweep")
    ap.add_argument(
        "--workers", type=int, default=min(6, os.cpu_count() or 1),
        help="parallel panel processes (default: up to 6)",
    )
    ap.add_argument(
        "--epsilons", default=",".join(str(e) for e in SWEEP_EPSILONS),
        help="comma-separated ladder (default: the standard six panels)",
    )
    ap.add_argument("--grid-points", type=int, default=4096)
    ap.add_argument("--t-final", type=float, default=20.0)
    return ap.parse_args()


def run():
    args = parse_args()
    argv = [
        "sweep",
        "--epsilons", args.epsilons,
        "--grid-points", str(args.grid_points),
        "--t-final-units", str(args.t_final),
        "--workers", str(args.workers),
        "--output-dir", args.output_dir,
    ]
    return main(argv)


if __name__ == "__main__":
    sys.exit(run())
