#!/usr/bin/env python3
"""Time to reach a target fringe visibility as a function of epsilon.

Smaller epsilon retards fringe formation (t* grows like 1/sqrt(epsilon));
at epsilon = 0 the target is never reached and inf is reported.
"""

import argparse
import csv
import math
import sys

from qctransition import retardation_curve


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--target", type=float, default=0.9, help="visibility in (0, 1)")
    ap.add_argument(
        "--epsilons",
        default="0,0.02,0.05,0.1,0.25,0.5,0.75,1",
        help="comma-separated list",
    )
    ap.add_argument("-o", "--output", help="optional CSV path")
    return ap.parse_args()


def run():
    args = parse_args()
    eps_list = [float(tok) for tok in args.epsilons.split(",") if tok.strip()]
    rows = []
    for eps in eps_list:
        t_star = retardation_curve(eps, args.target)
        rows.append((eps, t_star))
        shown = "never" if math.isinf(t_star) else f"{t_star:.6f}"
        print(f"epsilon = {eps:<6g} t*({args.target:g}) = {shown}")
    if args.output:
        with open(args.output, "w", newline="\n") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epsilon", "t_star"])
            writer.writerows(rows)
        print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
