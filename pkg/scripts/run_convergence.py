#!/usr/bin/env python3
"""Grid refinement study: halve dx a few times and print observed orders.

The integrator is second order in dx (central stencils; dt is slaved to
dx^2), so the observed orders should sit near 2.
"""

import argparse
import sys

from qctransition import ExperimentSetup, convergence_study


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--epsilon", type=float, default=1.0)
    ap.add_argument("--levels", type=int, default=3)
    ap.add_argument("--base-points", type=int, default=512)
    ap.add_argument("--extent", type=float, default=40.0, help="half-width in sigma")
    ap.add_argument("--t-final", type=float, default=5.0)
    return ap.parse_args()


def run():
    args = parse_args()
    setup = ExperimentSetup(
        extent_over_sigma=args.extent,
        n_points=args.base_points,
        t_final=args.t_final,
    )
    study = convergence_study(setup, epsilon=args.epsilon, levels=args.levels)
    print(f"{'n_points':>9} {'dx':>12} {'dt':>12} {'linf/peak':>12} {'order':>7}")
    for i, lv in enumerate(study.levels):
        order = "" if i == 0 else f"{study.orders[i - 1]:7.3f}"
        print(
            f"{lv.n_points:>9} {lv.dx:>12.6g} {lv.dt_used:>12.6g} "
            f"{lv.linf_error_rel_peak:>12.4e} {order:>7}"
        )
    print(f"monotone decrease: {study.monotone}")
    return 0 if study.monotone else 1


if __name__ == "__main__":
    sys.exit(run())
