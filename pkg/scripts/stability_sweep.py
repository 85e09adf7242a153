#!/usr/bin/env python3
"""Sweep the perturbation size over several decades on the reference problem.

Emits one verdict CSV row per epsilon for the Ulam-Hyers mode and, with
--rassias, for the Rassias mode with the critical log-power profile.
"""

import argparse
import math
import sys
import warnings

from hhfrac.grids import LogGrid, log_power
from hhfrac.problems import paper_example_problem
from hhfrac.stability import (
    CSV_HEADER,
    PerturbationSpec,
    run_uh_experiment,
    run_uhr_experiment,
)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--panels", type=int, default=512)
    parser.add_argument("--decades", type=int, default=4,
                        help="epsilon sweeps 1e-1 .. 1e-decades")
    parser.add_argument("--rassias", action="store_true")
    parser.add_argument("--out", help="output file (default: stdout)")
    args = parser.parse_args()

    problem = paper_example_problem(phi=1.0)
    grid = LogGrid(problem.b, args.panels)
    epsilons = [10.0**-k for k in range(1, args.decades + 1)]

    verdicts = []
    for eps in epsilons:
        verdicts.append(
            run_uh_experiment(problem, PerturbationSpec("constant", eps), grid)
        )
    if args.rassias:
        g, a = problem.order.gamma, problem.order.alpha
        phi = log_power(grid, g, g - 1.0)
        lam = math.gamma(g) / math.gamma(g + a) * math.log(problem.b) ** a
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            for eps in epsilons:
                verdicts.append(
                    run_uhr_experiment(
                        problem,
                        PerturbationSpec("log-power", eps, phi_profile=phi),
                        lam,
                        grid,
                    )
                )

    lines = [CSV_HEADER] + [v.csv_row() for v in verdicts]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if all(v.passed for v in verdicts) else 1


if __name__ == "__main__":
    raise SystemExit(main())
