#!/usr/bin/env python3
"""Dyadic refinement study.

Prints, per resolution, the closed-form errors of the fractional integral,
the solve residual of the saturating reference problem, and its boundary
defect, together with fitted convergence orders.
"""

import argparse
import math

import numpy as np

from hhfrac.grids import GridFunction, LogGrid, Order
from hhfrac.hadamard import hadamard_integral
from hhfrac.problems import paper_example_problem
from hhfrac.solver import picard_solve, residual_fide


def integral_error(n_panels: int, alpha: float, gamma: float) -> float:
    grid = LogGrid(math.e, n_panels)
    x = grid.log_nodes
    w = np.empty(grid.n_nodes)
    w[0] = 1.0
    w[1:] = 1.0 + x[1:] ** 2
    f = GridFunction(grid, gamma, w)
    truth = (
        math.gamma(gamma) / math.gamma(gamma + alpha) * x[1:] ** (gamma + alpha - 1.0)
        + math.gamma(gamma + 2.0)
        / math.gamma(gamma + 2.0 + alpha)
        * x[1:] ** (gamma + alpha + 1.0)
    )
    win = grid.nodes[1:] >= 1.1
    raw = hadamard_integral(f, alpha).raw_tail()
    return float(np.max(np.abs(raw[win] - truth[win]) / np.abs(truth[win])))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--levels", type=int, default=4,
                        help="number of dyadic levels starting at 128 panels")
    args = parser.parse_args()

    order = Order(1.0 / 3.0, 2.0 / 3.0)
    problem = paper_example_problem(phi=1.0)
    ns = [128 * 2**k for k in range(args.levels)]

    rows = []
    for n in ns:
        grid = LogGrid(math.e, n)
        u, report = picard_solve(problem, grid)
        rows.append(
            (
                n,
                integral_error(n, order.alpha, order.gamma),
                residual_fide(u, problem),
                report.bc_defect,
            )
        )

    print(f"{'panels':>7s} {'integral-err':>13s} {'fide-residual':>14s} {'bc-defect':>11s}")
    for n, ei, rf, bc in rows:
        print(f"{n:7d} {ei:13.4e} {rf:14.4e} {bc:11.4e}")

    def orders(idx):
        return [math.log2(rows[i][idx] / rows[i + 1][idx]) for i in range(len(rows) - 1)]

    print("\nfitted orders between successive levels:")
    print("  integral:", " ".join(f"{o:.2f}" for o in orders(1)))
    print("  residual:", " ".join(f"{o:.2f}" for o in orders(2)))
    print("  bc      :", " ".join(f"{o:.2f}" for o in orders(3)))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
