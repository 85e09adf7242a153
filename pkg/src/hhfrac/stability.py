"""Empirical Ulam-stability experiments.

An experiment solves the problem twice: once as given, once with the
right-hand side shifted by a constructed perturbation h, and compares the
observed deviation of the two solutions against the certified bound
(C_f epsilon for Ulam-Hyers, C_f_phi epsilon phi(t) nodewise for the
Rassias variant).

The perturbed solution is *defined* as the solution of the h-shifted
equation whose (log t)^(gamma-1) coefficient is frozen at the unperturbed
value, i.e. both solutions share the same weighted limit at 1+.  That is
the constructive realization of the matching condition under which the
stability theorems equate the two constant parts; re-deriving the constant
from the perturbed right-hand side would instead let the deviation inherit
an O(epsilon) (log t)^(gamma-1) term that is unbounded near 1.

Deviations are measured in the plain sup norm over the nodes t >= t_1,
since the stability definitions compare raw values; node 0 raw values may
be unbounded, so the weighted-limit deviation is reported separately
(it is zero by construction here).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .certificates import rassias_constant, ulam_hyers_constant, uniqueness_constant
from .errors import DomainError
from .grids import GridFunction, LogGrid
from .problems import ProblemSpec
from .solver import (
    DEFAULT_CAP,
    DEFAULT_INNER_CAP,
    DEFAULT_INNER_TOL,
    DEFAULT_TOL,
    picard_solve,
    solve_with_fixed_constant,
)

CONSTANT = "constant"
LOG_POWER = "log-power"
SUPPLIED = "supplied-table"

MODE_UH = "UH"
MODE_GENERALIZED_UH = "generalized-UH"
MODE_UHR = "UHR"
MODE_GENERALIZED_UHR = "generalized-UHR"

CSV_HEADER = "mode,epsilon,deviation,bound,margin,pass"


@dataclass(frozen=True)
class PerturbationSpec:
    """Recipe for the realized perturbation h(t).

    * ``constant``: h = epsilon everywhere.
    * ``log-power``: h = epsilon * phi(t) for the attached profile.
    * ``supplied-table``: h given directly as a grid function.

    After construction the realized h is asserted against the admissibility
    bound of the requested mode: |h| <= epsilon for Ulam-Hyers runs,
    |h| <= epsilon phi(t) for Rassias runs.
    """

    kind: str
    epsilon: float
    phi_profile: Optional[GridFunction] = None
    table: Optional[GridFunction] = None

    def __post_init__(self):
        if self.kind not in (CONSTANT, LOG_POWER, SUPPLIED):
            raise DomainError(f"unknown perturbation kind {self.kind!r}")
        if not self.epsilon > 0.0:
            raise DomainError(f"epsilon must be positive, got {self.epsilon!r}")
        if self.kind == LOG_POWER and self.phi_profile is None:
            raise DomainError("log-power perturbation needs a phi profile")
        if self.kind == SUPPLIED and self.table is None:
            raise DomainError("supplied-table perturbation needs a table")

    def realize(self, grid: LogGrid, gamma: float) -> GridFunction:
        """The perturbation h as a grid function in weight class gamma."""
        x = grid.log_nodes
        if self.kind == CONSTANT:
            w = np.empty(grid.n_nodes)
            w[0] = 0.0
            w[1:] = self.epsilon * x[1:] ** (1.0 - gamma)
            return GridFunction(grid, gamma, w)
        if self.kind == LOG_POWER:
            return self.phi_profile * self.epsilon
        return self.table


def _assert_admissible(h: GridFunction, spec: PerturbationSpec, rassias: bool):
    tol = 1e-12 * max(1.0, spec.epsilon)
    if rassias:
        cap = spec.epsilon * spec.phi_profile.raw_tail()
    else:
        cap = spec.epsilon
    excess = np.abs(h.raw_tail()) - cap
    if np.max(excess) > tol:
        raise DomainError(
            f"realized perturbation exceeds its admissibility bound by "
            f"{float(np.max(excess)):.3e}"
        )


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of one stability experiment."""

    mode: str
    epsilon: float
    observed_deviation: float
    certified_bound: float
    margin: float
    passed: bool
    weighted_limit_deviation: float

    def csv_row(self) -> str:
        return (
            f"{self.mode},{self.epsilon!r},{self.observed_deviation!r},"
            f"{self.certified_bound!r},{self.margin!r},"
            f"{'true' if self.passed else 'false'}"
        )


def _two_solves(problem, perturbation, grid, tol, cap, inner_tol, inner_cap, rassias):
    a_const = uniqueness_constant(problem)
    if a_const >= 1.0:
        raise DomainError(
            f"stability experiments require a contraction (A = {a_const:.4f} >= 1)"
        )
    u, base_report = picard_solve(
        problem, grid, tol=tol, cap=cap, inner_tol=inner_tol, inner_cap=inner_cap
    )
    h = perturbation.realize(grid, problem.order.gamma)
    _assert_admissible(h, perturbation, rassias=rassias)
    u_tilde, pert_report = solve_with_fixed_constant(
        problem, grid, z_fixed=u.weighted_limit, shift=h,
        tol=tol, cap=cap, inner_tol=inner_tol, inner_cap=inner_cap,
    )
    deviation = np.abs(u_tilde.raw_tail() - u.raw_tail())
    wdev = abs(u_tilde.weighted_limit - u.weighted_limit)
    return u, u_tilde, deviation, wdev, base_report, pert_report


def run_uh_experiment(
    problem: ProblemSpec, perturbation: PerturbationSpec, grid: LogGrid,
    tol: float = DEFAULT_TOL, cap: int = DEFAULT_CAP,
    inner_tol: float = DEFAULT_INNER_TOL, inner_cap: int = DEFAULT_INNER_CAP,
) -> StabilityVerdict:
    """Ulam-Hyers experiment: sup |u_tilde - u| against C_f epsilon.

    epsilon = 1 realizes the generalized mode (the bound with no free
    epsilon), which is how the verdict is labelled in that case.
    """
    _, c_f = ulam_hyers_constant(problem)
    _, _, deviation, wdev, _, _ = _two_solves(
        problem, perturbation, grid, tol, cap, inner_tol, inner_cap, rassias=False
    )
    observed = float(np.max(deviation))
    bound = c_f * perturbation.epsilon
    margin = bound - observed
    slack = 10.0 * tol * c_f
    mode = MODE_GENERALIZED_UH if perturbation.epsilon == 1.0 else MODE_UH
    return StabilityVerdict(
        mode=mode, epsilon=perturbation.epsilon,
        observed_deviation=observed, certified_bound=bound,
        margin=margin, passed=margin >= -slack,
        weighted_limit_deviation=wdev,
    )


def run_uhr_experiment(
    problem: ProblemSpec, perturbation: PerturbationSpec, lambda_phi: float,
    grid: LogGrid,
    tol: float = DEFAULT_TOL, cap: int = DEFAULT_CAP,
    inner_tol: float = DEFAULT_INNER_TOL, inner_cap: int = DEFAULT_INNER_CAP,
) -> StabilityVerdict:
    """Ulam-Hyers-Rassias experiment with nodewise bound C_f_phi epsilon phi(t).

    The caller-supplied lambda_phi is machine-verified first; a failing
    certificate aborts the experiment.  The verdict aggregates the worst
    node margin and reports the bound at that node.
    """
    if perturbation.phi_profile is None:
        raise DomainError("Rassias experiments need a perturbation with a phi profile")
    _, c_f_phi = rassias_constant(problem, perturbation.phi_profile, lambda_phi)
    _, _, deviation, wdev, _, _ = _two_solves(
        problem, perturbation, grid, tol, cap, inner_tol, inner_cap, rassias=True
    )
    phi_raw = perturbation.phi_profile.raw_tail()
    bounds = c_f_phi * perturbation.epsilon * phi_raw
    margins = bounds - deviation
    worst = int(np.argmin(margins))
    slack = 10.0 * tol * c_f_phi
    mode = MODE_GENERALIZED_UHR if perturbation.epsilon == 1.0 else MODE_UHR
    return StabilityVerdict(
        mode=mode, epsilon=perturbation.epsilon,
        observed_deviation=float(np.max(deviation)),
        certified_bound=float(bounds[worst]),
        margin=float(margins[worst]), passed=float(margins[worst]) >= -slack,
        weighted_limit_deviation=wdev,
    )


def verdicts_to_csv(verdicts) -> str:
    """CSV with header; LF line endings, '.' decimal separator."""
    lines = [CSV_HEADER]
    lines += [v.csv_row() for v in verdicts]
    return "\n".join(lines) + "\n"
