"""Operator-identity verification suites.

Each check reproduces a closed form or an operator identity of the
discrete Hadamard calculus and reports the sup error over the nodes with
t >= 1.1 (one-sided stencils and the weighted representation make the
first few nodes special; closed-form accuracy is specified on [1.1, b]).
The vanishing-limit check inspects node 0 itself.

Checks whose errors sit at roundoff level (pure log-power data is
integrated exactly) are reported as exact; convergence orders are then
not meaningful and are marked as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .grids import GridFunction, LogGrid, Order, log_power, weighted_norm
from .hadamard import (
    hadamard_derivative,
    hadamard_integral,
    hilfer_hadamard_derivative,
)

IDENTITY_TOL = 1e-3
FAST_IDENTITY_TOL = 1e-2
CLOSED_FORM_TOL = 1e-4
MIN_ORDER = 1.5
EXACT_LEVEL = 1e-11

_ALPHAS = (0.25, 1.0 / 3.0, 0.75)
_BETA_TYPE = 2.0 / 3.0


@dataclass(frozen=True)
class CheckResult:
    """One verified identity: observed error against its threshold."""

    name: str
    alpha: float
    error: float
    threshold: float
    passed: bool
    order: Optional[float] = None

    def line(self) -> str:
        order = ""
        if self.order is not None:
            order = "order=exact" if math.isinf(self.order) else f"order={self.order:.2f}"
        status = "ok" if self.passed else "FAIL"
        return (
            f"{status:4s} {self.name:34s} alpha={self.alpha:<9.4g} "
            f"err={self.error:.3e} tol={self.threshold:.1e} {order}"
        )


def _window(grid: LogGrid) -> np.ndarray:
    return grid.nodes[1:] >= 1.1


def _rel_err(result: GridFunction, truth_raw: np.ndarray, win: np.ndarray) -> float:
    raw = result.raw_tail()
    denom = np.maximum(np.abs(truth_raw[win]), 1e-300)
    return float(np.max(np.abs(raw[win] - truth_raw[win]) / denom))


def _abs_err(values: np.ndarray, win: np.ndarray) -> float:
    return float(np.max(np.abs(values[win])))


def _trig_profile(grid: LogGrid, seed: int) -> GridFunction:
    """Random smooth function vanishing at t = 1, stored in class 0."""
    rng = np.random.default_rng(seed)
    coeffs = rng.uniform(-1.0, 1.0, 4)
    logb = math.log(grid.b)

    def raw(t):
        x = np.log(t)
        return sum(
            c * np.sin((k + 1) * math.pi * x / logb) for k, c in enumerate(coeffs)
        )

    return GridFunction.from_raw_callable(grid, 0.0, raw)


def _closed_form_error(grid: LogGrid, alpha: float, exponent_tag: str, gamma: float):
    """Relative error of I^alpha against the log-power closed form."""
    x = grid.log_nodes[1:]
    win = _window(grid)
    if exponent_tag == "critical":
        f = log_power(grid, gamma, gamma - 1.0)
        truth = math.gamma(gamma) / math.gamma(gamma + alpha) * x ** (gamma + alpha - 1.0)
    elif exponent_tag == "constant":
        f = log_power(grid, 0.0, 0.0)
        truth = x**alpha / math.gamma(alpha + 1.0)
    elif exponent_tag == "linear":
        f = log_power(grid, 0.0, 1.0)
        truth = math.gamma(2.0) / math.gamma(2.0 + alpha) * x ** (1.0 + alpha)
    else:  # mixed: (log t)^(gamma-1) (1 + (log t)^2), not integrated exactly
        w = np.empty(grid.n_nodes)
        w[0] = 1.0
        w[1:] = 1.0 + x**2
        f = GridFunction(grid, gamma, w)
        truth = (
            math.gamma(gamma) / math.gamma(gamma + alpha) * x ** (gamma + alpha - 1.0)
            + math.gamma(gamma + 2.0)
            / math.gamma(gamma + 2.0 + alpha)
            * x ** (gamma + alpha + 1.0)
        )
    return _rel_err(hadamard_integral(f, alpha), truth, win)


def run_identity_suite(
    n_panels: int, b: float = math.e, identity_tol: Optional[float] = None
) -> list[CheckResult]:
    """All closed-form and operator-identity checks at one resolution.

    The identity tolerance defaults to 1e-3 from 512 panels up and to the
    looser smoke-test level 1e-2 below (the identities converge at order
    one or better, so the coarse run only guards against gross breakage).
    """
    if identity_tol is None:
        identity_tol = IDENTITY_TOL if n_panels >= 512 else FAST_IDENTITY_TOL
    grid = LogGrid(b, n_panels)
    x = grid.log_nodes[1:]
    win = _window(grid)
    out: list[CheckResult] = []

    def add(name, alpha, err, tol=None, order=None):
        tol = identity_tol if tol is None else tol
        out.append(CheckResult(name, alpha, err, tol, err <= tol, order))

    for alpha in _ALPHAS:
        order = Order(alpha, _BETA_TYPE)
        g = order.gamma

        # log-power closed forms of the integral
        for tag in ("critical", "constant", "linear"):
            err = _closed_form_error(grid, alpha, tag, g)
            add(f"integral-closed-form-{tag}", alpha, err, CLOSED_FORM_TOL)

        # log-power closed forms of the derivative
        f = log_power(grid, g, g - 1.0)
        truth = math.gamma(g) / math.gamma(g - alpha) * x ** (g - alpha - 1.0)
        add("derivative-closed-form-critical", alpha,
            _rel_err(hadamard_derivative(f, alpha), truth, win))
        f = log_power(grid, 0.0, 0.0)
        truth = x ** (-alpha) / math.gamma(1.0 - alpha)
        add("derivative-of-constant", alpha,
            _rel_err(hadamard_derivative(f, alpha), truth, win))
        f = log_power(grid, 0.0, 1.0)
        truth = math.gamma(2.0) / math.gamma(2.0 - alpha) * x ** (1.0 - alpha)
        add("derivative-closed-form-linear", alpha,
            _rel_err(hadamard_derivative(f, alpha), truth, win))

        # vanishing weighted limit of every integral output at node 0
        f = log_power(grid, g, g - 1.0)
        add("integral-vanishing-limit", alpha,
            abs(hadamard_integral(f, alpha).weighted_limit), 0.0)

        # semigroup I^a I^b = I^(a+b) on smooth data and on mixed class-g data
        smooth = _trig_profile(grid, seed=11)
        diff = (
            hadamard_integral(hadamard_integral(smooth, 0.4), alpha)
            - hadamard_integral(smooth, 0.4 + alpha)
        )
        add("semigroup-smooth", alpha, _abs_err(diff.weighted_values[1:], win))
        w = np.empty(grid.n_nodes)
        w[0] = 1.0
        w[1:] = 1.0 + x**2
        mixed = GridFunction(grid, g, w)
        diff = (
            hadamard_integral(hadamard_integral(mixed, 0.4), alpha)
            - hadamard_integral(mixed, 0.4 + alpha)
        )
        add("semigroup-mixed", alpha, _abs_err(diff.weighted_values[1:], win))

        # left inverse D^a I^a = id on smooth data
        err = _abs_err(
            hadamard_derivative(hadamard_integral(smooth, alpha), alpha).raw_tail()
            - smooth.raw_tail(),
            win,
        )
        add("left-inverse", alpha, err)

        # Newton-Leibniz: I^a D^a f = f - (I^(1-a) f)(1+)/Gamma(a) (log t)^(a-1)
        # on f = (log t)^(g-1) + (log t)^2, whose 1+ term vanishes (g > a)
        w = np.empty(grid.n_nodes)
        w[0] = 1.0
        w[1:] = 1.0 + x ** (3.0 - g)
        f = GridFunction(grid, g, w)
        err = _abs_err(
            hadamard_integral(hadamard_derivative(f, alpha), alpha).raw_tail()
            - f.raw_tail(),
            win,
        )
        add("newton-leibniz", alpha, err)

        # the same with the boundary term active: f = (log t)^(a-1) + (log t)^2
        w = np.empty(grid.n_nodes)
        w[0] = 1.0
        w[1:] = 1.0 + x ** (3.0 - alpha)
        f = GridFunction(grid, alpha, w)
        err = _abs_err(
            hadamard_integral(hadamard_derivative(f, alpha), alpha).raw_tail() - x**2,
            win,
        )
        add("newton-leibniz-active-limit", alpha, err)

        # compositions: I^g D^g f = I^a D^(a,b) f and D^g I^a f = D^(b(1-a)) f
        w = np.empty(grid.n_nodes)
        w[0] = 0.7
        w[1:] = 0.7 + 1.3 * x ** (3.0 - g)
        f = GridFunction(grid, g, w)
        err = _abs_err(
            hadamard_integral(hadamard_derivative(f, g), g).raw_tail()
            - hadamard_integral(hilfer_hadamard_derivative(f, order), alpha).raw_tail(),
            win,
        )
        add("composition-via-gamma", alpha, err)

        f = log_power(grid, g, 2.0, 1.3)
        err = _abs_err(
            hadamard_derivative(hadamard_integral(f, alpha), g).raw_tail()
            - hadamard_derivative(f, _BETA_TYPE * (1.0 - alpha)).raw_tail(),
            win,
        )
        add("composition-after-integral", alpha, err)

        # hilfer on (log t)^2 against the order-alpha closed form
        f = log_power(grid, g, 2.0)
        truth = math.gamma(3.0) / math.gamma(3.0 - alpha) * x ** (2.0 - alpha)
        add("hilfer-log-square", alpha,
            _rel_err(hilfer_hadamard_derivative(f, order), truth, win))

        # hilfer annihilates the critical mode exactly
        f = log_power(grid, g, g - 1.0)
        add("hilfer-critical-kernel", alpha,
            weighted_norm(hilfer_hadamard_derivative(f, order)), 1e-12)

        # hilfer is a left inverse of I^alpha
        f = log_power(grid, g, 2.0, 1.3)
        err = _abs_err(
            hilfer_hadamard_derivative(hadamard_integral(f, alpha), order).raw_tail()
            - f.raw_tail(),
            win,
        )
        add("hilfer-left-inverse", alpha, err)

        # type-boundary reductions
        f = log_power(grid, 0.0, 2.0)
        truth = math.gamma(3.0) / math.gamma(3.0 - alpha) * x ** (2.0 - alpha)
        err = _rel_err(hilfer_hadamard_derivative(f, Order(alpha, 0.0)), truth, win)
        add("riemann-liouville-reduction", alpha, err)
        err = _rel_err(hilfer_hadamard_derivative(f, Order(alpha, 1.0)), truth, win)
        add("caputo-reduction", alpha, err)

    return out


def run_convergence_suite(
    n_list=(128, 256, 512), b: float = math.e
) -> list[CheckResult]:
    """Dyadic refinement of the integral closed forms; order >= 1.5 required.

    Families the quadrature integrates exactly report order = inf.
    """
    out: list[CheckResult] = []
    for alpha in _ALPHAS:
        g = Order(alpha, _BETA_TYPE).gamma
        for tag in ("critical", "constant", "linear", "mixed"):
            errs = [
                _closed_form_error(LogGrid(b, n), alpha, tag, g) for n in n_list
            ]
            if max(errs) <= EXACT_LEVEL:
                order = math.inf
            else:
                order = min(
                    math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)
                )
            out.append(
                CheckResult(
                    name=f"integral-order-{tag}",
                    alpha=alpha,
                    error=errs[-1],
                    threshold=CLOSED_FORM_TOL if tag != "mixed" else IDENTITY_TOL,
                    passed=errs[-1]
                    <= (CLOSED_FORM_TOL if tag != "mixed" else IDENTITY_TOL)
                    and order >= MIN_ORDER,
                    order=order,
                )
            )
    return out
