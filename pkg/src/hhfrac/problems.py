"""Problem data: right-hand-side catalog, boundary-value problem, solve report.

Right-hand sides come from a fixed catalog rather than an expression parser
so that the Lipschitz and growth metadata attached to each entry stay honest
and testable.  Every entry evaluates f(t, u, v) elementwise on numpy arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DomainError
from .grids import GridFunction, LogGrid, Order

PAPER_EXAMPLE = "paper-example"
MANUFACTURED = "manufactured-log-power"
AFFINE = "affine-in-uv"
CUSTOM_TABLE = "custom-table"

_KINDS = (PAPER_EXAMPLE, MANUFACTURED, AFFINE, CUSTOM_TABLE)


@dataclass(frozen=True)
class RhsSpec:
    """A catalog right-hand side with its growth/Lipschitz metadata.

    K_f and L_f bound |f(t,u,v) - f(t,u',v')| by K_f|u-u'| + L_f|v-v'|;
    delta_star, sigma_star, rho_star bound |f| by
    delta* + sigma*|u| + rho*|v|.  L_f < 1 and rho_star < 1 are required
    (they sit in denominators downstream).
    """

    kind: str
    K_f: float
    L_f: float
    delta_star: float
    sigma_star: float
    rho_star: float
    params: dict = field(default_factory=dict)
    table: Optional[GridFunction] = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise DomainError(f"unknown rhs kind {self.kind!r}")
        if not 0.0 <= self.L_f < 1.0:
            raise DomainError(f"L_f must lie in [0, 1), got {self.L_f!r}")
        if self.K_f < 0.0:
            raise DomainError(f"K_f must be >= 0, got {self.K_f!r}")
        if not 0.0 <= self.rho_star < 1.0:
            raise DomainError(f"rho_star must lie in [0, 1), got {self.rho_star!r}")
        if self.delta_star < 0.0 or self.sigma_star < 0.0:
            raise DomainError("growth coefficients must be nonnegative")

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, t, u, v):
        """f(t, u, v), elementwise over numpy arrays or scalars."""
        if self.kind == PAPER_EXAMPLE:
            c = 1.0 / (t * (2.0 + t))
            su = np.abs(u) / (1.0 + np.abs(u))
            sv = np.abs(v) / (1.0 + np.abs(v))
            return c * (1.0 + su + sv)
        if self.kind == MANUFACTURED:
            return self.params["f_coeff"] * np.log(t) ** self.params["f_exponent"] + 0.0 * u
        if self.kind == AFFINE:
            p = self.params
            return p["g0"] + p["g1"] * np.log(t) + p["a"] * u + p["c"] * v
        # custom table: weighted profile interpolated in x = log t
        x = np.log(t)
        xs = self.table.grid.log_nodes
        w = np.interp(x, xs, self.table.weighted_values)
        return w * x ** (self.table.gamma_weight - 1.0) + 0.0 * u

    def implicit_solution(self, t, u, shift=0.0):
        """Closed-form z with z = f(t, u, z) + shift, or None if it must be iterated."""
        if self.kind == AFFINE:
            p = self.params
            return (p["g0"] + p["g1"] * np.log(t) + p["a"] * u + shift) / (1.0 - p["c"])
        if self.L_f == 0.0:
            return self.evaluate(t, u, 0.0) + shift
        return None

    def weighted_limit(self, u_weighted_limit: float, gamma: float) -> float:
        """lim_{t->1+} (log t)^(1-gamma) F_u(t) for u with the given weighted limit."""
        if self.kind == AFFINE:
            return self.params["a"] * u_weighted_limit / (1.0 - self.params["c"])
        if self.kind == CUSTOM_TABLE:
            return self.table.weighted_limit
        return 0.0


def paper_example_rhs() -> RhsSpec:
    """f(t,u,v) = (1/(t(2+t))) [1 + |u|/(1+|u|) + |v|/(1+|v|)] on [1, e].

    The prefactor has supremum 1/3 at t = 1 and the saturations are
    1-Lipschitz, so K_f = L_f = 1/3 and delta* = sigma* = rho* = 1/3.
    """
    third = 1.0 / 3.0
    return RhsSpec(
        kind=PAPER_EXAMPLE,
        K_f=third, L_f=third,
        delta_star=third, sigma_star=third, rho_star=third,
    )


def manufactured_rhs(
    order: Order, b: float, exponent: float = 2.0,
    coeff: float = 1.0, critical_coeff: float = 0.0,
) -> RhsSpec:
    """Right-hand side manufactured from u*(t) = critical_coeff (log t)^(gamma-1)
    + coeff (log t)^exponent.

    The critical mode is annihilated by the derivative, so
    f(t) = coeff Gamma(p+1)/Gamma(p+1-alpha) (log t)^(p-alpha), independent
    of u and v (K_f = L_f = 0).
    """
    p = exponent
    if p < 1.0:
        raise DomainError(f"manufactured exponent must be >= 1, got {p!r}")
    f_coeff = coeff * math.gamma(p + 1.0) / math.gamma(p + 1.0 - order.alpha)
    delta = abs(f_coeff) * math.log(b) ** (p - order.alpha)
    return RhsSpec(
        kind=MANUFACTURED,
        K_f=0.0, L_f=0.0,
        delta_star=delta, sigma_star=0.0, rho_star=0.0,
        params={
            "f_coeff": f_coeff,
            "f_exponent": p - order.alpha,
            "u_coeff": coeff,
            "u_exponent": p,
            "u_critical_coeff": critical_coeff,
        },
    )


def affine_rhs(g0: float, g1: float, a: float, c: float, b: float) -> RhsSpec:
    """f(t,u,v) = g0 + g1 log t + a u + c v with |c| < 1."""
    if not abs(c) < 1.0:
        raise DomainError(f"affine rhs needs |c| < 1, got {c!r}")
    logb = math.log(b)
    delta = max(abs(g0), abs(g0 + g1 * logb))
    return RhsSpec(
        kind=AFFINE,
        K_f=abs(a), L_f=abs(c),
        delta_star=delta, sigma_star=abs(a), rho_star=abs(c),
        params={"g0": g0, "g1": g1, "a": a, "c": c},
    )


def table_rhs(table: GridFunction) -> RhsSpec:
    """f(t,u,v) = T(t) given by a weighted table on a grid (u,v ignored)."""
    delta = float(np.max(np.abs(table.raw_tail())))
    return RhsSpec(
        kind=CUSTOM_TABLE,
        K_f=0.0, L_f=0.0,
        delta_star=delta, sigma_star=0.0, rho_star=0.0,
        table=table,
    )


@dataclass(frozen=True)
class ProblemSpec:
    """Boundary-value problem data on [1, b]."""

    order: Order
    b: float
    c1: float
    c2: float
    phi: float
    rhs: RhsSpec

    def __post_init__(self):
        if not self.b > 1.0:
            raise DomainError(f"problem requires b > 1, got {self.b!r}")
        if self.c1 + self.c2 == 0.0:
            raise DomainError("boundary condition requires c1 + c2 != 0")
        if self.c2 == 0.0:
            raise DomainError("boundary condition requires c2 != 0")

    def grid(self, n_panels: int = 512) -> LogGrid:
        return LogGrid(self.b, n_panels)


def paper_example_problem(phi: float = 1.0) -> ProblemSpec:
    """The saturating implicit problem with alpha=1/3, beta=2/3, c1=2, c2=1, b=e.

    The boundary value phi is a free parameter (it does not enter the
    existence or uniqueness constants); 1 is the default used by the CLI.
    """
    order = Order(alpha=1.0 / 3.0, beta_type=2.0 / 3.0)
    return ProblemSpec(
        order=order, b=math.e, c1=2.0, c2=1.0, phi=phi, rhs=paper_example_rhs()
    )


def manufactured_problem(
    order: Order, b: float, c1: float, c2: float,
    exponent: float = 2.0, coeff: float = 1.0, critical_coeff: float = 0.0,
) -> ProblemSpec:
    """Problem whose exact solution is known; phi is chosen consistently.

    For u* = a_c (log t)^(gamma-1) + a (log t)^p the boundary functional is
    c1 (I^(1-gamma) u*)(1+) + c2 (I^(1-gamma) u*)(b-)
      = (c1 + c2) a_c Gamma(gamma)
        + c2 a Gamma(p+1)/Gamma(p+2-gamma) (log b)^(p+1-gamma).
    """
    rhs = manufactured_rhs(order, b, exponent, coeff, critical_coeff)
    g = order.gamma
    logb = math.log(b)
    phi = (c1 + c2) * critical_coeff * math.gamma(g) + c2 * coeff * (
        math.gamma(exponent + 1.0)
        / math.gamma(exponent + 2.0 - g)
        * logb ** (exponent + 1.0 - g)
    )
    return ProblemSpec(order=order, b=b, c1=c1, c2=c2, phi=phi, rhs=rhs)


def manufactured_solution(problem: ProblemSpec, grid: LogGrid) -> GridFunction:
    """Exact solution of a manufactured problem as a grid function."""
    if problem.rhs.kind != MANUFACTURED:
        raise DomainError("exact solution is only known for manufactured problems")
    p = problem.rhs.params
    g = problem.order.gamma
    x = grid.log_nodes
    w = np.empty(grid.n_nodes)
    w[0] = p["u_critical_coeff"]
    w[1:] = p["u_critical_coeff"] + p["u_coeff"] * x[1:] ** (1.0 - g + p["u_exponent"])
    return GridFunction(grid, g, w)


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a successive-approximation solve."""

    iterations: int
    final_update_norm: float
    residual_norm: float
    bc_defect: float
    inner_iteration_max: int

    def __post_init__(self):
        if self.iterations < 0 or self.inner_iteration_max < 0:
            raise ValueError("iteration counts must be nonnegative")
        for name in ("final_update_norm", "residual_norm", "bc_defect"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be nonnegative")
