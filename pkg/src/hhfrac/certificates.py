"""Existence, uniqueness and Ulam-stability constants with verdicts.

All constants are closed-form expressions in (alpha, gamma, b, c1, c2, phi)
and the right-hand-side metadata; they are evaluated here in double
precision and compared against high-precision references in the tests.

Two deliberate quirks are reproduced and documented rather than silently
repaired:

* ``omega`` follows the existence theorem literally (a 1/Gamma(gamma)
  factor); ``omega_paper_variant`` replaces it by Gamma(gamma), which is
  what the worked example in the source material actually multiplies out.
  Both are reported.
* The Rassias constant uses the displayed product with lambda_phi squared.
  The likely intent is a single factor; the displayed form is implemented
  and the discrepancy is noted here and in the README.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CertificateRejected, DomainError
from .grids import GridFunction, LogGrid
from .hadamard import hadamard_integral
from .problems import ProblemSpec
from .specfun import beta as beta_fn
from .specfun import mittag_leffler


@dataclass(frozen=True)
class Certificate:
    """All computed constants for one problem, with pass/fail verdicts."""

    omega: float
    omega_paper_variant: float
    lambda_cap: float
    ball_radius: Optional[float]
    a_const: float
    b_const: float
    b_tilde: float
    c_f: float
    existence_ok: bool
    uniqueness_ok: bool
    lambda_phi: Optional[float] = None
    c_f_phi: Optional[float] = None

    def __post_init__(self):
        for name in ("omega", "omega_paper_variant", "lambda_cap", "a_const",
                     "b_const", "b_tilde", "c_f"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise ValueError(f"certificate constant {name} must be finite and >= 0")
        if (self.ball_radius is not None) != (self.omega < 1.0):
            raise ValueError("ball_radius must be present exactly when omega < 1")
        if (self.c_f_phi is None) != (self.lambda_phi is None):
            raise ValueError("c_f_phi must be present exactly when lambda_phi is")

    def as_text(self) -> str:
        """Flat ``name = value`` record, one line per constant."""
        lines = [
            f"omega = {self.omega!r}",
            f"omega_paper_variant = {self.omega_paper_variant!r}",
            f"lambda_cap = {self.lambda_cap!r}",
        ]
        if self.ball_radius is not None:
            lines.append(f"ball_radius = {self.ball_radius!r}")
        lines += [
            f"a_const = {self.a_const!r}",
            f"b_const = {self.b_const!r}",
            f"b_tilde = {self.b_tilde!r}",
            f"c_f = {self.c_f!r}",
        ]
        if self.lambda_phi is not None:
            lines.append(f"lambda_phi = {self.lambda_phi!r}")
            lines.append(f"c_f_phi = {self.c_f_phi!r}")
        lines.append(f"existence_ok = {'true' if self.existence_ok else 'false'}")
        lines.append(f"uniqueness_ok = {'true' if self.uniqueness_ok else 'false'}")
        return "\n".join(lines) + "\n"


def _c_ratio(problem: ProblemSpec) -> float:
    return abs(problem.c2 / (problem.c1 + problem.c2))


def existence_constants(problem: ProblemSpec):
    """(omega, lambda_cap, ball_radius or None) for the growth hypothesis.

    omega < 1 certifies existence; the ball radius lambda_cap/(1 - omega)
    is only defined in that case.  lambda_cap bounds a norm, so the
    boundary term enters through |phi/(c1+c2)|.
    """
    rhs = problem.rhs
    if not rhs.rho_star < 1.0:
        raise DomainError("existence constants require rho_star < 1")
    o = problem.order
    g, a = o.gamma, o.alpha
    logb = math.log(problem.b)
    cr = _c_ratio(problem)
    shape = beta_fn(g, a) / math.gamma(a) * logb**a
    omega = (cr / math.gamma(g) + 1.0) * rhs.sigma_star * shape / (1.0 - rhs.rho_star)
    lam = abs(problem.phi / (problem.c1 + problem.c2)) / math.gamma(g) + (
        (cr / (math.gamma(g) * math.gamma(2.0 - g + a)) + 1.0 / math.gamma(a + 1.0))
        * logb ** (1.0 - g + a)
        / (1.0 - rhs.rho_star)
    )
    radius = lam / (1.0 - omega) if omega < 1.0 else None
    return omega, lam, radius


def existence_constant_paper_arithmetic(problem: ProblemSpec) -> float:
    """The omega variant with Gamma(gamma) in place of 1/Gamma(gamma).

    This reproduces the arithmetic of the worked example (which prints
    about 0.88 for the reference problem); the literal theorem constant is
    the ``omega`` returned by :func:`existence_constants`.
    """
    rhs = problem.rhs
    if not rhs.rho_star < 1.0:
        raise DomainError("existence constants require rho_star < 1")
    o = problem.order
    g, a = o.gamma, o.alpha
    logb = math.log(problem.b)
    cr = _c_ratio(problem)
    shape = beta_fn(g, a) / math.gamma(a) * logb**a
    return (cr * math.gamma(g) + 1.0) * rhs.sigma_star * shape / (1.0 - rhs.rho_star)


def uniqueness_constant(problem: ProblemSpec) -> float:
    """Contraction modulus A of the fixed-point operator; A < 1 gives uniqueness."""
    rhs = problem.rhs
    if not rhs.L_f < 1.0:
        raise DomainError("uniqueness constant requires L_f < 1")
    o = problem.order
    g, a = o.gamma, o.alpha
    logb = math.log(problem.b)
    return (
        (_c_ratio(problem) / math.gamma(a + 1.0) + beta_fn(g, a) / math.gamma(a))
        * logb**a
        * rhs.K_f
        / (1.0 - rhs.L_f)
    )


def ulam_hyers_constant(problem: ProblemSpec):
    """(B, C_f): the integral-inequality constant and the Ulam-Hyers constant.

    C_f = B E_alpha(K_f/(1-L_f) (log b)^alpha), the Gronwall closure of the
    perturbation bound evaluated at the right endpoint.
    """
    rhs = problem.rhs
    if not rhs.L_f < 1.0:
        raise DomainError("Ulam-Hyers constant requires L_f < 1")
    o = problem.order
    g, a = o.gamma, o.alpha
    logb = math.log(problem.b)
    b_const = _c_ratio(problem) / math.gamma(g) * logb**a / math.gamma(
        2.0 - g + a
    ) + logb**a / math.gamma(a + 1.0)
    growth = mittag_leffler(a, rhs.K_f / (1.0 - rhs.L_f) * logb**a).value
    return b_const, b_const * growth


def rassias_constant(
    problem: ProblemSpec,
    phi_weight: GridFunction,
    lambda_phi: float,
    tol: float = 1e-9,
):
    """(B_tilde, C_f_phi) after machine-verifying the comparison constant.

    The caller supplies lambda_phi; it is accepted only if
    (I^alpha phi)(t_i) <= lambda_phi phi(t_i) + tol at every node i >= 1.
    The profile must be positive there; a non-monotone profile is allowed
    (the canonical (log t)^(gamma-1) profile is decreasing) but triggers a
    warning since the classical statement assumes an increasing one.
    """
    if not lambda_phi > 0.0:
        raise CertificateRejected("lambda_phi must be positive")
    rhs = problem.rhs
    if not rhs.L_f < 1.0:
        raise DomainError("Rassias constant requires L_f < 1")
    o = problem.order
    g, a = o.gamma, o.alpha
    logb = math.log(problem.b)

    phi_raw = phi_weight.raw_tail()
    if np.any(phi_raw <= 0.0):
        raise CertificateRejected("phi profile must be positive on the grid")
    if np.any(np.diff(phi_raw) < -tol):
        warnings.warn(
            "phi profile is not increasing on the grid; proceeding anyway",
            stacklevel=2,
        )
    integral_raw = hadamard_integral(phi_weight, a).raw_tail()
    excess = integral_raw - lambda_phi * phi_raw
    bad = np.where(excess > tol)[0]
    if bad.size:
        nodes = [int(i) + 1 for i in bad[:8]]
        raise CertificateRejected(
            f"lambda_phi={lambda_phi} fails at {bad.size} nodes "
            f"(first node indices {nodes}, worst excess {float(np.max(excess)):.3e})",
            violations=nodes,
        )

    b_tilde = _c_ratio(problem) * logb ** (g - 1.0) / math.gamma(g) + 1.0
    growth = mittag_leffler(a, rhs.K_f / (1.0 - rhs.L_f) * logb**a).value
    # the displayed product carries lambda_phi twice
    return b_tilde, b_tilde * lambda_phi**2 * growth


def gronwall_bound(
    grid: LogGrid, w_values: np.ndarray, k: float, alpha: float
) -> np.ndarray:
    """Nodewise Mittag-Leffler closure w(t) E_alpha(k Gamma(alpha) (log t)^alpha).

    ``w_values`` must be nondecreasing along the grid; that is the
    hypothesis under which the kernel-series bound collapses to this
    closed form.
    """
    if not k > 0.0:
        raise DomainError(f"gronwall_bound requires k > 0, got {k!r}")
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"gronwall_bound requires alpha in (0, 1), got {alpha!r}")
    w = np.asarray(w_values, dtype=float)
    if w.shape != (grid.n_nodes,):
        raise DomainError(f"expected {grid.n_nodes} values, got shape {w.shape}")
    if np.any(np.diff(w) < -1e-14 * np.maximum(1.0, np.abs(w[:-1]))):
        raise DomainError("gronwall_bound requires a nondecreasing profile")
    x = grid.log_nodes
    factors = np.array(
        [mittag_leffler(alpha, k * math.gamma(alpha) * xi**alpha).value for xi in x]
    )
    return w * factors


def build_certificate(
    problem: ProblemSpec,
    phi_weight: Optional[GridFunction] = None,
    lambda_phi: Optional[float] = None,
) -> Certificate:
    """Assemble every constant for one problem (Rassias parts optional)."""
    omega, lam, radius = existence_constants(problem)
    omega_pa = existence_constant_paper_arithmetic(problem)
    a_const = uniqueness_constant(problem)
    b_const, c_f = ulam_hyers_constant(problem)
    b_tilde, c_f_phi = None, None
    if lambda_phi is not None:
        if phi_weight is None:
            raise DomainError("lambda_phi requires a phi profile to verify against")
        b_tilde, c_f_phi = rassias_constant(problem, phi_weight, lambda_phi)
    else:
        # B_tilde is a closed form independent of phi; always reported
        g = problem.order.gamma
        b_tilde = _c_ratio(problem) * math.log(problem.b) ** (g - 1.0) / math.gamma(g) + 1.0
    return Certificate(
        omega=omega,
        omega_paper_variant=omega_pa,
        lambda_cap=lam,
        ball_radius=radius,
        a_const=a_const,
        b_const=b_const,
        b_tilde=b_tilde,
        c_f=c_f,
        existence_ok=omega < 1.0,
        uniqueness_ok=a_const < 1.0,
        lambda_phi=lambda_phi,
        c_f_phi=c_f_phi,
    )
