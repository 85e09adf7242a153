"""Special functions: Gamma, Beta and the one-parameter Mittag-Leffler function.

Everything here is pure and reentrant.  Arguments are restricted to the
positive-real ranges the rest of the library actually needs; out-of-range
input raises :class:`~hhfrac.errors.DomainError` instead of silently
returning inf/nan.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ConvergenceError, MLOverflowError

#: Default cap on the number of Mittag-Leffler series terms.
ML_TERM_CAP = 10_000


def gamma(x: float) -> float:
    """Gamma function for x > 0.

    Backed by the C library implementation (a Lanczos-type rational
    approximation in double precision), which is more than sufficient for
    the moderate positive arguments used here.
    """
    if not x > 0.0:
        raise DomainError(f"gamma requires x > 0, got {x!r}")
    return math.gamma(x)


def beta(a: float, b: float) -> float:
    """Beta function B(a, b) = Gamma(a)Gamma(b)/Gamma(a+b) for a, b > 0."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"beta requires positive arguments, got ({a!r}, {b!r})")
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def gamma_ratio(c: float, mu: float) -> float:
    """Gamma(c)/Gamma(c - mu) for c > 0, extended through the poles of Gamma.

    When c - mu is zero or a negative integer the reciprocal 1/Gamma(c - mu)
    vanishes and the ratio is 0.  For negative non-integer c - mu the
    reflection formula keeps every Gamma evaluation at a positive argument.
    """
    if not c > 0.0:
        raise DomainError(f"gamma_ratio requires c > 0, got {c!r}")
    d = c - mu
    if d > 0.0:
        return math.exp(math.lgamma(c) - math.lgamma(d))
    # 1/Gamma(d) = sin(pi d) Gamma(1 - d) / pi
    s = math.sin(math.pi * d)
    if s == 0.0:
        return 0.0
    return math.gamma(c) * s * math.gamma(1.0 - d) / math.pi


@dataclass(frozen=True)
class MLSeriesResult:
    """Converged Mittag-Leffler partial sum.

    value: the partial sum; terms_used: number of terms accumulated;
    truncation_estimate: magnitude of the first dropped term.
    """

    value: float
    terms_used: int
    truncation_estimate: float

    def __post_init__(self):
        if self.terms_used < 1:
            raise ValueError("terms_used must be >= 1")
        if not math.isfinite(self.value):
            raise MLOverflowError("Mittag-Leffler value is not finite")


def mittag_leffler(alpha: float, z: float, term_cap: int = ML_TERM_CAP) -> MLSeriesResult:
    """One-parameter Mittag-Leffler function E_alpha(z) = sum_k z^k / Gamma(k*alpha + 1).

    Direct power series for alpha in (0, 1] and z >= 0.  Terms are
    accumulated until the next one drops below machine epsilon times the
    running sum; the final value is re-summed with ``math.fsum`` to keep
    the accumulation compensated.  Arguments large enough to overflow are
    rejected rather than approximated.
    """
    if not (0.0 < alpha <= 1.0):
        raise DomainError(f"mittag_leffler requires alpha in (0, 1], got {alpha!r}")
    if not z >= 0.0:
        raise DomainError(f"mittag_leffler requires z >= 0, got {z!r}")
    if z == 0.0:
        return MLSeriesResult(value=1.0, terms_used=1, truncation_estimate=0.0)

    eps = math.ulp(1.0)
    log_z = math.log(z)
    terms = [1.0]
    partial = 1.0
    for k in range(1, term_cap + 1):
        log_term = k * log_z - math.lgamma(k * alpha + 1.0)
        if log_term > 709.0:
            raise MLOverflowError(
                f"Mittag-Leffler series term overflows at k={k} for alpha={alpha}, z={z}"
            )
        term = math.exp(log_term)
        if term < eps * partial:
            return MLSeriesResult(
                value=math.fsum(terms), terms_used=k, truncation_estimate=term
            )
        terms.append(term)
        partial += term
        if not math.isfinite(partial):
            raise MLOverflowError(
                f"Mittag-Leffler partial sum overflows for alpha={alpha}, z={z}"
            )
    raise ConvergenceError(
        f"Mittag-Leffler series did not converge within {term_cap} terms "
        f"for alpha={alpha}, z={z}"
    )


def mittag_leffler_value(alpha: float, z: float) -> float:
    """Shorthand returning just E_alpha(z)."""
    return mittag_leffler(alpha, z).value
