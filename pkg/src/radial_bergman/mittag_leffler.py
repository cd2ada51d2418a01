"""Two-parameter Mittag-Leffler function ``E_{beta,gamma}(z) = sum z^k / Gamma(beta k + gamma)``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import mpmath

from .errors import AccuracyError, ValidationError
from .series import PowerSeries, SeriesValue

DEFAULT_TERM_CAP = 10_000


@dataclass(frozen=True)
class MLFunctionParams:
    beta: float
    gamma_param: float

    def __post_init__(self):
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "gamma_param", float(self.gamma_param))
        if not (self.beta > 0 and self.gamma_param > 0):
            raise ValidationError("beta and gamma must be positive")

    @property
    def order(self) -> float:
        return 1.0 / self.beta


def _small_rational(x: float, max_den: int = 12):
    if not math.isfinite(x):
        return None
    for q in range(1, max_den + 1):
        p = round(x * q)
        if p > 0 and abs(x * q - p) <= 1e-12 * max(1.0, x * q):
            return p, q
    return None


def rgamma_sequence(beta: float, gamma: float, n: int) -> list:
    """``[1/Gamma(beta k + gamma) for k < n]`` at the current mpmath precision.

    When beta is a small rational p/q the arguments advance by the integer p
    every q steps, so ``Gamma(x + p) = Gamma(x) x (x+1) ... (x+p-1)`` replaces
    all but q gamma evaluations. Small rationals (in beta and gamma) are used
    exactly rather than through their nearest doubles.
    """
    frac = _small_rational(beta)
    gfrac = _small_rational(gamma, 24)
    g = mpmath.mpf(gfrac[0]) / gfrac[1] if gfrac else mpmath.mpf(gamma)
    if frac is None:
        b = mpmath.mpf(beta)
        return [mpmath.rgamma(b * k + g) for k in range(n)]
    p, q = frac
    b = mpmath.mpf(p) / q
    out = [mpmath.rgamma(b * k + g) for k in range(min(q, n))]
    for k in range(q, n):
        x = b * (k - q) + g
        prod = x
        for i in range(1, p):
            prod *= x + i
        out.append(out[k - q] / prod)
    return out


@lru_cache(maxsize=64)
def ml_series(params: MLFunctionParams, term_cap: int = DEFAULT_TERM_CAP) -> PowerSeries:
    """The coefficient sequence ``1 / Gamma(beta k + gamma)`` as a :class:`PowerSeries`.

    Cached per parameter pair so repeated evaluations share coefficient tables.
    """
    b, g = params.beta, params.gamma_param

    def log_coef(k):
        return -math.lgamma(b * k + g)

    def mp_coefs(n):
        return rgamma_sequence(b, g, n)

    return PowerSeries(log_coef, mp_coefs, max_terms=term_cap)


def ml_eval(params: MLFunctionParams, z: complex, tol: float = 1e-14,
            term_cap: int = DEFAULT_TERM_CAP) -> SeriesValue:
    """Evaluate ``E_{beta,gamma}(z)`` to absolute accuracy ``tol``.

    The partial sum stops once the term ratio is below 1/2 and the geometric
    majorant of the tail is below ``tol``; ``terms`` and ``tail_bound`` on the
    result report where. Raises :class:`AccuracyError` when ``term_cap`` terms
    are not enough (|z| too large for the power series).
    """
    if not tol > 0:
        raise ValidationError("tol must be positive")
    try:
        return ml_series(params, term_cap).evaluate(z, abs_tol=tol, max_ratio=0.5)
    except AccuracyError as exc:
        raise AccuracyError(f"Mittag-Leffler series not certified within {term_cap} terms at z={z}",
                            estimate=exc.estimate, **exc.context) from None
