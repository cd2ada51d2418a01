"""Power series with positive, log-concave coefficients.

Every kernel profile and every Mittag-Leffler function in this package has
the form ``f(s) = sum_k c_k s^k`` with ``c_k > 0`` and ``log c_k`` concave in
k. Concavity makes the term ratio ``|t_(k+1) / t_k|`` nonincreasing, so once
it drops below one the remaining tail is bounded by a geometric series. That
gives a certified truncation point.

Summation runs in double precision first (log-polar terms, exactly rounded
``math.fsum``). When the rounding estimate says cancellation has eaten the
requested accuracy, the sum is redone in mpmath at just enough decimal digits
to cover the cancellation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath
import numpy as np

from .errors import AccuracyError

try:  # C-level multiprecision complex arithmetic, several times faster than mpmath
    import gmpy2
except ImportError:  # pragma: no cover
    gmpy2 = None

EPS = 2.0 ** -52
LOG_HUGE = 700.0


@dataclass(frozen=True)
class SeriesValue:
    value: complex  # an mpmath.mpc when |value| exceeds double range
    terms: int
    tail_bound: float
    error: float  # estimated total error (tail + rounding), in value units
    digits: int  # 0 for the double-precision path

    def __complex__(self):
        return complex(self.value)


def log_abs(v) -> float:
    """``log|v|`` for complex or mpmath values; ``-inf`` at zero."""
    if isinstance(v, (mpmath.mpc, mpmath.mpf)):
        a = abs(v)
        return -math.inf if a == 0 else float(mpmath.log(a))
    a = abs(v)
    return -math.inf if a == 0 else math.log(a)


def phase(v) -> float:
    if isinstance(v, (mpmath.mpc, mpmath.mpf)):
        return float(mpmath.arg(v))
    return math.atan2(v.imag, v.real) if isinstance(v, complex) else (0.0 if v >= 0 else math.pi)


def _from_mp(v):
    if log_abs(v) < LOG_HUGE:
        return complex(v)
    return v


def _to_gmpy(x):
    sign, man, exp, _ = x._mpf_
    v = gmpy2.mul_2exp(gmpy2.mpfr(man), exp)
    return -v if sign else v


def _from_gmpy(x):
    if x == 0:
        return mpmath.mpf(0)
    man, exp = x.as_mantissa_exp()
    return mpmath.mpf((int(man), int(exp)))


class PowerSeries:
    """``sum_k c_k s^k`` given ``log c_k`` (and optionally ``c_k`` in mpmath).

    Parameters
    ----------
    log_coef : callable
        ``k -> log c_k`` in double precision.
    mp_coefs : callable, optional
        ``n -> [c_0, ..., c_(n-1)]`` as mpmath numbers at the current working
        precision. Without it the high-precision fallback uses the rounded double
        coefficients, which cannot beat their own relative error.
    length : int, optional
        Number of coefficients available (finite tables). Beyond it the tail
        is bounded using the last available term ratio.
    max_terms : int
        Hard cap on the truncation index.
    """

    def __init__(self, log_coef: Callable[[int], float],
                 mp_coefs: Optional[Callable[[int], list]] = None,
                 length: Optional[int] = None, max_terms: int = 10_000):
        self._log_coef = log_coef
        self._mp_coefs = mp_coefs
        self.length = length
        self.max_terms = max_terms if length is None else min(max_terms, length)
        self._lc = np.empty(0)
        self._mp_dps = 0
        self._mp_list: list = []
        self._gmp_list: list = []

    # -- coefficients ----------------------------------------------------------

    def log_coefficients(self, n: int) -> np.ndarray:
        n = min(n, self.max_terms)
        if len(self._lc) < n:
            start = len(self._lc)
            new = np.array([self._log_coef(k) for k in range(start, n)], dtype=float)
            self._lc = np.concatenate([self._lc, new])
        return self._lc[:n]

    def _mp_coefficients(self, n: int, dps: int) -> list:
        if dps > self._mp_dps:
            # round up so small precision increases reuse the cache
            self._mp_dps = max(dps, int(self._mp_dps * 1.25), 32)
            self._mp_list = []
            self._gmp_list = []
        if len(self._mp_list) < n:
            m = max(n, 2 * len(self._mp_list))
            with mpmath.workdps(self._mp_dps):
                if self._mp_coefs is not None:
                    self._mp_list = [mpmath.mpf(c) for c in self._mp_coefs(m)]
                else:
                    lc = self.log_coefficients(m)
                    self._mp_list = [mpmath.exp(mpmath.mpf(float(x))) for x in lc]
        return self._mp_list[:n]

    def _horner(self, s: complex, K: int, dps: int):
        """``sum_(k<=K) c_k s^k`` at ``dps`` digits, as an ``mpmath.mpc``."""
        coef = self._mp_coefficients(K + 1, dps)
        if gmpy2 is None:
            with mpmath.workdps(dps):
                z = mpmath.mpc(s.real, s.imag)
                acc = coef[K]
                for c in reversed(coef[:K]):
                    acc = acc * z + c
                return +acc
        prec = mpmath.libmp.dps_to_prec(self._mp_dps)
        with gmpy2.context(gmpy2.get_context(), precision=prec):
            if len(self._gmp_list) < K + 1:
                self._gmp_list = [_to_gmpy(c) for c in self._mp_list]
            gc = self._gmp_list
            z = gmpy2.mpc(s)
            acc = gc[K]
            for c in reversed(gc[:K]):
                acc = acc * z + c
        with mpmath.workdps(dps):
            return mpmath.mpc(_from_gmpy(acc.real), _from_gmpy(acc.imag))

    # -- truncation ----------------------------------------------------------

    def truncation(self, log_abs_s: float, log_tail_target: float, max_ratio: float = 1.0):
        """Smallest K whose certified tail after terms 0..K is below the target.

        Returns ``(K, log_tail_bound, log_term_magnitudes[0..K])``.
        """
        n = 64
        while True:
            lc = self.log_coefficients(n)
            avail = len(lc)
            a = lc + np.arange(avail) * log_abs_s
            d = np.diff(a)  # log ratio |t_(k+1) / t_k|, nonincreasing
            with np.errstate(divide="ignore"):
                log_rho = d
                ok_ratio = log_rho < math.log(max_ratio) if max_ratio < 1 else log_rho < 0
                rho = np.exp(np.minimum(log_rho, -1e-300))
                log_tail = a[:-1] + log_rho - np.log1p(-rho)
            good = np.nonzero(ok_ratio & (log_tail <= log_tail_target))[0]
            if len(good):
                K = int(good[0])
                return K, float(log_tail[K]), a[:K + 1]
            if avail < n or avail >= self.max_terms:
                # coefficients exhausted: bound the tail past the last term
                # by the last available ratio
                K = avail - 1
                if K >= 1 and ok_ratio[-1]:
                    lt = float(a[-1] + log_rho[-1] - math.log1p(-rho[-1]))
                    if lt <= log_tail_target:
                        return K, lt, a
                    raise AccuracyError("series tail not certifiable within the available terms",
                                        terms=avail, log_tail=lt)
                raise AccuracyError("term ratio never dropped below the certification bound",
                                    terms=avail)
            n *= 2

    # -- evaluation ------------------------------------------------------------

    def evaluate(self, s: complex, abs_tol: float = 1e-15, rel_tol: float = 0.0,
                 max_ratio: float = 1.0) -> SeriesValue:
        """Evaluate to within ``max(abs_tol, rel_tol * |f(s)|)``."""
        s = complex(s)
        if s == 0:
            return SeriesValue(complex(math.exp(self.log_coefficients(1)[0])), 1, 0.0, 0.0, 0)
        L = math.log(abs(s))
        theta = math.atan2(s.imag, s.real)

        # double precision pass, tail pushed to the rounding floor
        lc_bound = math.log(0.1 * abs_tol) if abs_tol > 0 else -math.inf
        K, log_tail, a = self._truncate_double(L, lc_bound, max_ratio)
        amax = float(np.max(a))
        k = np.arange(K + 1)
        mag = np.exp(a - amax)
        ang = k * theta
        re = math.fsum(mag * np.cos(ang))
        im = math.fsum(mag * np.sin(ang))
        lc = self._lc[:K + 1]
        # per-term relative error: log-magnitude and angle rounding, then exp
        rounding = 2 * EPS * float(np.sum(mag * (2.0 + np.abs(lc) + k * (abs(L) + abs(theta)))))
        scaled = complex(re, im)
        rounding += EPS * abs(scaled)
        log_val = (math.log(abs(scaled)) if scaled != 0 else -math.inf) + amax
        log_err = math.log(rounding + math.exp(log_tail - amax)) + amax
        log_target = max(math.log(abs_tol) if abs_tol > 0 else -math.inf,
                         math.log(rel_tol) + log_val if rel_tol > 0 else -math.inf)
        if log_err <= log_target:
            if amax + math.log(abs(scaled) + 1e-300) < LOG_HUGE:
                value = scaled * math.exp(amax)
            else:
                value = mpmath.mpc(scaled) * mpmath.exp(amax)
            return SeriesValue(value, K + 1, math.exp(min(log_tail, LOG_HUGE)),
                               math.exp(min(log_err, LOG_HUGE)), 0)
        log_sum = amax + math.log(float(np.sum(mag)))
        return self._evaluate_mp(s, L, abs_tol, rel_tol, max_ratio, log_sum,
                                 log_val if log_val > log_err else None)

    def _truncate_double(self, L, log_abs_bound, max_ratio):
        # first pass: find where terms fall 40 e-folds (1e-17) below the peak
        K, log_tail, a = self.truncation(L, math.inf, max_ratio)
        peak = float(np.max(a))
        target = max(log_abs_bound, peak + math.log(1e-18))
        if log_tail <= target:
            return K, log_tail, a
        return self.truncation(L, target, max_ratio)

    def _evaluate_mp(self, s, L, abs_tol, rel_tol, max_ratio, log_sum, log_val_guess):
        ln10 = math.log(10.0)
        log_abs_target = math.log(abs_tol) if abs_tol > 0 else -math.inf
        if log_val_guess is None:
            # unknown magnitude: values of order one are the common case for
            # heavy cancellation (entire functions decaying along a ray)
            log_val_guess = min(log_sum - 30 * ln10, 0.0)
        value = None
        dps = 0
        for _ in range(8):
            log_target = max(log_abs_target, math.log(rel_tol) + log_val_guess if rel_tol > 0 else -math.inf)
            dps = max(20, int(math.ceil((log_sum - log_target) / ln10)) + 12, 2 * dps)
            K, log_tail, _ = self.truncation(L, log_target - 20 * ln10, max_ratio)
            value = self._horner(s, K, dps)
            log_val = log_abs(value)
            coef_err = 0.0 if self._mp_coefs is not None else 8 * EPS
            log_round = log_sum + (2 - dps) * ln10 + math.log(K + 1)
            if coef_err:
                log_round = np.logaddexp(log_round, log_sum + math.log(coef_err))
            log_err = float(np.logaddexp(log_round, log_tail))
            log_target = max(log_abs_target, math.log(rel_tol) + log_val if rel_tol > 0 else -math.inf)
            if log_err <= log_target:
                return SeriesValue(_from_mp(value), K + 1, math.exp(min(log_tail, LOG_HUGE)),
                                   math.exp(min(log_err, LOG_HUGE)), dps)
            if coef_err:
                break
            # value is below the noise floor: assume it is much smaller
            log_val_guess = log_val if log_val > log_err else log_err - 15 * ln10
        raise AccuracyError("could not reach the requested accuracy",
                            estimate=None if value is None else _from_mp(value))

    def evaluate_array(self, s: np.ndarray, n_terms: int) -> np.ndarray:
        """Vectorized double-precision Horner sum of the first ``n_terms`` terms."""
        lc = self.log_coefficients(n_terms)
        with np.errstate(under="ignore"):
            c = np.exp(lc)
        s = np.asarray(s, dtype=complex)
        acc = np.full(s.shape, c[-1], dtype=complex)
        for ck in c[-2::-1]:
            acc = acc * s + ck
        return acc

    def terms_needed(self, smax: float, rel_tol: float = 1e-15) -> int:
        """Terms that certify a tail below ``rel_tol`` times the largest term on ``|s| <= smax``."""
        if smax == 0:
            return 1
        L = math.log(smax)
        K, _, a = self.truncation(L, math.inf)
        peak = float(np.max(a))
        K, _, _ = self.truncation(L, peak + math.log(rel_tol))
        return K + 1
