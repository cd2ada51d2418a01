"""Weighted Bergman kernels of radial weights.

For a radial weight the monomials are orthogonal, so the kernel depends on
``s = z * conj(w)`` only::

    K(z, w) = f(s),   f(s) = sum_k s^k / W_k

with ``W_k`` the moment sequence. :class:`KernelEvaluator` wraps the profile
``f`` for three sources: a moment sequence (``series``), the Mittag-Leffler
closed form (``closed``), and the q -> infinity limit of the truncated disk
weights (``limit``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import moments as mom
from . import quadrature
from .errors import DomainError, ValidationError
from .mittag_leffler import MLFunctionParams, ml_series, rgamma_sequence
from .series import PowerSeries, SeriesValue
from .weights import (MittagLefflerWeight, RadialWeightSpec, TruncatedDiskWeight,
                      require_valid)

SERIES, CLOSED, LIMIT = "series", "closed", "limit"


def _ml_prefactor(w: MittagLefflerWeight) -> float:
    return 2 * w.m * w.alpha ** ((2 + w.n) / (2 * w.m))


def _series_for_weight(weight: RadialWeightSpec, max_terms: int, quad_tol: float) -> PowerSeries:
    if isinstance(weight, MittagLefflerWeight) and weight.closed_form:
        m, n, a = weight.m, weight.n, weight.alpha

        def mp_coefs(count):
            two_m = 2 * mpmath.mpf(m)
            pref = two_m * mpmath.power(mpmath.mpf(a), (2 + mpmath.mpf(n)) / two_m)
            step = mpmath.power(mpmath.mpf(a), 1 / mpmath.mpf(m))
            rg = rgamma_sequence(1.0 / m, (2 + n) / (2 * m), count)
            out, g = [], pref
            for r in rg:
                out.append(g * r)
                g *= step
            return out

        return PowerSeries(lambda k: -mom.ml_log_moment(weight, k), mp_coefs, max_terms=max_terms)
    if isinstance(weight, TruncatedDiskWeight):
        q = weight.q

        def mp_coefs(count):
            return [1 / mom.truncated_disk_moment_mp(q, k) for k in range(count)]

        return PowerSeries(lambda k: -math.log(mom.truncated_disk_moment(q, k)), mp_coefs,
                           max_terms=max_terms)
    return PowerSeries(lambda k: -mom.quadrature_log_moment(weight, k, quad_tol), max_terms=max_terms)


@dataclass(frozen=True)
class KernelEvaluator:
    """Immutable evaluator of ``K(z, w) = f(z * conj(w))``.

    Build with :meth:`from_weight`, :meth:`from_moments` or :meth:`limit`.
    ``tol`` is the default absolute accuracy of a single evaluation.
    """

    path: str
    weight: RadialWeightSpec | None = None
    moments: mom.MomentSequence | None = None
    tol: float = 1e-14
    max_terms: int = 10_000
    _series: PowerSeries | None = field(default=None, repr=False, compare=False)
    _scale: float = field(default=1.0, repr=False, compare=False)
    _arg_scale: float = field(default=1.0, repr=False, compare=False)

    @classmethod
    def from_weight(cls, weight: RadialWeightSpec, path: str = SERIES, tol: float = 1e-14,
                    max_terms: int = 10_000, quad_tol: float = 1e-12) -> "KernelEvaluator":
        require_valid(weight)
        if path == SERIES:
            series = _series_for_weight(weight, max_terms, quad_tol)
            return cls(SERIES, weight, None, tol, max_terms, series)
        if path == CLOSED:
            if not (isinstance(weight, MittagLefflerWeight) and weight.closed_form):
                raise ValidationError("the closed-form path needs a Mittag-Leffler weight on the plane")
            params = ml_params(weight)
            return cls(CLOSED, weight, None, tol, max_terms, ml_series(params, max_terms),
                       _ml_prefactor(weight), weight.alpha ** (1.0 / weight.m))
        raise ValidationError(f"unknown kernel path {path!r}")

    @classmethod
    def from_moments(cls, seq: mom.MomentSequence, tol: float = 1e-14) -> "KernelEvaluator":
        lv = seq.log_values
        series = PowerSeries(lambda k: -lv[k], length=len(lv))
        return cls(SERIES, seq.weight, seq, tol, len(lv), series)

    @classmethod
    def limit(cls) -> "KernelEvaluator":
        return cls(LIMIT)

    # -- scalar evaluation ---------------------------------------------------

    @property
    def domain_radius(self) -> float | None:
        if self.path == LIMIT:
            return 1.0
        d = self.weight.domain
        return None if d.is_plane else d.radius

    def _check_point(self, z: complex):
        R = self.domain_radius
        if R is not None and not abs(z) < R:
            raise DomainError(f"|{z}| outside the disk of radius {R}")

    def profile(self, s: complex, tol: float | None = None, rel_tol: float = 0.0) -> SeriesValue:
        """Evaluate the profile ``f(s)`` to within ``max(tol, rel_tol * |f(s)|)``."""
        tol = self.tol if tol is None else tol
        s = complex(s)
        if self.path == LIMIT:
            return SeriesValue(limit_profile(s), 0, 0.0, 0.0, 0)
        if self.path == CLOSED:
            res = self._series.evaluate(self._arg_scale * s, abs_tol=tol / self._scale,
                                        rel_tol=rel_tol, max_ratio=0.5)
            return SeriesValue(res.value * self._scale, res.terms, res.tail_bound * self._scale,
                               res.error * self._scale, res.digits)
        return self._series.evaluate(s, abs_tol=tol, rel_tol=rel_tol)

    def evaluate(self, z: complex, w: complex, tol: float | None = None) -> SeriesValue:
        self._check_point(z)
        self._check_point(w)
        return self.profile(complex(z) * complex(w).conjugate(), tol)

    def __call__(self, z: complex, w: complex) -> complex:
        return complex(self.evaluate(z, w).value)

    def profile_function(self, rel_tol: float = 1e-12, abs_tol: float = 1e-300):
        """``s -> f(s)`` with relative accuracy, for zero counting.

        Values beyond double range come back as ``mpmath.mpc``.
        """
        def f(s):
            return self.profile(s, tol=abs_tol, rel_tol=rel_tol).value
        return f

    # -- vectorized --------------------------------------------------------------

    def terms_needed(self, smax: float, rel_tol: float = 1e-16) -> int:
        if self.path == LIMIT:
            raise ValidationError("the limit kernel is evaluated in closed form")
        if self.path == CLOSED:
            return self._series.terms_needed(self._arg_scale * smax, rel_tol)
        return self._series.terms_needed(smax, rel_tol)

    def profile_array(self, s, n_terms: int) -> np.ndarray:
        """Double-precision profile on an array, summing ``n_terms`` terms."""
        s = np.asarray(s, dtype=complex)
        if self.path == LIMIT:
            return s / (math.pi * (1 - s) ** 2)
        if self.path == CLOSED:
            return self._scale * self._series.evaluate_array(self._arg_scale * s, n_terms)
        return self._series.evaluate_array(s, n_terms)


def ml_params(w: MittagLefflerWeight) -> MLFunctionParams:
    """Mittag-Leffler parameters of the kernel of ``w``: beta = 1/m, gamma = (2+n)/(2m)."""
    return MLFunctionParams(1.0 / w.m, (2 + w.n) / (2 * w.m))


def kernel_eval_series(ev: KernelEvaluator, z: complex, w: complex, tol: float | None = None) -> complex:
    if ev.path != SERIES:
        raise ValidationError("kernel_eval_series needs a series-path evaluator")
    return complex(ev.evaluate(z, w, tol).value)


def kernel_eval_closed(params: MittagLefflerWeight, z: complex, w: complex,
                       tol: float = 1e-14) -> complex:
    """``2m alpha^((2+n)/(2m)) E_{1/m,(2+n)/(2m)}(alpha^(1/m) z conj(w))``."""
    ev = KernelEvaluator.from_weight(params, CLOSED, tol)
    return complex(ev.evaluate(z, w, tol).value)


def limit_profile(s: complex) -> complex:
    """``s / (pi (1 - s)^2)``: the kernel of ``1/|z|^2`` on the unit disk."""
    return s / (math.pi * (1 - s) ** 2)


def limit_disk_kernel(z: complex, w: complex) -> complex:
    z, w = complex(z), complex(w)
    if not (abs(z) < 1 and abs(w) < 1):
        raise DomainError("the limit kernel lives on the unit bidisk")
    return limit_profile(z * w.conjugate())


def reproduce_check(ev: KernelEvaluator, weight: RadialWeightSpec, poly_coeffs, z: complex,
                    quad_tol: float = 1e-8) -> float:
    """``|<p, K(., z)>_W - p(z)|`` by polar tensor quadrature.

    ``poly_coeffs[j]`` multiplies ``zeta^j``. The angular rule is the
    trapezoid rule with ``4 (deg + K) + 8`` nodes, exact for every harmonic the
    truncated kernel and the polynomial produce. The radial rule is adaptive;
    on the plane it stops at the certified moment-tail radius.
    """
    coeffs = np.asarray(poly_coeffs, dtype=complex)
    deg = len(coeffs) - 1
    z = complex(z)
    if ev.moments is not None and deg > ev.moments.K:
        raise ValidationError("polynomial degree exceeds the moment table")
    if weight.domain.is_plane:
        if not isinstance(weight, MittagLefflerWeight):
            raise ValidationError("plane reproduce_check needs a Mittag-Leffler weight")
        r_end = max(mom.ml_tail_radius(weight, j, 1e-3 * quad_tol) for j in range(deg + 1))
    else:
        r_end = weight.domain.radius
        if not abs(z) < r_end:
            raise DomainError(f"{z} outside the disk of radius {r_end}")
    n_terms = ev.terms_needed(r_end * abs(z), 1e-17) if z != 0 else 1
    n_ang = 4 * (deg + n_terms) + 8
    unit = np.exp(2j * math.pi * np.arange(n_ang) / n_ang)
    zc = z.conjugate()

    def radial(rho):
        rho = np.asarray(rho, dtype=float)
        zeta = rho[:, None] * unit[None, :]
        p = np.polynomial.polynomial.polyval(zeta, coeffs)
        k = ev.profile_array(zeta * zc, n_terms) if z != 0 else np.full(zeta.shape, _k0(ev))
        ang = 2 * math.pi * np.mean(p * np.conj(k), axis=1)
        return ang * rho * weight.density(rho)

    singular = isinstance(weight, MittagLefflerWeight) and weight.n < -1
    value, _ = quadrature.integrate(radial, 0.0, r_end, tol=1e-2 * quad_tol,
                                    abs_tol=1e-2 * quad_tol,
                                    breakpoints=weight.breakpoints(), singular_left=singular)
    target = np.polynomial.polynomial.polyval(z, coeffs)
    return float(abs(value - target))


def _k0(ev: KernelEvaluator) -> complex:
    return complex(ev.profile(0.0).value)
