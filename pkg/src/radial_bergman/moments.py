"""Moment sequences ``W_k = 2 pi * int r^(2k+1) W(r) dr`` of radial weights.

Closed forms exist for the Mittag-Leffler family on the plane and for the
truncated disk weights; everything else (and the independent check of the
closed forms) goes through adaptive quadrature.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import mpmath
import numpy as np

from . import quadrature
from .errors import AccuracyError, ValidationError
from .weights import (MittagLefflerWeight, RadialWeightSpec, TruncatedDiskWeight,
                      from_dict, require_valid, to_dict)

CLOSED_FORM = "closed_form"
QUADRATURE = "quadrature"


# -- closed forms ------------------------------------------------------------

def _ml_exponent(w: MittagLefflerWeight, k: int) -> float:
    return (2 * k + 2 + w.n) / (2 * w.m)


def ml_log_moment(w: MittagLefflerWeight, k: int) -> float:
    """``log W_k`` for the Mittag-Leffler weight on the plane.

    Substituting ``t = alpha r^(2m)`` gives
    ``W_k = alpha^(-p) Gamma(p) / (2m)`` with ``p = (2k + 2 + n) / (2m)``.
    """
    p = _ml_exponent(w, k)
    return -math.log(2 * w.m) - p * math.log(w.alpha) + math.lgamma(p)


def ml_moment_closed_form(w: MittagLefflerWeight, k: int) -> float:
    """``W_k`` as a float; ``math.inf`` when it exceeds double range.

    Use :func:`ml_log_moment` (or ``MomentSequence.log_values``) for moments
    past the overflow threshold.
    """
    require_valid(w)
    p = _ml_exponent(w, k)
    if p < 170.0:
        # direct gamma keeps integer cases exact (W_k = (2k)! for the cosh weight)
        value = math.gamma(p) / (2 * w.m * w.alpha ** p)
        if 0.0 < value < math.inf:
            return value
    lw = ml_log_moment(w, k)
    return math.exp(lw) if lw < 709.0 else math.inf


def ml_moment_mp(w: MittagLefflerWeight, k: int):
    """``W_k`` at the current mpmath working precision."""
    two_m = 2 * mpmath.mpf(w.m)
    p = (2 * k + 2 + mpmath.mpf(w.n)) / two_m
    return mpmath.gamma(p) / (two_m * mpmath.power(mpmath.mpf(w.alpha), p))


def truncated_disk_moment(q: float, k: int) -> float:
    """Moments of ``min(q, 1/r^2)`` on the unit disk.

    ``W_0 = pi (1 + ln q)`` and, for k >= 1,
    ``W_k = 2 pi [q^-k / (2k + 2) + (1 - q^-k) / (2k)]``.
    """
    if not q >= 1:
        raise ValidationError("truncation level q must be >= 1")
    if k == 0:
        return math.pi * (1.0 + math.log(q))
    lq = math.log(q)
    inv = math.exp(-k * lq)
    return 2 * math.pi * (inv / (2 * k + 2) - math.expm1(-k * lq) / (2 * k))


def truncated_disk_moment_mp(q: float, k: int):
    q = mpmath.mpf(q)
    if k == 0:
        return mpmath.pi * (1 + mpmath.log(q))
    inv = mpmath.power(q, -k)
    return 2 * mpmath.pi * (inv / (2 * k + 2) - mpmath.expm1(-k * mpmath.log(q)) / (2 * k))


# -- quadrature ----------------------------------------------------------------

def ml_tail_log_bound(w: MittagLefflerWeight, k: int, t_cut: float) -> float:
    """Log of an upper bound on ``int_{T}^inf t^(p-1) e^(-alpha t) dt``.

    Uses ``e^(-alpha t) <= e^(-alpha T / 2) e^(-alpha t / 2)`` on ``t >= T``,
    whose remaining integral is a complete gamma integral. In the radial
    variable this is the tail past ``R = (T / alpha)^(1/(2m))``, scaled by
    ``1/(2m)``.
    """
    p = _ml_exponent(w, k)
    return -0.5 * w.alpha * t_cut + math.lgamma(p) + p * math.log(2.0 / w.alpha) - math.log(2 * w.m)


def ml_tail_radius(w: MittagLefflerWeight, k: int, rel_tol: float) -> float:
    """Smallest doubling radius whose certified tail is below ``rel_tol * W_k``."""
    lw = ml_log_moment(w, k)
    p = _ml_exponent(w, k)
    t = max(1.0, 2.0 * max(p - 1.0, 0.0) / w.alpha)
    while ml_tail_log_bound(w, k, t) > math.log(rel_tol) + lw:
        t *= 1.25
    return (t / w.alpha) ** (1.0 / (2 * w.m))


def _quad_ml_plane(w: MittagLefflerWeight, k: int, tol: float) -> float:
    """``log W_k`` from ``(1/2m) int_0^inf t^(p-1) e^(-alpha t) dt`` by quadrature.

    The integrand is rescaled by its peak value so large k does not overflow,
    and truncated where the analytic tail bound drops below ``tol/10`` of the
    partial integral.
    """
    p = _ml_exponent(w, k)
    a = w.alpha
    t_peak = max(p - 1.0, 0.0) / a
    log_peak = (p - 1.0) * math.log(t_peak) - a * t_peak if t_peak > 0 else 0.0

    def g(t):
        with np.errstate(divide="ignore"):
            return np.exp((p - 1.0) * np.log(t) - a * t - log_peak)

    width = math.sqrt(max(p, 1.0)) / a
    t_cut = t_peak + 10 * width + 1.0 / a
    breaks = [x for x in (t_peak - 3 * width, t_peak, t_peak + 3 * width) if x > 0]
    while True:
        value, _ = quadrature.integrate(g, 0.0, t_cut, tol=0.1 * tol, breakpoints=breaks,
                                        singular_left=p < 2)
        log_partial = math.log(value) + log_peak
        if ml_tail_log_bound(w, k, t_cut) + math.log(2 * w.m) < math.log(0.1 * tol) + log_partial:
            break
        t_cut *= 1.5
    return log_partial - math.log(2 * w.m)


def _quad_radial(weight: RadialWeightSpec, k: int, tol: float) -> float:
    """``log W_k`` for a weight on a disk, integrating in r directly."""
    radius = weight.domain.radius
    # scale r^(2k+1) by radius^(2k+1) to keep large k in range
    log_scale = (2 * k + 1) * math.log(radius)

    def g(r):
        with np.errstate(divide="ignore", over="ignore"):
            return 2 * math.pi * np.exp((2 * k + 1) * np.log(r) - log_scale) * weight.density(r)

    singular = isinstance(weight, MittagLefflerWeight) and weight.n < 0
    value, _ = quadrature.integrate(g, 0.0, radius, tol=0.1 * tol,
                                    breakpoints=weight.breakpoints(), singular_left=singular)
    return math.log(value) + log_scale


def quadrature_log_moment(weight: RadialWeightSpec, k: int, tol: float = 1e-10) -> float:
    require_valid(weight)
    if weight.domain.is_plane:
        if not isinstance(weight, MittagLefflerWeight):
            raise ValidationError("plane quadrature needs a decaying (Mittag-Leffler) weight")
        return _quad_ml_plane(weight, k, tol)
    if isinstance(weight, MittagLefflerWeight):
        # the t-substitution still applies on a disk, with a finite upper end
        return _quad_ml_disk(weight, k, tol)
    return _quad_radial(weight, k, tol)


def _quad_ml_disk(w: MittagLefflerWeight, k: int, tol: float) -> float:
    p = _ml_exponent(w, k)
    a = w.alpha
    t_end = a * w.domain.radius ** (2 * w.m)
    log_end = (p - 1.0) * math.log(t_end) - t_end

    def g(t):
        with np.errstate(divide="ignore"):
            return np.exp((p - 1.0) * np.log(t) - t - log_end)

    # t here is alpha r^(2m), so W_k = alpha^-p / (2m) * int_0^t_end t^(p-1) e^-t dt
    value, _ = quadrature.integrate(g, 0.0, t_end, tol=0.1 * tol, singular_left=p < 2)
    return math.log(value) + log_end - p * math.log(a) - math.log(2 * w.m)


def quadrature_moment(weight: RadialWeightSpec, k: int, tol: float = 1e-10) -> float:
    """``W_k`` by adaptive quadrature, the independent route to the closed forms."""
    lw = quadrature_log_moment(weight, k, tol)
    return math.exp(lw) if lw < 709.0 else math.inf


# -- tables ------------------------------------------------------------------

@dataclass(frozen=True)
class MomentSequence:
    log_values: tuple[float, ...]
    provenance: str
    weight: RadialWeightSpec
    direct: tuple[float, ...] | None = None  # values not routed through exp(log)

    @property
    def K(self) -> int:
        return len(self.log_values) - 1

    @property
    def values(self) -> tuple[float, ...]:
        if self.direct is not None:
            return self.direct
        return tuple(math.exp(v) if v < 709.0 else math.inf for v in self.log_values)

    @property
    def overflowed(self) -> bool:
        return any(v >= 709.0 for v in self.log_values)

    def __len__(self):
        return len(self.log_values)

    def __getitem__(self, k):
        return self.values[k]

    def log_convexity_defects(self, slack: float = 1e-12) -> list[int]:
        """Indices k where ``2 log W_k > log W_(k-1) + log W_(k+1)`` beyond ``slack``."""
        lv = self.log_values
        bad = []
        for k in range(1, len(lv) - 1):
            if 2 * lv[k] - lv[k - 1] - lv[k + 1] > slack * max(1.0, abs(lv[k])):
                bad.append(k)
        return bad

    def is_log_convex(self, slack: float = 1e-12) -> bool:
        return not self.log_convexity_defects(slack)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "W_k", "log_W_k", "provenance"])
        for k, (lv, value) in enumerate(zip(self.log_values, self.values)):
            writer.writerow([k, fmt(value), fmt(lv), self.provenance])
        return buf.getvalue()

    def to_json_obj(self) -> dict:
        return {
            "weight": to_dict(self.weight),
            "provenance": self.provenance,
            "moments": [
                {"k": k, "W_k": v if math.isfinite(v) else None, "log_W_k": lv}
                for k, (lv, v) in enumerate(zip(self.log_values, self.values))
            ],
        }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "MomentSequence":
        rows = sorted(obj["moments"], key=lambda r: r["k"])
        direct = tuple(math.inf if r["W_k"] is None else float(r["W_k"]) for r in rows)
        return cls(tuple(float(r["log_W_k"]) for r in rows), obj["provenance"],
                   from_dict(obj["weight"]), direct)

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def fmt(x: float) -> str:
    """17 significant digits, locale independent."""
    if isinstance(x, int):
        return str(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x + 0.0, ".17g")  # + 0.0 turns -0.0 into 0


def log_moment(weight: RadialWeightSpec, k: int, tol: float = 1e-10) -> tuple[float, str]:
    """``(log W_k, provenance)`` using the closed form when the family has one."""
    if isinstance(weight, MittagLefflerWeight) and weight.closed_form:
        return ml_log_moment(weight, k), CLOSED_FORM
    if isinstance(weight, TruncatedDiskWeight):
        return math.log(truncated_disk_moment(weight.q, k)), CLOSED_FORM
    return quadrature_log_moment(weight, k, tol), QUADRATURE


def moment_table(weight: RadialWeightSpec, K: int, tol: float = 1e-10) -> MomentSequence:
    if K < 0:
        raise ValidationError("K must be >= 0")
    require_valid(weight)
    logs, provenance = [], None
    for k in range(K + 1):
        lv, provenance = log_moment(weight, k, tol)
        if not math.isfinite(lv):
            raise AccuracyError(f"moment W_{k} is not finite", estimate=lv)
        logs.append(lv)
    direct = None
    if isinstance(weight, MittagLefflerWeight) and weight.closed_form:
        direct = tuple(ml_moment_closed_form(weight, k) for k in range(K + 1))
    elif isinstance(weight, TruncatedDiskWeight):
        direct = tuple(truncated_disk_moment(weight.q, k) for k in range(K + 1))
    return MomentSequence(tuple(logs), provenance, weight, direct)
