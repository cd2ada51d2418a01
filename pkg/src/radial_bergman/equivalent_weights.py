"""Truncations ``nu_q = min(q, 1/|z|^2)`` of a non-integrable weight on the unit disk.

Every ``nu_q`` is bounded above and below, so each one defines the same
space of square-integrable holomorphic functions as Lebesgue measure. As
q grows the weights increase pointwise to ``1/|z|^2``, whose kernel
``s / (pi (1 - s)^2)`` vanishes at the origin. The kernels converge locally
uniformly to it, and along the way the profile of ``K_q`` picks up a real
negative zero that drifts towards 0.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .kernel import KernelEvaluator, limit_profile
from .moments import fmt, truncated_disk_moment
from .weights import TruncatedDiskWeight

# the profile series converges on |s| < 1 only; past this its term count
# outgrows the evaluator's cap
MARCH_LIMIT = -0.99


@dataclass(frozen=True)
class HypothesisReport:
    passed: bool
    violations: tuple = ()  # (r, nu_q1(r), nu_q2(r), 1/r^2)

    def __bool__(self):
        return self.passed


def hypothesis_check(q1: float, q2: float, sample_radii) -> HypothesisReport:
    """Check ``nu_q1(r) <= nu_q2(r) <= 1/r^2`` at each sample radius."""
    w1, w2 = TruncatedDiskWeight(q1), TruncatedDiskWeight(q2)
    bad = []
    for r in sample_radii:
        r = float(r)
        a, b = float(w1.density(r)), float(w2.density(r))
        bound = math.inf if r == 0 else 1.0 / (r * r)
        if not (a <= b <= bound):
            bad.append((r, a, b, bound))
    return HypothesisReport(not bad, tuple(bad))


def polar_grid(radius: float, n: int) -> np.ndarray:
    """``n`` radii ``linspace(0, radius, n)`` times ``n`` angles ``2 pi j / n``."""
    radii = np.linspace(0.0, radius, n)
    angles = 2 * math.pi * np.arange(n) / n
    return (radii[:, None] * np.exp(1j * angles)[None, :]).ravel()


def _grid_products(radius: float, n: int) -> np.ndarray:
    # z conj(w) over the grid only takes values r_i r_j exp(2 pi i d / n)
    radii = np.linspace(0.0, radius, n)
    rr = np.unique(np.outer(radii, radii))
    angles = np.exp(2j * math.pi * np.arange(n) / n)
    return (rr[:, None] * angles[None, :]).ravel()


def ramadanov_distance(q: float, grid_radius: float = 0.5, grid_n: int = 16,
                       tol: float = 1e-14) -> float:
    """``max |K_q(z, w) - K_limit(z, w)|`` over pairs from a polar grid.

    Since both kernels depend on ``z conj(w)`` only, the maximum is taken over
    the distinct products, each evaluated with the certified series.
    """
    if not 0 < grid_radius < 1:
        raise ValidationError("grid_radius must lie in (0, 1)")
    if grid_n < 1:
        raise ValidationError("grid_n must be positive")
    ev = KernelEvaluator.from_weight(TruncatedDiskWeight(q), tol=tol)
    best = 0.0
    for s in _grid_products(grid_radius, grid_n):
        s = complex(s)
        d = abs(complex(ev.profile(s, tol).value) - limit_profile(s))
        best = max(best, d)
    return best


@dataclass(frozen=True)
class EmergentZero:
    q: float
    w: complex
    status: str  # "inside", "outside" (|z*| >= 1) or "none" (no sign change)
    s: float | None = None
    z: complex | None = None
    residual: float | None = None

    @property
    def inside(self) -> bool:
        return self.status == "inside"


def _bisect(f, a: float, b: float, fa: float, tol: float) -> float:
    # f(a) < 0 < f(b)
    for _ in range(200):
        m = 0.5 * (a + b)
        if b - a <= tol or m in (a, b):
            break
        fm = f(m)
        if fm == 0:
            return m
        if (fm < 0) == (fa < 0):
            a, fa = m, fm
        else:
            b = m
    return 0.5 * (a + b)


def emergent_zero(q: float, w: complex, tol: float = 1e-14) -> EmergentZero:
    """Zero of the profile of ``K_q`` nearest the origin, on the negative axis.

    The march starts at the first-order estimate ``-W_1 / W_0`` and walks left
    in steps of a quarter of it until the sign changes or ``s`` reaches
    ``MARCH_LIMIT``. The bracket is closed by bisection to ``tol``; the zero
    of ``K_q(., w)`` is ``z* = s* / conj(w)``.
    """
    w = complex(w)
    if w == 0:
        raise ValidationError("w must be nonzero")
    ev = KernelEvaluator.from_weight(TruncatedDiskWeight(q), tol=1e-16)

    def f(s):
        return complex(ev.profile(s, 1e-17).value).real

    guess = -truncated_disk_moment(q, 1) / truncated_disk_moment(q, 0)
    step = 0.25 * abs(guess)
    hi = 0.0
    s = max(guess, MARCH_LIMIT)
    while True:
        fs = f(s)
        if fs < 0:
            lo, f_lo = s, fs
            break
        hi = s
        if s <= MARCH_LIMIT:
            return EmergentZero(q, w, "none")
        s = max(s - step, MARCH_LIMIT)
    star = _bisect(f, lo, hi, f_lo, tol)
    z = star / w.conjugate()
    status = "inside" if abs(z) < 1 else "outside"
    return EmergentZero(q, w, status, star, z, abs(f(star)))


@dataclass
class ConvergenceReport:
    q_values: list
    sup_distances: list
    origin_values: list
    emergent_zeros: list  # EmergentZero per q
    grid_radius: float = 0.5
    grid_n: int = 16
    w: complex = 0.5
    notes: list = field(default_factory=list)

    @property
    def first_inside(self) -> float | None:
        """Smallest ladder q whose emergent zero lies in the disk."""
        for q, e in zip(self.q_values, self.emergent_zeros):
            if e.inside:
                return q
        return None

    def to_json_obj(self) -> dict:
        rows = []
        for q, d, o, e in zip(self.q_values, self.sup_distances, self.origin_values,
                              self.emergent_zeros):
            rows.append({
                "q": q, "sup_distance": d, "origin_value": o, "zero_status": e.status,
                "zero": None if e.z is None else [e.z.real, e.z.imag],
                "s_zero": e.s, "residual": e.residual,
            })
        return {"w": [self.w.real, self.w.imag], "grid_radius": self.grid_radius,
                "grid_n": self.grid_n, "ladder": rows, "first_inside": self.first_inside}

    def to_csv(self) -> str:
        buf = io.StringIO()
        out = csv.writer(buf, lineterminator="\n")
        out.writerow(["q", "sup_distance", "origin_value", "re_zero", "im_zero"])
        for q, d, o, e in zip(self.q_values, self.sup_distances, self.origin_values,
                              self.emergent_zeros):
            re, im = ("", "") if e.z is None else (fmt(e.z.real), fmt(e.z.imag))
            out.writerow([fmt(q), fmt(d), fmt(o), re, im])
        return buf.getvalue()


def convergence_report(q_ladder, grid_radius: float = 0.5, grid_n: int = 16,
                       w: complex = 0.5, tol: float = 1e-14, progress=None) -> ConvergenceReport:
    """Distances, origin values and emergent zeros along a ladder of q."""
    qs = [float(q) for q in q_ladder]
    if any(b <= a for a, b in zip(qs, qs[1:])):
        raise ValidationError("q ladder must be strictly increasing")
    w = complex(w)
    dists, origins, zeros = [], [], []
    for q in qs:
        if progress:
            progress(f"q={q:g}")
        ev = KernelEvaluator.from_weight(TruncatedDiskWeight(q), tol=tol)
        dists.append(ramadanov_distance(q, grid_radius, grid_n, tol))
        origins.append(complex(ev.evaluate(0.0, w).value).real)
        zeros.append(emergent_zero(q, w, tol))
    return ConvergenceReport(qs, dists, origins, zeros, grid_radius, grid_n, w)
