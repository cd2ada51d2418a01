"""Zero counting and location for entire (or disk-holomorphic) functions.

Counts come from the argument principle, computed by tracking the phase of
``f`` along the contour. Sampling is adaptive and uses the local rate of
change of ``log f`` at every node, so a step is unwrapped against a first
order prediction rather than assumed to be below pi.
Localization quadrisects the bounding box of the disk using rectangle
windings; cells holding one zero are finished by Newton's method.

``f`` may return ``complex`` or ``mpmath.mpc`` (for values beyond double range).
"""

from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AccuracyError, BoundaryZeroError
from .series import log_abs, phase

HALF_PI = 0.5 * math.pi


def _wrap(d: float) -> float:
    return (d + math.pi) % (2 * math.pi) - math.pi


class _Memo:
    """Caches ``(log|f|, arg f, f)`` by sample point."""

    def __init__(self, f):
        self.f = f
        self.cache: dict[complex, tuple[float, float, object]] = {}
        self.calls = 0

    def __call__(self, s: complex):
        hit = self.cache.get(s)
        if hit is None:
            v = self.f(s)
            self.calls += 1
            la = log_abs(v)
            if la == -math.inf:
                raise BoundaryZeroError(f"exact zero on the contour at {s}", estimate=s)
            hit = (la, phase(v), v)
            self.cache[s] = hit
        return hit


def _log_rate(F: _Memo, s: complex, direction: complex, v) -> complex:
    """``d log f / dt`` along ``s + t * direction`` by a forward difference."""
    h = 1e-7 * max(1.0, abs(s)) / abs(direction)
    w = F(s + h * direction)
    return complex(w[0] - v[0], _wrap(w[1] - v[1])) / h


def _log_step(va, vb, predicted: complex) -> complex:
    """``log f(b) - log f(a)`` on the branch nearest ``predicted``."""
    im = predicted.imag + _wrap(vb[1] - va[1] - predicted.imag)
    return complex(vb[0] - va[0], im)


def _track_phase(F: _Memo, path, n0: int, min_dt: float) -> float:
    """Total change of ``arg f`` along ``path(t)``, ``t`` in [0, 1].

    At every node the rate ``r = d log f / dt`` is estimated, so ``log f`` is
    known to first order at both ends of an interval. The interval is
    accepted when the cubic Hermite prediction of ``log f`` at its midpoint
    matches the sampled value to within pi/4 (the phase modulo 2 pi) and
    the rate itself changes little across it. The phase step is then
    unwrapped onto the branch of the trapezoid prediction. Steps of many
    radians are fine wherever ``log f`` is smooth; near a zero the rate varies
    quickly and the interval is halved, down to ``min_dt``.
    """
    nodes: dict[float, tuple] = {}

    def node(t):
        hit = nodes.get(t)
        if hit is None:
            s = path(t)
            v = F(s)
            dt = 1e-6
            t2 = t - dt if t + dt > 1.0 else t + dt
            direction = (path(t2) - s) / (t2 - t)
            hit = nodes[t] = (v, _log_rate(F, s, direction, v))
        return hit

    def interval(ta, tb):
        (va, ra), (vb, rb) = node(ta), node(tb)
        w = tb - ta
        tm = 0.5 * (ta + tb)
        vm = F(path(tm))
        if abs(ra - rb) * w < HALF_PI:
            step = _log_step(va, vb, 0.5 * w * (ra + rb))
            # Hermite midpoint value relative to a
            mid = 0.5 * step + w * (ra - rb) / 8
            got = _log_step(va, vm, mid)
            if abs(got - mid) < 0.25 * math.pi:
                return step.imag
        if w < min_dt:
            raise BoundaryZeroError("contour passes too close to a zero", estimate=path(tm))
        return interval(ta, tm) + interval(tm, tb)

    ts = [float(t) for t in np.linspace(0.0, 1.0, n0 + 1)]
    return math.fsum(interval(ta, tb) for ta, tb in zip(ts, ts[1:]))


def _winding_from_total(total: float) -> int:
    w = total / (2 * math.pi)
    n = round(w)
    if abs(w - n) > 1e-3:
        raise AccuracyError("phase change is not a multiple of 2 pi", estimate=w)
    return int(n)


def _circle_winding(F: _Memo, center: complex, R: float, tol: float, n0: int) -> int:
    def path(t):
        if t == 1.0:
            t = 0.0  # close the loop on the identical point
        return center + R * cmath.exp(2j * math.pi * t)

    return _winding_from_total(_track_phase(F, path, n0, min_dt=max(tol, 1e-13)))


def winding_count(f, center: complex = 0.0, R: float = 1.0, tol: float = 1e-8,
                  n0: int = 64, max_retries: int = 5) -> int:
    """Number of zeros of ``f`` in ``|s - center| < R`` (argument principle).

    If a zero sits on the circle (to within ``tol`` relative arc length) the
    radius is perturbed by 1%, alternately outward and inward, up to
    ``max_retries`` times before :class:`BoundaryZeroError` is raised.
    """
    return _winding_with_retry(_as_memo(f), complex(center), R, tol, n0, max_retries)[0]


def _as_memo(f) -> _Memo:
    return f if isinstance(f, _Memo) else _Memo(f)


def _winding_with_retry(F, center, R, tol, n0, max_retries):
    radius = R
    last = None
    for attempt in range(max_retries + 1):
        try:
            return _circle_winding(F, center, radius, tol, n0), radius
        except BoundaryZeroError as exc:
            last = exc
            step = 0.01 * ((attempt // 2) + 1)
            radius = R * (1 + step if attempt % 2 == 0 else 1 - step)
    raise BoundaryZeroError(f"zero persistently near the circle of radius {R}",
                            estimate=last.estimate if last else None, radius=R)


# -- rectangles --------------------------------------------------------------


class _Edges:
    """Per-edge phase changes, sampled in a canonical direction and cached."""

    def __init__(self, F: _Memo, tol: float, n0: int):
        self.F = F
        self.tol = tol
        self.n0 = n0
        self.cache: dict[tuple[complex, complex], float] = {}

    def change(self, a: complex, b: complex) -> float:
        key, sign = ((a, b), 1.0) if (a.real, a.imag) <= (b.real, b.imag) else ((b, a), -1.0)
        if key not in self.cache:
            p, q = key
            d = q - p

            def path(t):
                return q if t == 1.0 else p + t * d

            self.cache[key] = _track_phase(self.F, path, self.n0, self.tol)
        return sign * self.cache[key]

    def rect_count(self, x0, x1, y0, y1) -> int:
        c = [complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)]
        total = sum(self.change(c[i], c[(i + 1) % 4]) for i in range(4))
        return _winding_from_total(total)


@dataclass
class ZeroReport:
    radius: float
    count: int
    zeros: list = field(default_factory=list)
    residuals: list = field(default_factory=list)
    order_estimate: float | None = None
    failed_cells: list = field(default_factory=list)
    evaluations: int = 0

    @property
    def complete(self) -> bool:
        return len(self.zeros) == self.count and not self.failed_cells

    def to_json_obj(self) -> dict:
        return {
            "radius": self.radius,
            "count": self.count,
            "zeros": [[z.real, z.imag] for z in self.zeros],
            "residuals": list(self.residuals),
            "order_estimate": self.order_estimate,
            "complete": self.complete,
            "failed_cells": [list(c) for c in self.failed_cells],
        }

    def to_csv(self) -> str:
        from .moments import fmt

        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re_zero", "im_zero", "residual"])
        for z, r in zip(self.zeros, self.residuals):
            w.writerow([fmt(z.real), fmt(z.imag), fmt(r)])
        return buf.getvalue()


def newton(f, s0: complex, tol: float = 1e-8, max_iter: int = 60, region=None):
    """Newton iteration with a central-difference derivative.

    ``region = (x0, x1, y0, y1)`` abandons iterates that leave the box.
    Returns the final iterate, or ``None`` when it fails to converge.
    """
    s = complex(s0)
    try:
        for _ in range(max_iter):
            h = max(1e-7, 1e-7 * abs(s))
            fv = f(s)
            df = (f(s + h) - f(s - h)) / (2 * h)
            if df == 0:
                return None
            step = complex(fv / df)
            s -= step
            if not (math.isfinite(s.real) and math.isfinite(s.imag)):
                return None
            if region is not None and not (region[0] <= s.real <= region[1]
                                           and region[2] <= s.imag <= region[3]):
                return None
            if abs(step) <= 1e-3 * tol * max(1.0, abs(s)):
                return s
    except AccuracyError:
        return None
    return None


_SPLITS = (0.5, 0.5 + 1 / 37, 0.5 - 1 / 29, 0.5 + 1 / 13, 0.5 - 1 / 11)


def find_zeros_in_disk(f, R: float, tol: float = 1e-8, center: complex = 0.0,
                       n0: int = 64) -> ZeroReport:
    """All zeros of ``f`` in ``|s - center| < R``, refined to ``tol``.

    The outer circle count is the authority; zeros found in the bounding box
    but outside the (possibly perturbed) circle are dropped, and any shortfall
    is reported through ``failed_cells``.
    """
    F = _as_memo(f)
    center = complex(center)
    count, radius = _winding_with_retry(F, center, R, tol, n0, 5)
    report = ZeroReport(radius=radius, count=count)
    if count == 0:
        report.evaluations = F.calls
        return report
    edges = _Edges(F, min(tol, 1e-10), 2)
    found: list[complex] = []

    def newton_in(x0, x1, y0, y1, starts):
        # cell edges keep clear of zeros, so only roundoff needs padding
        size = max(x1 - x0, y1 - y0)
        pad = 1e-9 * size
        region = (x0 - size, x1 + size, y0 - size, y1 + size)
        for s0 in starts:
            s = newton(F.f, s0, tol, region=region)
            if s is not None and x0 - pad <= s.real <= x1 + pad and y0 - pad <= s.imag <= y1 + pad:
                return s
        return None

    def solve_one(x0, x1, y0, y1):
        dx, dy = x1 - x0, y1 - y0
        starts = [complex(x0 + fx * dx, y0 + fy * dy)
                  for fx, fy in ((0.5, 0.5), (0.25, 0.25), (0.75, 0.25), (0.25, 0.75), (0.75, 0.75))]
        s = newton_in(x0, x1, y0, y1, starts)
        if s is not None:
            return s
        # fallback: halve along the long side, keeping the half with the
        # zero, and retry Newton from each smaller cell
        coarse = _Edges(F, min(tol, 1e-10), 32)
        try:
            while max(x1 - x0, y1 - y0) > tol:
                if x1 - x0 >= y1 - y0:
                    xm = 0.5 * (x0 + x1)
                    if coarse.rect_count(x0, xm, y0, y1) >= 1:
                        x1 = xm
                    else:
                        x0 = xm
                else:
                    ym = 0.5 * (y0 + y1)
                    if coarse.rect_count(x0, x1, y0, ym) >= 1:
                        y1 = ym
                    else:
                        y0 = ym
                s = newton_in(x0, x1, y0, y1, [complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))])
                if s is not None:
                    return s
        except AccuracyError:
            report.failed_cells.append((x0, x1, y0, y1))
            return None
        return complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))

    def process(x0, x1, y0, y1, n):
        if n == 0:
            return
        size = max(x1 - x0, y1 - y0)
        if n == 1 and size > 1e4 * tol:
            # one cheap attempt; if Newton wanders off, subdivide further
            s = newton_in(x0, x1, y0, y1, [complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))])
            if s is not None:
                found.append(s)
                return
        elif n == 1 or size < 10 * tol:
            s = solve_one(x0, x1, y0, y1)
            if s is not None:
                found.extend([s] * n)
            return
        for frac in _SPLITS:
            xm = x0 + frac * (x1 - x0)
            ym = y0 + frac * (y1 - y0)
            cells = [(x0, xm, y0, ym), (xm, x1, y0, ym), (x0, xm, ym, y1), (xm, x1, ym, y1)]
            try:
                counts = [edges.rect_count(*c) for c in cells]
            except AccuracyError:
                continue
            if sum(counts) == n:
                for c, k in zip(cells, counts):
                    process(*c, k)
                return
        report.failed_cells.append((x0, x1, y0, y1))

    for grow in (1.0123, 1.0191, 1.0311):
        half = radius * grow
        box = (center.real - half, center.real + half, center.imag - half, center.imag + half)
        try:
            n_box = edges.rect_count(*box)
        except AccuracyError:
            continue
        process(*box, n_box)
        break
    else:
        report.failed_cells.append(box)

    report.zeros = _dedupe(found, center, radius, 10 * tol)
    report.residuals = [float(abs(F.f(s))) for s in report.zeros]
    report.evaluations = F.calls
    return report


def _dedupe(found, center, radius, eps):
    """Drop points outside the disk and repeats of a root reached from two cells.

    ``found`` lists a multiple root once per multiplicity, consecutively; only
    repeats from a *different* cell are collapsed.
    """
    out: list[complex] = []
    prev = None
    for s in found:
        if abs(s - center) >= radius:
            prev = s
            continue
        same_cluster = prev is not None and s == prev
        if same_cluster or not any(abs(t - s) < eps for t in out):
            out.append(s)
        prev = s
    return sorted(out, key=lambda v: (abs(v - center), cmath.phase(v - center)))


@dataclass
class GrowthScan:
    radii: list
    counts: list
    skipped: list
    order_estimate: float | None

    def to_json_obj(self) -> dict:
        return {"scan": [[r, c] for r, c in zip(self.radii, self.counts)],
                "skipped": list(self.skipped), "order_estimate": self.order_estimate}


def order_estimate(radii, counts) -> float | None:
    """Least-squares slope of log(count) against log(R) over the last decade with count >= 2."""
    pts = [(r, c) for r, c in zip(radii, counts) if c >= 2]
    if not pts:
        return None
    rmax = pts[-1][0]
    pts = [(r, c) for r, c in pts if r >= rmax / 10]
    if len(pts) < 2:
        return None
    x = np.log([p[0] for p in pts])
    y = np.log([p[1] for p in pts])
    return float(np.polyfit(x, y, 1)[0])


def zero_growth_scan(f, radii, tol: float = 1e-8, center: complex = 0.0) -> GrowthScan:
    radii = [float(r) for r in radii]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radii must be strictly increasing")
    F = _as_memo(f)
    got_r, got_c, skipped = [], [], []
    for R in radii:
        try:
            got_c.append(_winding_with_retry(F, complex(center), R, tol, 64, 5)[0])
            got_r.append(R)
        except BoundaryZeroError:
            skipped.append(R)
    return GrowthScan(got_r, got_c, skipped, order_estimate(got_r, got_c))


def kernel_zero_function(ev, w: complex, rel_tol: float = 1e-12):
    """``z -> K(z, w)`` as a function for the routines above."""
    wc = complex(w).conjugate()
    prof = ev.profile_function(rel_tol=rel_tol)
    return lambda z: prof(complex(z) * wc)
