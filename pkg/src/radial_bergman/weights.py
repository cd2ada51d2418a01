"""Radial weight families, their domains, and admissibility checks.

Three families are supported:

* :class:`MittagLefflerWeight` -- ``|z|^n exp(-alpha |z|^(2m)) / (2 pi)`` on the
  plane; its kernel is a Mittag-Leffler function of ``z * conj(w)``.
* :class:`TruncatedDiskWeight` -- ``min(q, 1/|z|^2)`` on the unit disk, the
  bounded approximants of the non-integrable weight ``1/|z|^2``.
* :class:`TabulatedWeight` -- a sampled radial profile, interpolated linearly
  in log-density.

Weights are immutable and serialize to flat JSON objects (see :func:`to_dict`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import DomainError, ValidationError

INTEGER_TOL = 1e-12


@dataclass(frozen=True)
class DomainSpec:
    kind: str  # "disk" or "plane"
    radius: float | None = None

    def __post_init__(self):
        if self.kind not in ("disk", "plane"):
            raise ValidationError(f"unknown domain kind {self.kind!r}")
        if self.kind == "disk":
            if self.radius is None or not (self.radius > 0) or not math.isfinite(self.radius):
                raise ValidationError("disk domain needs a finite positive radius")
            object.__setattr__(self, "radius", float(self.radius))
        elif self.radius is not None:
            raise ValidationError("plane domain takes no radius")

    @property
    def is_plane(self) -> bool:
        return self.kind == "plane"

    def contains_radius(self, r: float) -> bool:
        return r >= 0 and (self.is_plane or r < self.radius)

    def to_dict(self) -> dict:
        if self.is_plane:
            return {"kind": "plane"}
        return {"kind": "disk", "radius": self.radius}

    @classmethod
    def from_dict(cls, d: dict) -> "DomainSpec":
        extra = set(d) - {"kind", "radius"}
        if extra:
            raise ValidationError(f"unknown domain fields {sorted(extra)}")
        if "kind" not in d:
            raise ValidationError("domain needs a 'kind'")
        radius = d.get("radius")
        return cls(str(d["kind"]), None if radius is None else float(radius))


PLANE = DomainSpec("plane")
UNIT_DISK = DomainSpec("disk", 1.0)


@dataclass(frozen=True)
class MittagLefflerWeight:
    n: float
    alpha: float
    m: float
    domain: DomainSpec = PLANE

    def __post_init__(self):
        for name in ("n", "alpha", "m"):
            object.__setattr__(self, name, float(getattr(self, name)))

    family = "mittag_leffler"

    @property
    def integer_m(self) -> bool:
        return abs(self.m - round(self.m)) <= INTEGER_TOL

    @property
    def closed_form(self) -> bool:
        # the Gamma-function moments assume integration over the whole plane
        return self.domain.is_plane

    def density(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = np.power(r, self.n) * np.exp(-self.alpha * np.power(r, 2 * self.m)) / (2 * math.pi)
        return out

    def breakpoints(self) -> tuple[float, ...]:
        return ()


@dataclass(frozen=True)
class TruncatedDiskWeight:
    """``min(q, 1/r^2)``: the unit-disk weight ``1/|z|^2`` capped at level q."""

    q: float
    domain: DomainSpec = UNIT_DISK

    def __post_init__(self):
        object.__setattr__(self, "q", float(self.q))

    family = "truncated_disk"
    closed_form = True

    def density(self, r):
        r = np.asarray(r, dtype=float)
        with np.errstate(divide="ignore"):
            return np.minimum(self.q, 1.0 / (r * r))

    def breakpoints(self) -> tuple[float, ...]:
        if self.q > 1:
            return (1.0 / math.sqrt(self.q),)
        return ()


@dataclass(frozen=True)
class TabulatedWeight:
    samples: tuple[tuple[float, float], ...]
    domain: DomainSpec | None = None

    def __post_init__(self):
        samples = tuple((float(r), float(w)) for r, w in self.samples)
        object.__setattr__(self, "samples", samples)
        if self.domain is None and samples:
            object.__setattr__(self, "domain", DomainSpec("disk", samples[-1][0]))

    family = "tabulated"
    closed_form = False

    def density(self, r):
        r = np.asarray(r, dtype=float)
        radii = np.array([s[0] for s in self.samples])
        logw = np.log([s[1] for s in self.samples])
        # constant extension below the first sample
        return np.exp(np.interp(r, radii, logw))

    def breakpoints(self) -> tuple[float, ...]:
        return tuple(r for r, _ in self.samples)


RadialWeightSpec = Union[MittagLefflerWeight, TruncatedDiskWeight, TabulatedWeight]


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    c: float | None = None
    integer_m: bool = False
    reasons: tuple[str, ...] = field(default_factory=tuple)

    def __bool__(self):
        return self.valid


def validate(spec: RadialWeightSpec) -> ValidationReport:
    """Check admissibility of a weight.

    For the Mittag-Leffler family this is the local integrability of
    ``W**(-c)`` with ``c = 1/n`` for ``n > 0`` and ``c = 1`` otherwise, plus
    finiteness of the zeroth moment (``n > -2``).
    """
    reasons = []
    if isinstance(spec, MittagLefflerWeight):
        if not spec.n > -2:
            reasons.append("n <= -2: the zeroth moment diverges at the origin")
        if not spec.alpha > 0:
            reasons.append("alpha must be positive")
        if not spec.m > 0:
            reasons.append("m must be positive")
        c = 1.0 / spec.n if spec.n > 0 else 1.0
        return ValidationReport(not reasons, c if not reasons else None, spec.integer_m, tuple(reasons))
    if isinstance(spec, TruncatedDiskWeight):
        if not spec.q >= 1:
            reasons.append("truncation level q must be >= 1")
        if spec.domain != UNIT_DISK:
            reasons.append("truncated weights live on the unit disk")
        # bounded above and below on the disk, so W^-1 is bounded
        return ValidationReport(not reasons, 1.0 if not reasons else None, False, tuple(reasons))
    if isinstance(spec, TabulatedWeight):
        radii = [r for r, _ in spec.samples]
        if len(radii) < 2:
            reasons.append("need at least two samples")
        if any(b <= a for a, b in zip(radii, radii[1:])):
            reasons.append("sample radii must be strictly increasing")
        if any(r < 0 for r in radii):
            reasons.append("sample radii must be nonnegative")
        if any(not (w > 0) or not math.isfinite(w) for _, w in spec.samples):
            reasons.append("sample densities must be finite and positive")
        if spec.domain is None or spec.domain.is_plane:
            reasons.append("tabulated weights need a disk domain")
        elif radii and spec.domain.radius > radii[-1] * (1 + 1e-12):
            reasons.append("disk radius exceeds the last sample radius")
        return ValidationReport(not reasons, 1.0 if not reasons else None, False, tuple(reasons))
    raise ValidationError(f"not a radial weight spec: {spec!r}")


def require_valid(spec: RadialWeightSpec) -> ValidationReport:
    report = validate(spec)
    if not report.valid:
        raise ValidationError("; ".join(report.reasons))
    return report


def weight_value(spec: RadialWeightSpec, r: float) -> float:
    """Density of ``spec`` at radius ``r``.

    Returns ``math.inf`` at the origin for Mittag-Leffler weights with
    ``n < 0`` (and ``0.0`` when ``n > 0``).
    """
    r = float(r)
    if not spec.domain.contains_radius(r):
        raise DomainError(f"radius {r} outside {spec.domain.to_dict()}")
    if r == 0.0:
        if isinstance(spec, MittagLefflerWeight):
            if spec.n < 0:
                return math.inf
            return 0.0 if spec.n > 0 else 1.0 / (2 * math.pi)
        if isinstance(spec, TruncatedDiskWeight):
            return spec.q
    return float(spec.density(r))


# -- JSON ------------------------------------------------------------------

_FIELDS = {
    "mittag_leffler": {"family", "n", "alpha", "m", "domain"},
    "truncated_disk": {"family", "q", "domain"},
    "tabulated": {"family", "samples", "domain"},
}


def to_dict(spec: RadialWeightSpec) -> dict:
    if isinstance(spec, MittagLefflerWeight):
        d = {"family": spec.family, "n": spec.n, "alpha": spec.alpha, "m": spec.m}
    elif isinstance(spec, TruncatedDiskWeight):
        d = {"family": spec.family, "q": spec.q}
    else:
        d = {"family": spec.family, "samples": [[r, w] for r, w in spec.samples]}
    d["domain"] = spec.domain.to_dict()
    return d


def from_dict(d: dict) -> RadialWeightSpec:
    if not isinstance(d, dict):
        raise ValidationError("weight spec must be a JSON object")
    family = d.get("family")
    if family not in _FIELDS:
        raise ValidationError(f"unknown weight family {family!r}")
    extra = set(d) - _FIELDS[family]
    if extra:
        raise ValidationError(f"unknown fields for {family}: {sorted(extra)}")
    domain = DomainSpec.from_dict(d["domain"]) if "domain" in d else None
    try:
        if family == "mittag_leffler":
            return MittagLefflerWeight(d["n"], d["alpha"], d["m"], domain or PLANE)
        if family == "truncated_disk":
            return TruncatedDiskWeight(d["q"], domain or UNIT_DISK)
        return TabulatedWeight(tuple(tuple(s) for s in d["samples"]), domain)
    except KeyError as exc:
        raise ValidationError(f"missing field {exc.args[0]!r} for {family}") from None
    except (TypeError, ValueError) as exc:
        raise ValidationError(str(exc)) from None
