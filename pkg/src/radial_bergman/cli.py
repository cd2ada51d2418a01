"""Command-line entry point.

Every subcommand writes one JSON document or CSV table to ``--out`` (default
stdout). Numbers carry 17 significant digits and no randomness enters any
computation, so identical invocations give byte-identical output. Exit
status: 0 on success, 2 on invalid input, 3 when the requested accuracy
cannot be certified. Errors are reported on stderr as
``{"code", "message", "context"}``.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import equivalent_weights as eqw
from . import zeros as zmod
from .errors import AccuracyError, DomainError, ValidationError
from .kernel import CLOSED, LIMIT, SERIES, KernelEvaluator, reproduce_check
from .mittag_leffler import MLFunctionParams, ml_eval
from .moments import fmt, moment_table
from .weights import from_dict, to_dict

EXIT_OK, EXIT_VALIDATION, EXIT_ACCURACY = 0, 2, 3

COMMANDS = ("moments", "ml-eval", "kernel-eval", "kernel-grid", "zeros", "ramadanov",
            "reproduce-check")
DEFAULT_FORMAT = {"moments": "csv", "kernel-grid": "csv"}


# -- output --------------------------------------------------------------------

def _num(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "null"
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return fmt(x)


def dumps(obj, indent: int = 0) -> str:
    """JSON with 17-significant-digit floats and insertion-ordered keys."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, int, float, np.integer, np.floating)):
        return _num(obj)
    if isinstance(obj, complex):
        return dumps([obj.real, obj.imag], indent)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dumps(v, indent + 1) for v in obj) + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv(header, rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def _progress(msg: str):
    print(msg, file=sys.stderr, flush=True)


# -- config --------------------------------------------------------------------

@dataclass(frozen=True)
class RunConfig:
    command: str
    weight: dict | None = None
    options: dict = field(default_factory=dict)
    tol: float = 1e-12
    out: str | None = None
    format: str | None = None
    threads: int = 1

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValidationError(f"unknown subcommand {self.command!r}")
        if not (isinstance(self.tol, (int, float)) and self.tol > 0):
            raise ValidationError("tolerances must be positive")
        for key, value in self.options.items():
            if "tol" in key and value is not None and not value > 0:
                raise ValidationError(f"{key} must be positive")
        if self.format not in (None, "json", "csv"):
            raise ValidationError(f"unknown format {self.format!r}")
        if self.threads < 0:
            raise ValidationError("threads must be >= 0")

    @property
    def output_format(self) -> str:
        return self.format or DEFAULT_FORMAT.get(self.command, "json")

    @property
    def workers(self) -> int:
        return self.threads or (os.cpu_count() or 1)


def _parse_complex(text: str) -> complex:
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise ValidationError(f"expected RE,IM, got {text!r}") from None
    if len(parts) == 1:
        return complex(parts[0], 0.0)
    if len(parts) != 2:
        raise ValidationError(f"expected RE,IM, got {text!r}")
    return complex(*parts)


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise ValidationError(f"expected comma-separated numbers, got {text!r}") from None


def _parse_json(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{what} is not valid JSON: {exc}") from None


def parse_grid(text: str) -> np.ndarray:
    """``polar:R,N`` (N radii in [0, R] times N angles) or ``rect:x0,x1,y0,y1,N``."""
    kind, _, rest = text.partition(":")
    vals = _parse_floats(rest)
    if kind == "polar" and len(vals) == 2 and vals[1] >= 1 and vals[1] == int(vals[1]):
        return eqw.polar_grid(vals[0], int(vals[1]))
    if kind == "rect" and len(vals) == 5 and vals[4] >= 1 and vals[4] == int(vals[4]):
        x0, x1, y0, y1, n = vals
        xs = np.linspace(x0, x1, int(n))
        ys = np.linspace(y0, y1, int(n))
        return (xs[None, :] + 1j * ys[:, None]).ravel()
    raise ValidationError(f"bad grid spec {text!r}")


# -- subcommands -----------------------------------------------------------------

def _weight(cfg: RunConfig):
    if cfg.weight is None:
        raise ValidationError("--weight is required")
    return from_dict(cfg.weight)


def _value_obj(res) -> dict:
    v = complex(res.value)
    return {"value": [v.real, v.imag], "terms": res.terms, "tail_bound": res.tail_bound,
            "error_estimate": res.error}


def _cmd_moments(cfg: RunConfig):
    seq = moment_table(_weight(cfg), cfg.options["k_max"], cfg.tol)
    if cfg.output_format == "csv":
        return seq.to_csv()
    return seq.to_json_obj()


def _cmd_ml_eval(cfg: RunConfig):
    o = cfg.options
    params = MLFunctionParams(o["beta"], o["gamma"])
    z = _parse_complex(o["z"])
    res = ml_eval(params, z, cfg.tol)
    return {"beta": params.beta, "gamma": params.gamma_param, "z": [z.real, z.imag],
            **_value_obj(res)}


def _evaluator(cfg: RunConfig) -> KernelEvaluator:
    path = cfg.options.get("path") or SERIES
    if path == LIMIT:
        return KernelEvaluator.limit()
    return KernelEvaluator.from_weight(_weight(cfg), path, tol=cfg.tol)


def _cmd_kernel_eval(cfg: RunConfig):
    ev = _evaluator(cfg)
    z, w = _parse_complex(cfg.options["z"]), _parse_complex(cfg.options["w"])
    ev._check_point(z)
    ev._check_point(w)
    res = ev.profile(z * w.conjugate(), cfg.tol)
    return {"path": ev.path, "z": [z.real, z.imag], "w": [w.real, w.imag], **_value_obj(res)}


def _cmd_kernel_grid(cfg: RunConfig):
    ev = _evaluator(cfg)
    pts = parse_grid(cfg.options["grid"])
    ws = pts if cfg.options.get("w") is None else np.array([_parse_complex(cfg.options["w"])])
    rows = []
    for z in pts:
        for w in ws:
            z, w = complex(z), complex(w)
            k = complex(ev.evaluate(z, w, cfg.tol).value)
            rows.append((z.real, z.imag, w.real, w.imag, k.real, k.imag))
    if cfg.output_format == "csv":
        return _csv(["re_z", "im_z", "re_w", "im_w", "re_K", "im_K"], rows)
    return {"path": ev.path, "rows": [list(r) for r in rows]}


def _scan_one(args):
    weight_dict, path, w, R, tol = args
    ev = KernelEvaluator.from_weight(from_dict(weight_dict), path)
    f = zmod.kernel_zero_function(ev, w)
    try:
        return zmod.winding_count(f, 0.0, R, tol)
    except AccuracyError:
        return None


def _cmd_zeros(cfg: RunConfig):
    o = cfg.options
    weight = _weight(cfg)
    path = o.get("path") or SERIES
    ev = KernelEvaluator.from_weight(weight, path)
    w = _parse_complex(o["w"])
    zero_tol = o.get("zero_tol") or 1e-8
    f = zmod.kernel_zero_function(ev, w)
    result = {"weight": to_dict(weight), "w": [w.real, w.imag], "path": path,
              "integer_m": bool(getattr(weight, "integer_m", False))}
    if o.get("radius") is not None:
        _progress(f"locating zeros in |z| < {o['radius']:g}")
        report = zmod.find_zeros_in_disk(f, o["radius"], zero_tol)
        result.update(report.to_json_obj())
        if cfg.output_format == "csv" and not o.get("scan"):
            return report.to_csv()
    if o.get("scan"):
        radii = _parse_floats(o["scan"])
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ValidationError("scan radii must be strictly increasing")
        jobs = [(to_dict(weight), path, w, R, zero_tol) for R in radii]
        counts = _map(_scan_one, jobs, cfg.workers)
        kept = [(R, c) for R, c in zip(radii, counts) if c is not None]
        scan = zmod.GrowthScan([r for r, _ in kept], [c for _, c in kept],
                               [R for R, c in zip(radii, counts) if c is None],
                               zmod.order_estimate([r for r, _ in kept], [c for _, c in kept]))
        result.update(scan.to_json_obj())
        if cfg.output_format == "csv":
            return _csv(["radius", "count"], [(r, c) for r, c in kept])
    if o.get("radius") is None and not o.get("scan"):
        raise ValidationError("zeros needs --radius and/or --scan")
    return result


def _ladder_one(args):
    q, grid_radius, grid_n, w, tol = args
    return eqw.convergence_report([q], grid_radius, grid_n, w, tol)


def _cmd_ramadanov(cfg: RunConfig):
    o = cfg.options
    ladder = _parse_floats(o["q_ladder"])
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValidationError("q ladder must be strictly increasing")
    w = _parse_complex(o["w"])
    tol = min(cfg.tol, 1e-14)
    parts = _map(_ladder_one, [(q, o["grid_radius"], o["grid_n"], w, tol) for q in ladder],
                 cfg.workers, label="q")
    rep = eqw.ConvergenceReport(
        ladder, [p.sup_distances[0] for p in parts], [p.origin_values[0] for p in parts],
        [p.emergent_zeros[0] for p in parts], o["grid_radius"], o["grid_n"], w)
    if cfg.output_format == "csv":
        return rep.to_csv()
    return rep.to_json_obj()


def _cmd_reproduce_check(cfg: RunConfig):
    o = cfg.options
    weight = _weight(cfg)
    coeffs = _parse_json(o["poly"], "--poly")
    if not isinstance(coeffs, list) or not coeffs:
        raise ValidationError("--poly must be a non-empty JSON array")
    poly = []
    for c in coeffs:
        if isinstance(c, list) and len(c) == 2:
            poly.append(complex(c[0], c[1]))
        elif isinstance(c, (int, float)):
            poly.append(complex(c))
        else:
            raise ValidationError(f"bad polynomial coefficient {c!r}")
    z = _parse_complex(o["z"])
    quad_tol = o.get("quad_tol") or 1e-8
    ev = KernelEvaluator.from_weight(weight, SERIES)
    residual = reproduce_check(ev, weight, poly, z, quad_tol)
    return {"weight": to_dict(weight), "z": [z.real, z.imag], "degree": len(poly) - 1,
            "residual": residual, "quad_tol": quad_tol, "passed": residual < quad_tol}


_HANDLERS = {
    "moments": _cmd_moments, "ml-eval": _cmd_ml_eval, "kernel-eval": _cmd_kernel_eval,
    "kernel-grid": _cmd_kernel_grid, "zeros": _cmd_zeros, "ramadanov": _cmd_ramadanov,
    "reproduce-check": _cmd_reproduce_check,
}


def _map(fn, jobs, workers: int, label: str | None = None):
    """Ordered map, over processes when more than one worker is allowed."""
    if workers <= 1 or len(jobs) <= 1:
        out = []
        for i, job in enumerate(jobs):
            if label:
                _progress(f"{label} {i + 1}/{len(jobs)}")
            out.append(fn(job))
        return out
    with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
        return list(pool.map(fn, jobs))


def execute(cfg: RunConfig) -> str:
    """Run a validated config and return the rendered output text."""
    result = _HANDLERS[cfg.command](cfg)
    if isinstance(result, str):
        return result
    return dumps(result) + "\n"


def run(cfg: RunConfig) -> int:
    try:
        text = execute(cfg)
    except (ValidationError, DomainError) as exc:
        return _fail(EXIT_VALIDATION, "validation_error", exc)
    except AccuracyError as exc:
        return _fail(EXIT_ACCURACY, "accuracy_error", exc)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _fail(status: int, code: str, exc: Exception) -> int:
    context = dict(getattr(exc, "context", {}) or {})
    estimate = getattr(exc, "estimate", None)
    if estimate is not None:
        try:
            context["estimate"] = complex(estimate)
        except (TypeError, ValueError):
            context["estimate"] = str(estimate)
    safe = {}
    for k, v in context.items():
        try:
            dumps(v)
            safe[k] = v
        except TypeError:
            safe[k] = str(v)
    sys.stderr.write(dumps({"code": code, "message": str(exc), "context": safe}) + "\n")
    return status


# -- argument parsing --------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    # usage errors become validation errors so they are reported like the rest
    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=1e-12, help="absolute accuracy target")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)
    common.add_argument("--threads", type=int, default=1, help="worker processes, 0 = all cores")

    p = _Parser(prog="radial-bergman", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    s = add("moments", "moment table W_0..W_K")
    s.add_argument("--weight", required=True)
    s.add_argument("--k-max", type=int, required=True)

    s = add("ml-eval", "two-parameter Mittag-Leffler function")
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--z", required=True, help="RE,IM")

    s = add("kernel-eval", "K(z, w) at one point pair")
    s.add_argument("--weight")
    s.add_argument("--z", required=True)
    s.add_argument("--w", required=True)
    s.add_argument("--path", choices=(SERIES, CLOSED, LIMIT), default=SERIES)

    s = add("kernel-grid", "K(z, w) over a grid")
    s.add_argument("--weight")
    s.add_argument("--grid", required=True, help="polar:R,N or rect:x0,x1,y0,y1,N")
    s.add_argument("--w", default=None, help="fixed second point; default all grid pairs")
    s.add_argument("--path", choices=(SERIES, CLOSED, LIMIT), default=SERIES)

    s = add("zeros", "zeros of K(., w) in a disk")
    s.add_argument("--weight", required=True)
    s.add_argument("--w", required=True)
    s.add_argument("--radius", type=float, default=None)
    s.add_argument("--scan", default=None, help="increasing radii R1,R2,... (counts only)")
    s.add_argument("--zero-tol", type=float, default=1e-8)
    s.add_argument("--path", choices=(SERIES, CLOSED), default=SERIES)

    s = add("ramadanov", "truncated-weight kernels against their limit")
    s.add_argument("--q-ladder", required=True)
    s.add_argument("--grid-radius", type=float, default=0.5)
    s.add_argument("--grid-n", type=int, default=16)
    s.add_argument("--w", default="0.5,0")

    s = add("reproduce-check", "residual of the reproducing identity for a polynomial")
    s.add_argument("--weight", required=True)
    s.add_argument("--poly", required=True, help="JSON array of coefficients, c or [re, im]")
    s.add_argument("--z", required=True)
    s.add_argument("--quad-tol", type=float, default=1e-8)
    return p


_GLOBAL = ("command", "tol", "out", "format", "threads", "weight")


def config_from_args(argv=None) -> RunConfig:
    ns = build_parser().parse_args(argv)
    raw = getattr(ns, "weight", None)
    weight = None if raw is None else _parse_json(raw, "--weight")
    if weight is not None:
        from_dict(weight)  # reject malformed specs before any work
    options = {k: v for k, v in vars(ns).items() if k not in _GLOBAL}
    return RunConfig(ns.command, weight, options, ns.tol, ns.out, ns.format, ns.threads)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
    except ValidationError as exc:
        return _fail(EXIT_VALIDATION, "validation_error", exc)
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
