"""Command-line front end: ``plap <command> --config <path> [--out DIR] [--format csv,json]``.

Exit status: 0 on success, 1 on invalid configuration or solver failure
(a ``diagnostic.json`` is written for solver failures), 2 when the
``check`` command finds a failing hypothesis.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import os
import platform
import sys
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .curve import SolutionCurve, classify_curve, trace_homotopy, trace_lambda_curve
from .diagnostics import (
    HypothesisReport,
    a_posteriori_checks,
    check_hypotheses,
    energy_residual,
    one_dim_identities,
    qualitative_checks,
    tang_profiles,
)
from .errors import ConfigError, PlapError
from .ivp import DEFAULT_ATOL, DEFAULT_EPS, DEFAULT_RTOL
from .model import Autonomous1D, Exponents, LinearTest, ModelAB, ProblemSpec, PureB
from .polynomial import Polynomial, as_fraction
from .shoot import BOUNDARY_TOL, ROOT_TOL, RadialSolution, is_degenerate, solve_at_lambda, solve_from_boundary
from .timemap import time_map_lambda

COMMANDS = ("solve", "curve", "homotopy", "check", "timemap", "identities", "classify")
FORMATS = ("csv", "json")
DEFAULT_TOLERANCES = {
    "rtol": DEFAULT_RTOL,
    "atol": DEFAULT_ATOL,
    "boundary": BOUNDARY_TOL,
    "root": ROOT_TOL,
    "epsilon": DEFAULT_EPS,
}
SOLUTION_COLUMNS = ("r", "u", "uPrime", "v", "w", "wPrime")
CURVE_COLUMNS = ("parameter", "alpha", "uPrimeAtOne", "degeneracyMargin")


@dataclass
class RunConfig:
    command: str
    spec: ProblemSpec
    tolerances: dict
    directory: str
    formats: tuple[str, ...]
    options: dict = field(default_factory=dict)
    resolved: dict = field(default_factory=dict)


# configuration -------------------------------------------------------------------


def _coeffs(value, name):
    if isinstance(value, (int, float, str)) and not isinstance(value, bool):
        value = [value]
    if not isinstance(value, list) or not value:
        raise ConfigError(f"{name} must be a non-empty list of numbers or 'p/q' strings", name)
    if len(value) > 9:
        raise ConfigError(f"{name} has degree above 8", name)
    try:
        return Polynomial([as_fraction(c) for c in value])
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"{name}: {exc}", name) from exc


def _number(d, key, name, default=None, positive=False):
    if key not in d:
        if default is None:
            raise ConfigError(f"missing required field {name}", name)
        return default
    v = d[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{name} must be a number", name)
    if positive and not v > 0:
        raise ConfigError(f"{name} must be positive, got {v}", name)
    return float(v) if not isinstance(v, int) else v


def _nonlinearity(d: dict):
    name = "problem.nonlinearity"
    if not isinstance(d, dict):
        raise ConfigError(f"{name} must be an object", name)
    kind = d.get("kind")
    if kind == "model_ab":
        return ModelAB(
            _coeffs(d.get("a"), f"{name}.a"),
            _coeffs(d.get("b"), f"{name}.b"),
            _number(d, "q", f"{name}.q"),
            a_scale=float(d.get("aScale", 1.0)),
            b_power=float(d.get("bPower", 1.0)),
        )
    if kind == "pure_b":
        return PureB(_coeffs(d.get("b"), f"{name}.b"), _number(d, "q", f"{name}.q"), b_power=float(d.get("bPower", 1.0)))
    if kind == "autonomous":
        return Autonomous1D(_coeffs(d.get("coefficients"), f"{name}.coefficients"))
    if kind == "linear":
        return LinearTest()
    raise ConfigError(f"unknown nonlinearity kind {kind!r} (expected model_ab, pure_b, autonomous or linear)", f"{name}.kind")


def _range(opts, key, name):
    v = opts.get(key)
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)):
        raise ConfigError(f"{name} must be a pair of numbers", name)
    lo, hi = float(v[0]), float(v[1])
    if not 0 < lo < hi:
        raise ConfigError(f"{name} must satisfy 0 < low < high", name)
    return lo, hi


def parse_config(raw: dict) -> RunConfig:
    """Validate a decoded config object and inject defaults."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    command = raw.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {', '.join(COMMANDS)}, got {command!r}", "command")
    prob = raw.get("problem")
    if not isinstance(prob, dict):
        raise ConfigError("missing required object problem", "problem")
    p = _number(prob, "p", "problem.p")
    n = _number(prob, "n", "problem.n")
    if not p > 1:
        raise ConfigError(f"problem.p must exceed 1, got {p}", "problem.p")
    if not isinstance(n, int) or n < 1:
        raise ConfigError(f"problem.n must be an integer >= 1, got {n}", "problem.n")
    lam = _number(prob, "lambda", "problem.lambda", default=1.0, positive=True)
    nl = _nonlinearity(prob.get("nonlinearity"))
    q = getattr(nl, "q", None)
    if q is not None:
        if not q > min(1.0, p - 1.0):
            raise ConfigError(f"problem.nonlinearity.q must exceed min(1, p-1), got {q}", "problem.nonlinearity.q")
        crit = Exponents(p, n, q).critical_exponent
        if command != "check" and q >= crit:
            raise ConfigError(
                f"problem.nonlinearity.q = {q} is not subcritical (critical exponent {crit:.6g})", "problem.nonlinearity.q"
            )
    spec = ProblemSpec(p, n, nl, lam)

    tol_in = raw.get("tolerances", {})
    if not isinstance(tol_in, dict):
        raise ConfigError("tolerances must be an object", "tolerances")
    unknown = set(tol_in) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise ConfigError(f"unknown tolerance field {sorted(unknown)[0]}", f"tolerances.{sorted(unknown)[0]}")
    tolerances = {k: _number(tol_in, k, f"tolerances.{k}", default=v, positive=True) for k, v in DEFAULT_TOLERANCES.items()}
    if tolerances["epsilon"] > 1e-3:
        raise ConfigError("tolerances.epsilon must not exceed 1e-3", "tolerances.epsilon")

    out = raw.get("output", {})
    directory = str(out.get("directory", "plap-out"))
    formats = tuple(out.get("formats", list(FORMATS)))
    bad = [f for f in formats if f not in FORMATS]
    if bad:
        raise ConfigError(f"unknown output format {bad[0]!r}", "output.formats")

    opts = {}
    if command == "solve" and "alphaBracket" in raw:
        opts["alphaBracket"] = _range(raw, "alphaBracket", "alphaBracket")
    if command in ("curve", "classify"):
        opts["lambdaRange"] = _range(raw, "lambdaRange", "lambdaRange")
        steps = raw.get("steps", 20)
        if not isinstance(steps, int) or steps < 3:
            raise ConfigError("steps must be an integer >= 3", "steps")
        opts["steps"] = steps
        seed = raw.get("seedAt", "low")
        if seed not in ("low", "high"):
            raise ConfigError("seedAt must be 'low' or 'high'", "seedAt")
        opts["seedAt"] = seed
    if command == "homotopy":
        h = raw.get("homotopy")
        if not isinstance(h, dict):
            raise ConfigError("missing required object homotopy", "homotopy")
        kind = h.get("kind")
        if kind not in ("coefficientPower", "linearTermSwitch"):
            raise ConfigError("homotopy.kind must be coefficientPower or linearTermSwitch", "homotopy.kind")
        steps = h.get("steps", 10)
        if not isinstance(steps, int) or steps < 1:
            raise ConfigError("homotopy.steps must be a positive integer", "homotopy.steps")
        opts.update(kind=kind, steps=steps, reverse=bool(h.get("reverse", False)))
    if command == "timemap":
        alphas = raw.get("alphas")
        if not (isinstance(alphas, list) and alphas and all(isinstance(a, (int, float)) and a > 0 for a in alphas)):
            raise ConfigError("alphas must be a non-empty list of positive numbers", "alphas")
        if n != 1 or not spec.is_autonomous:
            raise ConfigError("timemap needs n = 1 and an autonomous nonlinearity", "problem")
        opts["alphas"] = [float(a) for a in alphas]

    resolved = {
        "command": command,
        "problem": spec.describe(),
        "tolerances": tolerances,
        "output": {"directory": directory, "formats": list(formats)},
        **{k: (list(v) if isinstance(v, tuple) else v) for k, v in opts.items()},
    }
    return RunConfig(command, spec, tolerances, directory, formats, opts, resolved)


def load_config(path: str) -> RunConfig:
    """Read and validate a JSON config file.

    Raises
    ------
    ConfigError
        With line and column for malformed JSON, or naming the offending field.
    """
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return parse_config(raw)


# emission ---------------------------------------------------------------------------------


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, str)) or obj is None:
        return obj
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if math.isnan(x):
            return None
        if math.isinf(x):
            return "Infinity" if x > 0 else "-Infinity"
        return x
    return str(obj)


def _versions() -> dict:
    import scipy
    import sympy

    return {
        "plap": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "sympy": sympy.__version__,
        "python": platform.python_version(),
    }


def write_atomic(path: Path, text: str) -> None:
    """Write ``text`` to ``path`` via a temporary file and rename: never a partial file."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def csv_text(columns, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(_fmt(x) for x in row) + "\n")
    return buf.getvalue()


def read_csv(path) -> tuple[list[str], np.ndarray]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    header = lines[0].split(",")
    data = np.array([[float(x) for x in ln.split(",")] for ln in lines[1:]], dtype=float).reshape(-1, len(header))
    return header, data


def _document(config: RunConfig, payload: dict) -> str:
    doc = {"config": config.resolved, "tolerances": config.tolerances, "versions": _versions(), **payload}
    return json.dumps(_jsonable(doc), indent=2, sort_keys=True) + "\n"


def solution_rows(sol: RadialSolution):
    tr, lin = sol.trajectory, sol.linearized
    for i, r in enumerate(tr.r):
        w = lin.w[i] if lin is not None else math.nan
        wp = lin.w_prime[i] if lin is not None else math.nan
        yield (r, tr.u[i], tr.u_prime[i], tr.v[i], w, wp)


def solution_summary(sol: RadialSolution) -> dict:
    margin, degenerate = is_degenerate(sol)
    return {
        "lambda": sol.lam,
        "alpha": sol.alpha,
        "uPrimeAtOne": sol.u_prime_at_one,
        "uAtOne": sol.u_at_one,
        "degeneracyMargin": margin,
        "degenerate": degenerate,
        "method": sol.method,
        "flags": list(sol.flags),
    }


def curve_payload(curve: SolutionCurve) -> dict:
    shape = curve.shape
    if shape is None and len(curve.points) >= 3:
        shape = classify_curve(curve)
    return {
        "parameterKind": curve.parameter_kind,
        "stopReason": curve.stop_reason,
        "lambda0": curve.lambda0,
        "points": [pt.to_dict() for pt in curve.points],
        "shape": shape.to_dict() if shape is not None else None,
    }


def emit_results(result, config: RunConfig, name: str | None = None) -> list[Path]:
    """Write CSV/JSON artifacts for a solution, curve or report; return the paths written."""
    out = Path(config.directory)
    written = []
    if isinstance(result, RadialSolution):
        name = name or "solution"
        if "csv" in config.formats:
            written.append(out / f"{name}.csv")
            write_atomic(written[-1], csv_text(SOLUTION_COLUMNS, solution_rows(result)))
        payload = {"solution": solution_summary(result)}
    elif isinstance(result, SolutionCurve):
        name = name or "curve"
        if "csv" in config.formats:
            rows = [(pt.parameter, pt.alpha, pt.u_prime_at_one, pt.degeneracy_margin) for pt in result.points]
            written.append(out / f"{name}.csv")
            write_atomic(written[-1], csv_text(CURVE_COLUMNS, rows))
        payload = {"curve": curve_payload(result)}
    elif isinstance(result, HypothesisReport):
        name = name or "report"
        payload = {"report": result.to_dict()}
    elif isinstance(result, dict):
        name = name or "report"
        payload = result
    else:
        raise TypeError(f"cannot emit {type(result).__name__}")
    if "json" in config.formats or isinstance(result, (HypothesisReport, dict)):
        written.append(out / f"{name}.json")
        write_atomic(written[-1], _document(config, payload))
    return written


# commands --------------------------------------------------------------------------------


def _solver_kw(config: RunConfig) -> dict:
    t = config.tolerances
    return {"eps": t["epsilon"], "rtol": t["rtol"], "atol": t["atol"]}


def _solve(config: RunConfig) -> RadialSolution:
    kw = _solver_kw(config)
    spec, t = config.spec, config.tolerances
    bracket = config.options.get("alphaBracket")
    try:
        return solve_at_lambda(spec, spec.lam, bracket, boundary_tol=t["boundary"], root_tol=t["root"], **kw)
    except PlapError:
        if bracket is not None or spec.n != 1:
            raise
    return solve_from_boundary(spec, spec.lam, **kw)


def run_command(config: RunConfig) -> int:
    """Execute ``config.command`` and write its artifacts; return the exit status."""
    cmd, spec = config.command, config.spec
    kw = _solver_kw(config)
    if cmd == "solve":
        emit_results(_solve(config), config)
        return 0
    if cmd in ("curve", "classify"):
        o = config.options
        curve = trace_lambda_curve(spec, o["lambdaRange"], o["steps"], seed_at=o["seedAt"], **kw)
        if cmd == "curve":
            emit_results(curve, config)
        else:
            emit_results({"shape": classify_curve(curve).to_dict(), "stopReason": curve.stop_reason}, config, "classify")
        return 0
    if cmd == "homotopy":
        o = config.options
        curve = trace_homotopy(spec, o["kind"], o["steps"], reverse=o["reverse"], **kw)
        emit_results(curve, config, "homotopy")
        emit_results(curve.points[-1 if not o["reverse"] else 0].solution, config, "homotopy_endpoint")
        return 0
    if cmd == "check":
        report = check_hypotheses(spec)
        emit_results(report, config, "check")
        return 0 if report.passed else 2
    if cmd == "timemap":
        results = [time_map_lambda(spec.nonlinearity, spec.p, a) for a in config.options["alphas"]]
        if "csv" in config.formats:
            rows = [(r.alpha, r.lam, r.error_estimate) for r in results]
            write_atomic(Path(config.directory) / "timemap.csv", csv_text(("alpha", "lambda", "errorEstimate"), rows))
        payload = {"timemap": [{"alpha": r.alpha, "lambda": r.lam, "errorEstimate": r.error_estimate} for r in results]}
        emit_results(payload, config, "timemap")
        return 0
    if cmd == "identities":
        sol = _solve(config)
        prof = tang_profiles(sol)
        report = qualitative_checks(sol) + a_posteriori_checks(sol)
        payload = {
            "solution": solution_summary(sol),
            "residuals": {**prof.residuals, "energy": energy_residual(sol)},
            "r2": prof.r2,
            "Q1": prof.Q[-1],
            "P1": prof.P[-1],
            "report": report.to_dict(),
        }
        if spec.n == 1 and spec.is_autonomous:
            one = one_dim_identities(sol)
            payload["oneDimensional"] = {
                "wronskian": one.wronskian,
                "wronskianDeviation": one.wronskian_deviation,
                "TResidual": one.T_residual,
                "x0": one.x0,
                "qAtX0": one.q_x0,
                "report": one.report.to_dict(),
            }
        if "csv" in config.formats:
            rows = zip(prof.r, prof.xi, prof.T, prof.Q, prof.P, prof.I, prof.alpha_fun)
            write_atomic(Path(config.directory) / "profiles.csv", csv_text(("r", "xi", "T", "Q", "P", "I", "alphaFun"), rows))
        emit_results(payload, config, "identities")
        return 0
    raise ConfigError(f"unknown command {cmd}", "command")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="plap", description="Radial p-Laplace Dirichlet solver and verification suite.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", required=True, help="JSON run configuration")
    ap.add_argument("--out", help="output directory (overrides output.directory)")
    ap.add_argument("--format", help="comma-separated subset of csv,json (overrides output.formats)")
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        if config.command != args.command:
            # the command line wins; re-validate command-specific fields
            raw = json.loads(Path(args.config).read_text(encoding="utf-8"))
            raw["command"] = args.command
            config = parse_config(raw)
        if args.out:
            config.directory = args.out
            config.resolved["output"]["directory"] = args.out
        if args.format:
            fmts = tuple(f.strip() for f in args.format.split(",") if f.strip())
            bad = [f for f in fmts if f not in FORMATS]
            if bad:
                raise ConfigError(f"unknown output format {bad[0]!r}", "--format")
            config.formats = fmts
            config.resolved["output"]["formats"] = list(fmts)
    except ConfigError as exc:
        print(f"plap: config error: {exc}", file=sys.stderr)
        return 1
    try:
        return run_command(config)
    except PlapError as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        for attr in ("location", "theta", "field"):
            if getattr(exc, attr, None) is not None:
                diag[attr] = getattr(exc, attr)
        write_atomic(Path(config.directory) / "diagnostic.json", _document(config, {"diagnostic": diag}))
        print(f"plap: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
