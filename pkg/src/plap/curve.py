"""Natural continuation of solution curves in lambda and in a homotopy parameter.

Each step warm-starts the amplitude bracket from a log-log extrapolation
of the previous points.  In one dimension a failed center shot falls back
to boundary shooting, which keeps resolving solutions whose amplitude is
exponentially close to theta.  Along 1D autonomous curves the energy level
F(alpha) = (p-1)|u'(1)|^p / (p lam) is recorded as well: it is an
increasing function of alpha above theta and stays resolvable when alpha
itself has hit the floating-point floor.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .diagnostics import check_model_hypotheses
from .errors import BracketError, HomotopyError, IntegrationError
from .model import ModelAB, ProblemSpec, PureB
from .shoot import RadialSolution, default_alpha_bracket, is_degenerate, solve_at_lambda, solve_from_boundary

__all__ = [
    "CurvePoint",
    "CurveShape",
    "SolutionCurve",
    "Lambda0Search",
    "trace_lambda_curve",
    "detect_lambda0",
    "search_lambda0",
    "trace_homotopy",
    "homotopy_member",
    "classify_curve",
    "LAMBDA0_TOL",
]

LAMBDA0_TOL = 1e-6


@dataclass(frozen=True, eq=False)
class CurvePoint:
    parameter: float
    alpha: float
    u_prime_at_one: float
    degeneracy_margin: float
    solution: RadialSolution = field(repr=False)
    energy_level: float | None = None

    def to_dict(self) -> dict:
        return {
            "parameter": self.parameter,
            "alpha": self.alpha,
            "uPrimeAtOne": self.u_prime_at_one,
            "degeneracyMargin": self.degeneracy_margin,
        }


@dataclass(frozen=True)
class CurveShape:
    folds_detected: int
    lambda0: float
    alpha_monotone: bool
    alpha_limit_low: float
    alpha_limit_high: float
    margin_sign_constant: bool
    margin_floor_ratio: float
    template: str
    trend_exponent: float

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["lambda0"] = "infinite" if math.isinf(self.lambda0) else self.lambda0
        return d


@dataclass(frozen=True, eq=False)
class SolutionCurve:
    spec: ProblemSpec
    points: tuple[CurvePoint, ...]
    parameter_kind: str
    stop_reason: str
    lambda0: float = math.inf
    shape: CurveShape | None = None

    @property
    def parameters(self) -> np.ndarray:
        return np.array([pt.parameter for pt in self.points])

    @property
    def alphas(self) -> np.ndarray:
        return np.array([pt.alpha for pt in self.points])

    @property
    def margins(self) -> np.ndarray:
        return np.array([pt.degeneracy_margin for pt in self.points])


def _energy_level(spec: ProblemSpec, sol: RadialSolution) -> float | None:
    if spec.n != 1 or not spec.is_autonomous:
        return None
    p = spec.p
    return (p - 1) * abs(sol.u_prime_at_one) ** p / (p * sol.lam)


def _point(param: float, sol: RadialSolution, spec: ProblemSpec) -> CurvePoint:
    return CurvePoint(param, sol.alpha, sol.u_prime_at_one, sol.degeneracy_margin, sol, _energy_level(spec, sol))


def _alpha_floor(spec: ProblemSpec) -> float:
    theta = spec.theta(0.0)
    return theta * (1 + 1e-15) if theta > 0 else 1e-12


def _sweep_bracket(spec: ProblemSpec, lam: float, guess: float | None, **kw) -> RadialSolution:
    """Center shooting from a guessed amplitude, widening the bracket geometrically."""
    floor = _alpha_floor(spec)
    if guess is None:
        lo, hi = default_alpha_bracket(spec)
        widen = 10.0
    else:
        lo, hi = max(guess / 1.05, floor), guess * 1.05
        widen = 4.0
    last = None
    for _ in range(12):
        try:
            return solve_at_lambda(spec, lam, (lo, hi), **kw)
        except BracketError as exc:
            last = exc
        lo = max(floor, lo / widen) if lo > floor else floor
        hi *= widen
    raise last


def _solve(spec: ProblemSpec, lam: float, guess: float | None, beta_guess: float | None, **kw) -> RadialSolution:
    try:
        return _sweep_bracket(spec, lam, guess, **kw)
    except (BracketError, IntegrationError):
        if spec.n != 1:
            raise
    bracket = (beta_guess / 2, beta_guess * 2) if beta_guess else None
    return solve_from_boundary(spec, lam, bracket, **kw)


def _predict(params, alphas, target, floor):
    if len(params) < 2:
        return alphas[-1] if alphas else None
    (x0, x1), (y0, y1) = params[-2:], alphas[-2:]
    if x0 > 0 and x1 > 0 and y0 > floor and y1 > floor and target > 0:
        # extrapolate alpha - floor in log-log: captures both power laws and the approach to theta
        base = floor if floor > 1e-12 else 0.0
        ly0, ly1 = math.log(y0 - base), math.log(y1 - base)
        slope = (ly1 - ly0) / (math.log(x1) - math.log(x0))
        return base + math.exp(ly1 + slope * (math.log(target) - math.log(x1)))
    return y1 + (y1 - y0) * (target - x1) / (x1 - x0)


def trace_lambda_curve(
    spec: ProblemSpec,
    lambda_range: tuple[float, float],
    steps: int,
    *,
    seed_at: str = "low",
    detect_extinction: bool = True,
    **kw,
) -> SolutionCurve:
    """Continue solutions over a geometric lambda grid with ``steps`` points.

    The seed is solved at the ``seed_at`` end ("low" or "high"); the trace
    stops early when |u'(1)| drops below LAMBDA0_TOL or no solution is
    found, in which case lambda0 is located between the last two grid values.
    """
    lo, hi = lambda_range
    if not 0 < lo < hi:
        raise ValueError(f"invalid lambda range {lambda_range}")
    if steps < 2:
        raise ValueError("need at least two continuation steps")
    grid = np.geomspace(lo, hi, steps)
    grid[0], grid[-1] = lo, hi
    if seed_at == "high":
        grid = grid[::-1]
    floor_alpha = spec.theta(0.0)
    points: list[CurvePoint] = []
    stop, lam0 = "completed", math.inf
    for lam in grid:
        lam = float(lam)
        guess = _predict([pt.parameter for pt in points], [pt.alpha for pt in points], lam, floor_alpha)
        beta = abs(points[-1].u_prime_at_one) if points else None
        try:
            sol = _solve(spec, lam, guess, beta, **kw)
        except (BracketError, IntegrationError) as exc:
            if not points:
                raise BracketError(f"no seed solution at lambda = {lam:.6g}: {exc}") from exc
            stop = f"no solution at lambda = {lam:.6g}"
            if detect_extinction:
                prev = points[-1].parameter
                res = search_lambda0(spec, (min(prev, lam), max(prev, lam)), seed=points[-1].solution, **kw)
                lam0 = res.value
                if res.solution is not None and res.value > prev:
                    points.append(_point(res.value, res.solution, spec))
                if math.isfinite(lam0):
                    stop = "lambda0"
            break
        points.append(_point(lam, sol, spec))
        if abs(sol.u_prime_at_one) < LAMBDA0_TOL and spec.f_at_zero() < 0:
            stop, lam0 = "lambda0", lam
            break
    if seed_at == "high":
        points.reverse()
    curve = SolutionCurve(spec, tuple(points), "lambda", stop, lam0)
    if len(points) >= 3:
        curve = replace(curve, shape=classify_curve(curve))
    return curve


class Lambda0Search(NamedTuple):
    value: float
    u_prime_at_one: float
    solution: RadialSolution | None
    monotone: bool
    evaluations: int


def _exists(spec, lam, seed: RadialSolution | None, **kw) -> RadialSolution | None:
    guess = seed.alpha if seed is not None else None
    beta = abs(seed.u_prime_at_one) if seed is not None else None
    try:
        if spec.n == 1:
            bracket = (beta / 4, beta * 4) if beta else None
            return solve_from_boundary(spec, lam, bracket, **kw)
        return _sweep_bracket(spec, lam, guess, **kw)
    except (BracketError, IntegrationError):
        return None


def search_lambda0(spec: ProblemSpec, lambda_bracket: tuple[float, float], seed: RadialSolution | None = None, **kw) -> Lambda0Search:
    """Bisection on lambda between a solvable lower end and the bracket top.

    Existence decides, not the slope: with f(0) = 0 the slope at the top
    can be far below LAMBDA0_TOL while a positive solution still exists.
    Returns lambda0 = inf when a solution exists at the top of the bracket.
    """
    lo, hi = lambda_bracket
    top = _exists(spec, hi, seed, **kw)
    if top is not None:
        return Lambda0Search(math.inf, top.u_prime_at_one, top, True, 1)
    low = seed if seed is not None and seed.lam == lo else _exists(spec, lo, seed, **kw)
    count = 2
    if low is None:
        raise BracketError(f"no solution at the lower end lambda = {lo:.6g}")
    slopes = [(lo, abs(low.u_prime_at_one))]
    while abs(low.u_prime_at_one) >= LAMBDA0_TOL and hi - lo > 1e-15 * hi:
        mid = math.sqrt(lo * hi) if hi / lo > 1.5 else 0.5 * (lo + hi)
        sol = _exists(spec, mid, low, **kw)
        count += 1
        if sol is None:
            hi = mid
        else:
            lo, low = mid, sol
            slopes.append((mid, abs(sol.u_prime_at_one)))
    s = [v for _, v in sorted(slopes)]
    monotone = all(b <= a for a, b in zip(s, s[1:]))
    return Lambda0Search(lo, low.u_prime_at_one, low, monotone, count)


def detect_lambda0(spec: ProblemSpec, lambda_bracket: tuple[float, float], **kw) -> float:
    """lambda0 with |u'(1, lambda0)| < LAMBDA0_TOL, or math.inf.

    Raises
    ------
    BracketError
        If |u'(1; lambda)| is not monotone along the bisection (the
        expected curve shape is violated), or no solution exists at the
        lower end.
    """
    res = search_lambda0(spec, lambda_bracket, **kw)
    if not res.monotone:
        raise BracketError(f"|u'(1; lambda)| is not monotone below lambda0 = {res.value:.12g}")
    return res.value


# homotopy ------------------------------------------------------------------------------

AUDIT_GRID = tuple(Fraction(k, 10) for k in range(11))


def homotopy_member(start: ProblemSpec, kind: str, theta: float) -> ProblemSpec:
    """Problem at parameter theta of the coefficient-power or linear-term family."""
    nl = start.nonlinearity
    if kind == "coefficientPower":
        if isinstance(nl, PureB):
            return start.with_nonlinearity(PureB(nl.b, nl.q, b_power=theta))
        if isinstance(nl, ModelAB):
            return start.with_nonlinearity(replace(nl, b_power=theta))
    elif kind == "linearTermSwitch":
        if isinstance(nl, ModelAB):
            return start.with_nonlinearity(replace(nl, a_scale=theta))
    else:
        raise ValueError(f"unknown homotopy kind {kind!r}")
    raise ValueError(f"homotopy {kind} is not defined for {type(nl).__name__}")


def trace_homotopy(
    start: ProblemSpec,
    kind: str,
    steps: int,
    *,
    reverse: bool = False,
    seed_alpha: float | None = None,
    audit: bool = True,
    margin_tol: float = 1e-6,
    **kw,
) -> SolutionCurve:
    """Continue the solution over theta in [0, 1] (or [1, 0] with ``reverse``).

    Raises
    ------
    HomotopyError
        If the hypothesis audit fails at a grid value of theta, no solution
        is found, or the degeneracy margin collapses.
    """
    if audit:
        for th in AUDIT_GRID:
            report = check_model_hypotheses(homotopy_member(start, kind, th))
            if not report.passed:
                names = ", ".join(e.name for e in report.failures)
                raise HomotopyError(f"hypotheses fail at theta = {th}: {names}", float(th))
    thetas = np.linspace(0.0, 1.0, steps + 1)
    if reverse:
        thetas = thetas[::-1]
    points: list[CurvePoint] = []
    for th in thetas:
        th = float(th)
        spec = homotopy_member(start, kind, th)
        if points:
            guess = _predict_linear([pt.parameter for pt in points], [pt.alpha for pt in points], th)
        else:
            guess = seed_alpha
        try:
            sol = _sweep_bracket(spec, spec.lam, guess, **kw)
        except (BracketError, IntegrationError) as exc:
            raise HomotopyError(f"continuation lost the solution at theta = {th}: {exc}", th) from exc
        margin, degenerate = is_degenerate(sol, margin_tol)
        if degenerate:
            raise HomotopyError(f"degeneracy margin collapsed to {margin:.3g} at theta = {th}", th)
        points.append(_point(th, sol, spec))
    if reverse:
        points.reverse()
    return SolutionCurve(start, tuple(points), "theta", "completed")


def _predict_linear(params, alphas, target):
    if len(params) < 2:
        return alphas[-1]
    x0, x1 = params[-2:]
    y0, y1 = alphas[-2:]
    return y1 + (y1 - y0) * (target - x1) / (x1 - x0)


# classification ----------------------------------------------------------------------------


def _ordering_key(curve: SolutionCurve) -> np.ndarray:
    levels = [pt.energy_level for pt in curve.points]
    if all(lv is not None for lv in levels):
        return np.array(levels)
    return curve.alphas


def classify_curve(curve: SolutionCurve) -> CurveShape:
    """Fold count, alpha monotonicity, lambda0 verdict and margin behaviour of a traced curve.

    Along 1D autonomous curves the ordering uses the energy level F(alpha),
    which is monotone in alpha above theta.
    """
    if len(curve.points) < 3:
        raise ValueError("classification needs at least three curve points")
    par = curve.parameters
    key = _ordering_key(curve)
    d = np.diff(key) / np.diff(par)
    signs = np.sign(d)
    folds = int(np.sum(signs[1:] * signs[:-1] < 0))
    monotone = bool(np.all(signs == signs[0]) and signs[0] != 0)
    margins = curve.margins
    margin_sign = bool(np.all(np.sign(margins) == np.sign(margins[0])))
    med = float(np.median(np.abs(margins)))
    floor_ratio = float(np.min(np.abs(margins)) / med) if med > 0 else 0.0
    alphas = curve.alphas
    lam0 = curve.lambda0
    template = "unclassified"
    if curve.parameter_kind == "lambda":
        f0 = curve.spec.f_at_zero()
        if f0 < 0:
            template = "f(0)<0" if math.isfinite(lam0) else "mismatch: f(0)<0 without finite lambda0"
        elif f0 == 0:
            template = "f(0)=0" if math.isinf(lam0) else "mismatch: f(0)=0 with finite lambda0"
    k = min(4, len(par))
    with np.errstate(divide="ignore", invalid="ignore"):
        trend = float(np.polyfit(np.log(par[:k]), np.log(alphas[:k]), 1)[0]) if np.all(par[:k] > 0) else math.nan
    return CurveShape(folds, lam0, monotone, float(alphas[0]), float(alphas[-1]), margin_sign, floor_ratio, template, trend)
