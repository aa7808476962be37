"""Shooting solvers for the radial Dirichlet problem.

Center shooting searches the amplitude alpha = u(0) for a zero of the miss
distance (u(1) if the trajectory stays positive on [0, 1], otherwise minus
the radius deficit 1 - R at the first zero R).  For autonomous f the
scaling solver integrates once at lam = 1 and rescales.  For n = 1 a
boundary shooter searches the slope beta = -u'(1) instead; it resolves
solutions whose amplitude is exponentially close to theta, where center
shooting runs out of floating-point resolution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import AdmissibilityError, BracketError, IntegrationError
from .ivp import (
    DEFAULT_ATOL,
    DEFAULT_EPS,
    DEFAULT_RTOL,
    LinearizedTrajectory,
    RadialTrajectory,
    _shoot,
    integrate_linearized,
    radial_rhs,
)
from .model import ProblemSpec, phi, phi_inverse

__all__ = [
    "BOUNDARY_TOL",
    "RadialSolution",
    "miss_distance",
    "default_alpha_bracket",
    "solve_at_lambda",
    "solve_autonomous_by_scaling",
    "solve_from_boundary",
    "is_degenerate",
]

BOUNDARY_TOL = 1e-9
ROOT_TOL = 1e-13
SECANT_SWITCH = 1e-3


@dataclass(frozen=True, eq=False)
class RadialSolution:
    trajectory: RadialTrajectory
    lam: float
    alpha: float
    u_prime_at_one: float
    linearized: LinearizedTrajectory | None
    method: str = "center"
    flags: tuple[str, ...] = ()
    extras: dict = field(default_factory=dict, repr=False)

    @property
    def spec(self) -> ProblemSpec:
        return self.trajectory.spec

    @property
    def degeneracy_margin(self) -> float:
        return self.linearized.margin if self.linearized is not None else math.nan

    @property
    def u_at_one(self) -> float:
        return float(self.trajectory.u[-1])


def miss_distance(spec, lam, alpha, *, eps=DEFAULT_EPS, rtol=DEFAULT_RTOL, atol=DEFAULT_ATOL):
    """Signed boundary miss of the trajectory from ``alpha``.

    Returns ``(miss, trajectory)`` with miss = u(1) > 0 when u stays positive
    on [0, 1] and miss = -(1 - R) < 0 when u first vanishes at R < 1.
    """
    tr = _shoot(spec, lam, alpha, 1.0, eps=eps, rtol=rtol, atol=atol, stop_at_zero=True)
    R = tr.first_zero
    if R is not None and R < 1.0:
        return -(1.0 - R), tr
    return float(tr.u[-1]), tr


def default_alpha_bracket(spec: ProblemSpec) -> tuple[float, float]:
    """[theta (1 + 1e-3), 50 theta] for sign-changing f, [1e-3, 50] otherwise."""
    theta = spec.theta(0.0)
    if theta > 0:
        return theta * (1 + 1e-3), 50.0 * theta
    return 1e-3, 50.0


def _find_root(g, lo, hi, glo, ghi, *, root_tol, x_rel=1e-15):
    """Bisection down to relative width SECANT_SWITCH, then Illinois steps.

    Returns (x_best, g_best, samples) where samples maps x -> g(x).
    """
    samples = {lo: glo, hi: ghi}

    def ev(x):
        gx = g(x)
        samples[x] = gx
        return gx

    def done(a, b):
        return b - a <= x_rel * max(abs(a), abs(b), 1e-300)

    while hi - lo > SECANT_SWITCH * max(abs(lo), abs(hi)):
        mid = 0.5 * (lo + hi)
        gm = ev(mid)
        if abs(gm) <= root_tol:
            return mid, gm, samples
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
    side = 0
    for _ in range(200):
        if done(lo, hi):
            break
        x = hi - ghi * (hi - lo) / (ghi - glo)
        if not lo < x < hi:
            x = 0.5 * (lo + hi)
        gx = ev(x)
        if abs(gx) <= root_tol:
            return x, gx, samples
        if (gx > 0) == (glo > 0):
            lo, glo = x, gx
            if side == -1:
                ghi *= 0.5
            side = -1
        else:
            hi, ghi = x, gx
            if side == 1:
                glo *= 0.5
            side = 1
    best = min(samples, key=lambda x: abs(samples[x]))
    return best, samples[best], samples


def _monotone(samples: dict, root: float, window: float = 0.05, noise: float = 1e-9) -> bool:
    """Miss samples within ``window`` (relative) of ``root`` are monotone up to ``noise``.

    Far from the root the miss may legitimately rise and fall, so only the
    neighbourhood the root finder resolved is judged.
    """
    xs = [x for x in sorted(samples) if abs(x - root) <= window * max(abs(root), 1e-300)]
    d = np.diff([samples[x] for x in xs])
    d = d[np.abs(d) > noise]
    return bool(np.all(d <= 0) or np.all(d >= 0))


def _attach(spec, lam, trajectory, method, flags, *, with_linearized, eps, rtol, atol, extras=None):
    lin = integrate_linearized(spec, lam, trajectory, eps=eps, rtol=rtol, atol=atol) if with_linearized else None
    return RadialSolution(
        trajectory, lam, trajectory.alpha, float(trajectory.u_prime[-1]), lin, method, tuple(flags), extras or {}
    )


def solve_at_lambda(
    spec: ProblemSpec,
    lam: float | None = None,
    alpha_bracket: tuple[float, float] | None = None,
    *,
    eps: float = DEFAULT_EPS,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    boundary_tol: float = BOUNDARY_TOL,
    root_tol: float = ROOT_TOL,
    with_linearized: bool = True,
) -> RadialSolution:
    """Solve the BVP at fixed ``lam`` by shooting on alpha inside ``alpha_bracket``.

    Raises
    ------
    BracketError
        If the miss distance has the same sign at both ends, or if the sign
        change inside the bracket is a jump rather than a genuine root (the
        miss at the converged amplitude exceeds ``boundary_tol``).
    """
    lam = spec.lam if lam is None else lam
    lo, hi = alpha_bracket if alpha_bracket is not None else default_alpha_bracket(spec)
    if not 0 < lo < hi:
        raise BracketError(f"invalid amplitude bracket ({lo}, {hi})")

    def g(a):
        return miss_distance(spec, lam, a, eps=eps, rtol=rtol, atol=atol)[0]

    glo, ghi = g(lo), g(hi)
    if glo == 0 or ghi == 0:
        alpha = lo if glo == 0 else hi
        samples = {lo: glo, hi: ghi}
    elif (glo > 0) == (ghi > 0):
        raise BracketError(
            f"alpha bracket [{lo:.6g}, {hi:.6g}] has no sign change of the miss distance at lambda = {lam:.6g} "
            f"(miss {glo:.3g}, {ghi:.3g})"
        )
    else:
        alpha, _, samples = _find_root(g, lo, hi, glo, ghi, root_tol=root_tol)
    flags = [] if _monotone(samples, alpha) else ["multiplicity_risk"]
    tr = _shoot(spec, lam, alpha, 1.0, eps=eps, rtol=rtol, atol=atol, stop_at_zero=False)
    if abs(tr.u[-1]) > boundary_tol:
        raise BracketError(
            f"miss distance jumps across alpha = {alpha:.15g} at lambda = {lam:.6g} (|u(1)| = {abs(tr.u[-1]):.3g}); "
            "no positive solution resolved in the bracket"
        )
    flags.extend(tr.flags)
    return _attach(spec, lam, tr, "center", flags, with_linearized=with_linearized, eps=eps, rtol=rtol, atol=atol)


def solve_autonomous_by_scaling(
    spec: ProblemSpec,
    alpha: float,
    *,
    eps: float = DEFAULT_EPS,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    r_max: float = 1e8,
    with_linearized: bool = True,
) -> tuple[float, RadialSolution]:
    """Integrate at lam = 1 to the first zero R, return lam = R^p and the rescaled solution.

    If u solves the equation with lam = 1 then U(r) = u(R r) satisfies
    phi(U')' + (n-1)/r phi(U') + R^p f(U) = 0, hence lam = R^p.

    Raises
    ------
    AdmissibilityError
        If f is not autonomous, or alpha <= theta (F(alpha) <= 0).
    IntegrationError
        If the lam = 1 trajectory turns before reaching zero.
    """
    if not spec.is_autonomous:
        raise AdmissibilityError("scaling solver needs an autonomous nonlinearity")
    theta = spec.theta(0.0)
    if theta > 0 and alpha <= theta * (1 + 1e-9):
        raise AdmissibilityError(
            f"alpha = {alpha} does not exceed theta = {theta}: F(alpha) <= 0 and the trajectory never reaches zero"
        )
    tr = _shoot(spec, 1.0, alpha, r_max, eps=eps, rtol=rtol, atol=atol, stop_at_zero=True, stop_at_turn=True)
    R = tr.first_zero
    if R is None:
        raise IntegrationError(f"trajectory from alpha = {alpha} does not reach zero before r = {tr.r_end:.6g}", tr.r_end)
    lam = R**spec.p
    sol_tr = _shoot(spec, lam, alpha, 1.0, eps=eps * min(1.0, 1.0 / R), rtol=rtol, atol=atol, stop_at_zero=False)
    if abs(sol_tr.u[-1]) > 1e-8:
        raise IntegrationError(f"rescaled solution misses the boundary by {sol_tr.u[-1]:.3g}", 1.0)
    sol = _attach(
        spec,
        lam,
        sol_tr,
        "scaling",
        sol_tr.flags,
        with_linearized=with_linearized,
        eps=eps * min(1.0, 1.0 / R),
        rtol=rtol,
        atol=atol,
        extras={"R": R},
    )
    return lam, sol


def _boundary_atol(beta, p, rtol):
    return [max(1e-300, 1e-3 * rtol * min(1.0, beta)), max(1e-300, 1e-3 * rtol * min(1.0, beta ** (p - 1)))]


def _shoot_inward(spec, lam, beta, *, rtol, stop_at_turn, dense=False):
    p = spec.p
    turn = lambda r, y: y[1]  # noqa: E731
    turn.terminal = stop_at_turn
    return solve_ivp(
        radial_rhs(spec, lam),
        (1.0, 0.0),
        [0.0, phi(-beta, p)],
        method="DOP853",
        rtol=rtol,
        atol=_boundary_atol(beta, p, rtol),
        dense_output=dense,
        events=[turn] if stop_at_turn else None,
    )


def _boundary_miss(spec, lam, beta, rtol):
    sol = _shoot_inward(spec, lam, beta, rtol=rtol, stop_at_turn=True)
    if sol.status == -1:
        raise IntegrationError(f"inward integration failed at r = {sol.t[-1]:.6g}: {sol.message}", float(sol.t[-1]))
    if sol.t_events[0].size:
        return float(sol.t_events[0][0])
    return float(sol.y[1][-1])


def solve_from_boundary(
    spec: ProblemSpec,
    lam: float | None = None,
    slope_bracket: tuple[float, float] | None = None,
    *,
    eps: float = DEFAULT_EPS,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    root_tol: float = 1e-14,
    with_linearized: bool = True,
) -> RadialSolution:
    """Solve the n = 1 problem by shooting inward from r = 1 on beta = -u'(1) > 0.

    The miss is phi(u'(0)) when the inward trajectory reaches the origin
    still rising, and the radius of the turning point otherwise; its zero
    gives u'(0) = 0.  The search runs in log(beta).

    Raises
    ------
    BracketError
        If no slope in the (automatically expanded) bracket changes the
        sign of the miss, i.e. no positive solution exists.
    """
    if spec.n != 1:
        raise AdmissibilityError("boundary shooting is implemented for n = 1 only")
    lam = spec.lam if lam is None else lam

    def g(x):
        return _boundary_miss(spec, lam, math.exp(x), rtol)

    # small slopes reach the origin still rising (g < 0), large ones turn first (g > 0);
    # expand outward from the given bracket (or from beta = 1) until g changes sign
    if slope_bracket is not None:
        lo, hi = (math.log(b) for b in slope_bracket)
        glo, ghi = g(lo), g(hi)
        step = max(hi - lo, 0.5)
    else:
        lo = hi = 0.0
        glo = ghi = g(0.0)
        step = 1.0
    while (glo > 0) == (ghi > 0):
        if glo > 0:
            lo -= step
            glo = g(lo)
        else:
            hi += step
            ghi = g(hi)
        step *= 2
        if lo < -138 or hi > 138:
            break
    if (glo > 0) == (ghi > 0) or glo == 0 and ghi == 0:
        raise BracketError(
            f"no slope beta = -u'(1) gives a positive solution at lambda = {lam:.6g} "
            f"(searched beta in [{math.exp(lo):.3g}, {math.exp(hi):.3g}])"
        )
    if glo > 0:  # orient so that g increases from negative to positive
        lo, hi, glo, ghi = hi, lo, ghi, glo
    a, b = min(lo, hi), max(lo, hi)
    ga, gb = (glo, ghi) if lo < hi else (ghi, glo)
    x, _, samples = _find_root(g, a, b, ga, gb, root_tol=root_tol, x_rel=1e-16)
    beta = math.exp(x)
    flags = [] if _monotone(samples, x) else ["multiplicity_risk"]
    return _trajectory_from_boundary(
        spec, lam, beta, flags, eps=eps, rtol=rtol, atol=atol, with_linearized=with_linearized
    )


def _trajectory_from_boundary(spec, lam, beta, flags, *, eps, rtol, atol, with_linearized):
    sol = _shoot_inward(spec, lam, beta, rtol=rtol, stop_at_turn=False, dense=True)
    if sol.status == -1:
        raise IntegrationError(f"inward integration failed at r = {sol.t[-1]:.6g}: {sol.message}", float(sol.t[-1]))
    nodes = np.array(sol.t[::-1])
    r = np.concatenate([[eps], nodes[nodes > eps]])
    y = sol.sol(r)
    u, v = np.array(y[0]), np.array(y[1])
    u[-1], v[-1] = 0.0, phi(-beta, spec.p)
    alpha = float(sol.sol(0.0)[0])
    if spec.is_autonomous:
        alpha = _alpha_from_energy(spec, lam, beta, alpha)
    u_prime = np.asarray(phi_inverse(v, spec.p), dtype=float)
    tr = RadialTrajectory(spec, lam, alpha, r, u, u_prime, v, (), sol.sol, rtol, atol, ())
    if np.any(np.diff(u) > 0):
        flags = list(flags) + ["u_prime_sign_change"]
    v0 = float(sol.sol(0.0)[1])
    return _attach(
        spec, lam, tr, "boundary", flags, with_linearized=with_linearized, eps=eps, rtol=rtol, atol=atol,
        extras={"beta": beta, "u_prime_at_origin": float(phi_inverse(v0, spec.p))},
    )


def _alpha_from_energy(spec, lam, beta, alpha):
    """Solve lam F(alpha) = (p-1)/p beta^p by Newton from the integrated u(0).

    Energy is conserved for n = 1 autonomous problems, so this recovers
    alpha to machine precision even when it sits within 1e-12 of theta.
    """
    p = spec.p
    level = (p - 1) / p * beta**p / lam
    for _ in range(8):
        vals = spec.evaluate(0.0, alpha)
        if vals.f <= 0:
            break
        step = (vals.F - level) / vals.f
        alpha -= step
        if abs(step) <= 1e-16 * alpha:
            break
    return alpha


def is_degenerate(solution: RadialSolution, tolerance: float = 1e-6) -> tuple[float, bool]:
    """(w(1), |w(1)| < tolerance * max|w|) for the normalized linearization."""
    lin = solution.linearized
    if lin is None:
        lin = integrate_linearized(solution.spec, solution.lam, solution.trajectory)
    margin = lin.margin
    return margin, abs(margin) < tolerance * lin.max_abs_w
