"""Initial-value integration of the radial problem and its linearization.

The radial equation is integrated in divergence variables

    u' = phi^{-1}(v / r^(n-1)),      v' = -lam r^(n-1) f(r, u),

with ``v = r^(n-1) phi(u')``, so the degenerate coefficient phi'(u') never
appears in the primary system.  The linearized problem uses

    w' = z u' / ((p-1) v),           z' = -lam r^(n-1) f_u(r, u) w,

with ``z = r^(n-1) phi'(u') w'``; the coefficients come from the dense output
of the parent trajectory.  Both start at r = eps from a frontier series.

The stepping is scipy's DOP853 (embedded 8(5,3) pair with 7th order dense
output); events are located by root refinement on the dense output.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DegenerateStartError, DomainError, IntegrationError
from .model import ProblemSpec, phi_inverse

__all__ = [
    "DEFAULT_EPS",
    "DEFAULT_RTOL",
    "DEFAULT_ATOL",
    "Startup",
    "Event",
    "RadialTrajectory",
    "LinearizedTrajectory",
    "series_startup",
    "integrate_radial",
    "integrate_linearized",
    "radial_rhs",
]

DEFAULT_EPS = 1e-6
DEFAULT_RTOL = 1e-10
DEFAULT_ATOL = 1e-12

FIRST_ZERO = "firstZeroOfU"
ZERO_OF_UPRIME = "zeroOfUPrime"


class Startup(NamedTuple):
    u: float
    u_prime: float
    v: float
    w: float
    w_prime: float
    z: float


class Event(NamedTuple):
    kind: str
    r: float


def series_startup(spec: ProblemSpec, lam: float, alpha: float, eps: float = DEFAULT_EPS) -> Startup:
    """Frontier values at r = eps of the solution with u(0) = alpha.

    Integrating the equation once from the origin gives, with
    ``c = lam f(0, alpha) / n`` and ``k = p/(p-1)``,

        u(eps) = alpha - sign(c) (p-1)/p |c|^(1/(p-1)) eps^k
        v(eps) = -lam [f0 eps^n/n + f_r0 eps^(n+1)/(n+1) + f_u0 du eps^(n+k)/(n+k)]
        z(eps) = -lam f_u0 eps^n / n
        w(eps) = 1 - (1/p) |c|^(1/(p-1)) (f_u0/|f0|) eps^k

    where ``du`` is the coefficient of eps^k in u(eps) - alpha.
    """
    if not 0 < eps <= 1e-3:
        raise DomainError(f"startup offset must lie in (0, 1e-3], got {eps}")
    p, n = spec.p, spec.n
    vals = spec.evaluate(0.0, alpha)
    f0, fu0, fr0 = vals.f, vals.f_u, vals.f_r
    if f0 == 0.0:
        raise DegenerateStartError(
            f"f(0, alpha) = 0 at alpha = {alpha}: the solution through this amplitude is constant"
        )
    k = p / (p - 1.0)
    c = lam * f0 / n
    mag = abs(c) ** (1.0 / (p - 1.0))
    du = -math.copysign(1.0, c) * (p - 1.0) / p * mag
    u = alpha + du * eps**k
    v = -lam * (f0 * eps**n / n + fr0 * eps ** (n + 1) / (n + 1) + fu0 * du * eps ** (n + k) / (n + k))
    u_prime = phi_inverse(v / eps ** (n - 1), p)
    z = -lam * fu0 * eps**n / n
    w = 1.0 - mag * (fu0 / abs(f0)) * eps**k / p
    w_prime = z * u_prime / ((p - 1.0) * v)
    return Startup(u, u_prime, v, w, w_prime, z)


def radial_rhs(spec: ProblemSpec, lam: float):
    """Right-hand side (r, (u, v)) -> (u', v') of the divergence system."""
    p, m = spec.p, spec.n - 1
    f = spec.kernel().f
    inv = 1.0 / (p - 1.0)

    def rhs(r, y):
        u, v = y
        rm = r**m if m else 1.0
        s = v / rm
        up = math.copysign(abs(s) ** inv, s) if s else 0.0
        return (up, -lam * rm * f(r, u))

    return rhs


def _freeze(*arrays):
    for a in arrays:
        a.setflags(write=False)


@dataclass(frozen=True, eq=False)
class RadialTrajectory:
    """Discretized path (r, u, u', v) from the origin.

    ``r`` starts at the startup offset for trajectories integrated from the
    origin; the values at r = 0 are (alpha, 0, 0) by construction.
    ``dense(r)`` returns (u, v) at arbitrary radii inside the grid.
    """

    spec: ProblemSpec
    lam: float
    alpha: float
    r: np.ndarray
    u: np.ndarray
    u_prime: np.ndarray
    v: np.ndarray
    events: tuple[Event, ...]
    dense: object = field(repr=False)
    rtol: float = DEFAULT_RTOL
    atol: float = DEFAULT_ATOL
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        _freeze(self.r, self.u, self.u_prime, self.v)

    @property
    def r_end(self) -> float:
        return float(self.r[-1])

    @property
    def first_zero(self) -> float | None:
        for ev in self.events:
            if ev.kind == FIRST_ZERO:
                return ev.r
        return None

    @property
    def error_estimate(self) -> float:
        """Nominal global error scale rtol * max|u| + atol."""
        return self.rtol * float(np.max(np.abs(self.u))) + self.atol

    def evaluate(self, r):
        """(u, u', v) at radius/radii ``r`` from the dense output."""
        r = np.asarray(r, dtype=float)
        y = self.dense(r)
        u, v = y[0], y[1]
        m = self.spec.n - 1
        with np.errstate(divide="ignore", invalid="ignore"):
            up = phi_inverse(v / r**m if m else v, self.spec.p)
        return u, up, v

    def energy(self, r=None):
        """E = (p-1)/p |u'|^p + lam F(r, u) at the nodes (or at ``r``)."""
        p = self.spec.p
        if r is None:
            r, u, up = self.r, self.u, self.u_prime
        else:
            u, up, _ = self.evaluate(r)
        F = np.array([self.spec.evaluate(float(ri), max(float(ui), 0.0)).F for ri, ui in zip(np.atleast_1d(r), np.atleast_1d(u))])
        return (p - 1.0) / p * np.abs(up) ** p + self.lam * F


@dataclass(frozen=True, eq=False)
class LinearizedTrajectory:
    """Discretized (r, w, w', z) on the parent grid; ``margin`` is w(r_end)."""

    r: np.ndarray
    w: np.ndarray
    w_prime: np.ndarray
    z: np.ndarray
    dense: object = field(repr=False)
    w0: float = 1.0

    def __post_init__(self):
        _freeze(self.r, self.w, self.w_prime, self.z)

    @property
    def margin(self) -> float:
        return float(self.w[-1])

    @property
    def max_abs_w(self) -> float:
        return float(np.max(np.abs(self.w)))


def _shoot(
    spec: ProblemSpec,
    lam: float,
    alpha: float,
    r_end: float,
    *,
    eps: float,
    rtol: float,
    atol: float,
    stop_at_zero: bool,
    stop_at_turn: bool = False,
) -> RadialTrajectory:
    start = series_startup(spec, lam, alpha, eps)
    flags = []
    if start.u_prime > 0:
        flags.append("increasing_start")
    zero = lambda r, y: y[0]  # noqa: E731
    zero.direction, zero.terminal = -1.0, stop_at_zero
    turn = lambda r, y: y[1]  # noqa: E731
    turn.direction, turn.terminal = 1.0, stop_at_turn
    # v ~ r^n near the origin: scale its absolute tolerance accordingly
    atol_vec = [atol, atol * eps ** (spec.n - 1)]
    sol = solve_ivp(
        radial_rhs(spec, lam),
        (eps, r_end),
        [start.u, start.v],
        method="DOP853",
        rtol=rtol,
        atol=atol_vec,
        dense_output=True,
        events=[zero, turn],
    )
    if sol.status == -1:
        raise IntegrationError(f"radial integration failed at r = {sol.t[-1]:.6g}: {sol.message}", float(sol.t[-1]))
    events = [Event(FIRST_ZERO, float(t)) for t in sol.t_events[0][:1]]
    events += [Event(ZERO_OF_UPRIME, float(t)) for t in sol.t_events[1]]
    events.sort(key=lambda e: e.r)
    if any(e.kind == ZERO_OF_UPRIME for e in events):
        flags.append("u_prime_sign_change")
    r = np.array(sol.t, dtype=float)
    u, v = np.array(sol.y[0]), np.array(sol.y[1])
    m = spec.n - 1
    u_prime = phi_inverse(v / r**m if m else v, spec.p)
    return RadialTrajectory(
        spec, lam, alpha, r, u, np.asarray(u_prime, dtype=float), v, tuple(events), sol.sol, rtol, atol, tuple(flags)
    )


def integrate_radial(
    spec: ProblemSpec,
    lam: float,
    alpha: float,
    r_end: float = 1.0,
    *,
    eps: float = DEFAULT_EPS,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
    stop_at_zero: bool = True,
) -> RadialTrajectory:
    """Integrate the radial IVP with u(0) = alpha, u'(0) = 0 out to ``r_end``.

    Integration stops at the first zero of u unless ``stop_at_zero`` is
    False; zeros of u' are recorded as events and flagged.

    Raises
    ------
    DomainError
        For alpha <= 0, lam <= 0 or r_end outside (0, 1].
    DegenerateStartError
        If f(0, alpha) = 0.
    IntegrationError
        On step-size underflow, with the radius reached.
    """
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    if not lam > 0:
        raise DomainError(f"lambda must be positive, got {lam}")
    if not 0 < r_end <= 1:
        raise DomainError(f"r_end must lie in (0, 1], got {r_end}")
    return _shoot(spec, lam, alpha, r_end, eps=eps, rtol=rtol, atol=atol, stop_at_zero=stop_at_zero)


def integrate_linearized(
    spec: ProblemSpec,
    lam: float,
    parent: RadialTrajectory,
    *,
    w0: float = 1.0,
    eps: float = DEFAULT_EPS,
    rtol: float = DEFAULT_RTOL,
    atol: float = DEFAULT_ATOL,
) -> LinearizedTrajectory:
    """Integrate the linearized problem along ``parent`` with w(0) = w0, z(0) = 0.

    Raises
    ------
    IntegrationError
        If u' vanishes in the interior (the coefficient phi'(u') degenerates).
    """
    p, n = spec.p, spec.n
    m = n - 1
    f_u = spec.kernel().f_u
    dense = parent.dense
    pm1 = p - 1.0

    def rhs(r, y):
        w, z = y
        u, v = dense(r)
        if v == 0.0:
            raise IntegrationError(f"u' vanishes at interior radius r = {r:.6g}", r)
        rm = r**m if m else 1.0
        s = v / rm
        up = math.copysign(abs(s) ** (1.0 / pm1), s)
        return (z * up / (pm1 * v), -lam * rm * f_u(r, u) * w)

    start = series_startup(spec, lam, parent.alpha, eps)
    r_end = parent.r_end
    t_eval = np.array(parent.r[parent.r >= eps], dtype=float)
    if t_eval.size == 0 or t_eval[0] > eps:
        t_eval = np.concatenate([[eps], t_eval])
    sol = solve_ivp(
        rhs,
        (eps, r_end),
        [w0 * start.w, w0 * start.z],
        method="DOP853",
        rtol=rtol,
        atol=[atol * max(abs(w0), 1e-300), atol * max(abs(w0), 1e-300) * eps ** m],
        dense_output=True,
        t_eval=t_eval,
    )
    if sol.status == -1:
        raise IntegrationError(f"linearized integration failed at r = {sol.t[-1]:.6g}: {sol.message}", float(sol.t[-1]))
    r, w, z = np.array(sol.t), np.array(sol.y[0]), np.array(sol.y[1])
    _, up, v = parent.evaluate(r)
    with np.errstate(divide="ignore", invalid="ignore"):
        w_prime = np.where(v != 0, z * up / (pm1 * v), 0.0)
    return LinearizedTrajectory(r, w, np.asarray(w_prime, dtype=float), z, sol.sol, w0)
