"""Quadrature oracle for lambda(alpha) in the one-dimensional autonomous problem.

Energy conservation on the half interval gives

    lambda^(1/p) = int_0^alpha [ p/(p-1) (F(alpha) - F(s)) ]^(-1/p) ds.

With alpha - s = sigma^k, k = p/(p-1), the (alpha - s)^(-1/p) endpoint
singularity cancels against ds = k sigma^(k-1) dsigma and the integrand
becomes bounded.
"""
from __future__ import annotations

import math
import warnings
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import AdmissibilityError
from .model import Autonomous1D, LinearTest, ModelAB, ProblemSpec, PureB
from .polynomial import Polynomial, positive_on

__all__ = ["TimeMapResult", "time_map_lambda", "critical_points", "THETA_GAP"]

THETA_GAP = 1e-9


class TimeMapResult(NamedTuple):
    alpha: float
    lam: float
    integrand_samples: list
    error_estimate: float


def _power_terms(nl, p: float) -> list[tuple[float, float]]:
    """Primitive F(s) = sum c s^m as (c, m) pairs, m > 0."""
    if isinstance(nl, LinearTest):
        return [(0.5, 2.0)]
    if isinstance(nl, Autonomous1D):
        return [(float(c), float(m)) for m, c in enumerate(nl.primitive.coeffs) if c != 0]
    if isinstance(nl, PureB):
        nl = nl.as_model_ab()
    if isinstance(nl, ModelAB):
        if not nl.is_autonomous:
            raise AdmissibilityError("time map needs an autonomous nonlinearity")
        terms = []
        a = nl.a_scale * float(nl.a.coeffs[0]) if nl.a_scale else 0.0
        if a:
            terms.append((-a / p, p))
        bb = float(nl.b.coeffs[0]) ** nl.b_power
        terms.append((bb / (nl.q + 1), nl.q + 1))
        return terms
    raise AdmissibilityError(f"no time map for {type(nl).__name__}")


def critical_points(f, p: float = 2.0) -> tuple[float, float]:
    """(gamma, theta): sign change of f and zero of F above it; (0, 0) when f >= 0."""
    spec = f if isinstance(f, ProblemSpec) else ProblemSpec(p, 1, f)
    return spec.gamma(0.0), spec.theta(0.0)


def _check_dominated(nl, p, alpha, terms):
    """Require F(alpha) > F(s) on [0, alpha) and f(alpha) != 0."""
    f_alpha = sum(c * m * alpha ** (m - 1) for c, m in terms)
    if f_alpha == 0:
        raise AdmissibilityError(f"f(alpha) = 0 at alpha = {alpha}: the time map is singular")
    _, theta = critical_points(nl, p)
    if theta > 0 and abs(alpha - theta) <= THETA_GAP * theta:
        raise AdmissibilityError(f"alpha = {alpha} is within {THETA_GAP:g} of theta = {theta}: F(alpha) = 0")
    if isinstance(nl, Autonomous1D):
        prim = nl.primitive
        a = Fraction(alpha)
        gap = Polynomial([prim.exact(a)]) - prim
        ok, witness = positive_on(gap, 0, a)
        if not ok or prim.exact(a) <= 0:
            raise AdmissibilityError(
                f"F(alpha) does not dominate F on [0, alpha) at alpha = {alpha} (witness s = {witness})"
            )
    elif f_alpha < 0 or sum(c * alpha**m for c, m in terms) <= 0:
        raise AdmissibilityError(f"F(alpha) <= F(s) for some s < alpha at alpha = {alpha}")
    return f_alpha


def _make_integrand(terms, p, alpha, f_alpha):
    k = p / (p - 1.0)
    c = k  # p/(p-1) prefactor of the energy gap
    h0 = k * (c * f_alpha) ** (-1.0 / p)

    def gap(t):
        # F(alpha) - F(alpha - t), summed termwise without cancellation
        x = -t / alpha
        return sum(cm * alpha**m * -math.expm1(m * math.log1p(x)) if x > -1 else cm * alpha**m for cm, m in terms)

    def h(sigma):
        if sigma <= 0.0:
            return h0
        t = sigma**k
        g = gap(t)
        if g <= 0.0:
            return h0
        return k * math.exp((k - 1.0) * math.log(sigma) - math.log(c * g) / p)

    return h, k


def _gauss_panels(h, upper, nodes):
    x, wts = np.polynomial.legendre.leggauss(16)
    panels = max(1, nodes // 16)
    uniform = np.linspace(0.0, upper, panels + 1)
    step = uniform[1]
    # geometric layers at both ends: sigma^k is non-smooth at 0 and the
    # integrand peaks near s = 0 when alpha is close to theta
    low = [step * 0.25**j for j in range(12, 0, -1)]
    high = [upper - step * 0.25**j for j in range(1, 13)]
    edges = [0.0] + low + list(uniform[1:-1]) + high + [upper]
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        total += half * sum(w * h(mid + half * xi) for xi, w in zip(x, wts))
    return total


def time_map_lambda(f, p: float, alpha: float, nodes: int | None = None) -> TimeMapResult:
    """lambda(alpha) for the n = 1 autonomous problem by quadrature.

    ``nodes`` selects a fixed graded Gauss-Legendre rule with that many
    points instead of adaptive quadrature.

    Raises
    ------
    AdmissibilityError
        If F(alpha) <= F(s) for some s in [0, alpha), alpha is within
        THETA_GAP of theta, or f(alpha) = 0.
    """
    if isinstance(f, ProblemSpec):
        f = f.nonlinearity
    if not alpha > 0:
        raise AdmissibilityError(f"alpha must be positive, got {alpha}")
    terms = _power_terms(f, p)
    f_alpha = _check_dominated(f, p, alpha, terms)
    h, k = _make_integrand(terms, p, alpha, f_alpha)
    upper = alpha ** (1.0 / k)
    if nodes is None:
        # near theta the integrand peaks at s = 0 on a scale set by F(alpha);
        # decade breakpoints in s let the adaptive rule find it
        breaks = sorted({(alpha - alpha * 10.0**-j) ** (1.0 / k) for j in range(1, 15)})
        with warnings.catch_warnings():
            # quad's own abserr is reported as the error estimate instead
            warnings.simplefilter("ignore", IntegrationWarning)
            value, abserr = quad(h, 0.0, upper, epsabs=0.0, epsrel=1e-12, limit=400, points=breaks)
        rel = abserr / value
    else:
        value = _gauss_panels(h, upper, nodes)
        half = _gauss_panels(h, upper, max(16, nodes // 2))
        rel = abs(value - half) / value
    samples = [(float(alpha - s**k), h(s)) for s in np.linspace(0.0, upper, 9)]
    return TimeMapResult(alpha, value**p, samples, p * rel)
