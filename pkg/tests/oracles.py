"""Closed-form reference values used across the test suite.

Everything here is computed independently of the solver: elementary
functions, Beta integrals, or exact rational arithmetic.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
from scipy.integrate import quad
from scipy.special import beta as beta_fn

PI2_OVER_4 = math.pi**2 / 4
SQRT2 = math.sqrt(2.0)


def cos_half(r):
    """u = cos(pi r / 2): p = 2, n = 1, f = u, lambda = pi^2/4, alpha = 1."""
    return np.cos(0.5 * np.pi * np.asarray(r))


def sinc_radial(r):
    """u = sin(pi r)/(pi r): p = 2, n = 3, f = u, lambda = pi^2, alpha = 1."""
    r = np.asarray(r, dtype=float)
    return np.sinc(r)


def pure_power_lambda(p: float, q: float, alpha: float) -> float:
    """lambda(alpha) for n = 1, f = u^q, from the energy integral in Beta form.

    lambda^(1/p) = alpha^(1-(q+1)/p) ((q+1)(p-1)/p)^(1/p) B(1/(q+1), 1-1/p)/(q+1).
    """
    k = p / (p - 1.0)
    integral = beta_fn(1.0 / (q + 1.0), 1.0 - 1.0 / p) / (q + 1.0)
    return ((q + 1.0) / k) * alpha ** (p - q - 1.0) * integral**p


def p_sine_lambda(p: float) -> float:
    """Amplitude-free eigenvalue of the 1D problem with f = u^(p-1)."""
    return (p - 1.0) * (math.pi / (p * math.sin(math.pi / p))) ** p


def critical_exponent(p, n):
    return Fraction(n * p - n + p) / Fraction(n - p) if n > p else math.inf


# f = -u + u^3 (coefficients in increasing powers)
CUBIC_SHIFTED = [0, -1, 0, 1]
GAMMA_CUBIC, THETA_CUBIC = 1.0, SQRT2
# f = u^3 - 2u: gamma = sqrt 2, theta = 2
CUBIC_2U = [0, -2, 0, 1]
# f = u^3 - 1: F = u^4/4 - u vanishes at 4^(1/3), the amplitude at lambda0
CUBIC_MINUS_ONE = [-1, 0, 0, 1]
ALPHA_AT_LAMBDA0 = 4.0 ** (1.0 / 3.0)


def lambda0_cubic_minus_one() -> float:
    """Extinction parameter for f = u^3 - 1 (p = 2, n = 1).

    At lambda0 the amplitude is 4^(1/3), where F = 0, and
    -2F(s) = (s/2)(a - s)(a^2 + a s + s^2), so the energy integral has
    algebraic weights s^(-1/2)(a - s)^(-1/2) times a smooth factor.
    """
    a = ALPHA_AT_LAMBDA0
    val, _ = quad(lambda s: math.sqrt(2.0 / (a * a + a * s + s * s)), 0.0, a, weight="alg", wvar=(-0.5, -0.5), epsabs=0.0, epsrel=1e-13)
    return val**2
