"""phi-calculus, exponents and nonlinearity families.

Every family supplies exact values of ``f``, ``f_u``, ``f_r``, the primitive
``F(r, u) = int_0^u f(r, t) dt`` and ``F_r``.  Coefficient functions are
polynomials in ``r`` with rational coefficients so that all derivatives are
exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, NamedTuple, Union

import numpy as np

from .errors import AdmissibilityError, DomainError, PoleError
from .polynomial import Polynomial, as_fraction, positive_roots, refine_root

__all__ = [
    "phi",
    "phi_prime",
    "phi_inverse",
    "Exponents",
    "ModelAB",
    "PureB",
    "Autonomous1D",
    "LinearTest",
    "ProblemSpec",
    "NonlinearityValues",
    "eval_nonlinearity",
]


# phi-calculus ---------------------------------------------------------------


def phi(t, p):
    """phi(t) = t |t|^(p-2), extended by phi(0) = 0."""
    if np.ndim(t) == 0:
        t = float(t)
        return math.copysign(abs(t) ** (p - 1.0), t) if t != 0.0 else 0.0
    t = np.asarray(t, dtype=float)
    return np.sign(t) * np.abs(t) ** (p - 1.0)


def phi_prime(t, p):
    """phi'(t) = (p-1) |t|^(p-2).

    Raises
    ------
    PoleError
        If ``t == 0`` and ``p < 2``.
    """
    if p == 2:
        return 1.0 if np.ndim(t) == 0 else np.ones_like(np.asarray(t, dtype=float))
    if np.ndim(t) == 0:
        t = float(t)
        if t == 0.0:
            if p < 2:
                raise PoleError(f"phi'(0) has a pole for p = {p} < 2")
            return 0.0
        return (p - 1.0) * abs(t) ** (p - 2.0)
    t = np.asarray(t, dtype=float)
    if p < 2 and np.any(t == 0):
        raise PoleError(f"phi'(0) has a pole for p = {p} < 2")
    return (p - 1.0) * np.abs(t) ** (p - 2.0)


def phi_inverse(s, p):
    """Inverse of phi: sign(s) |s|^(1/(p-1))."""
    if np.ndim(s) == 0:
        s = float(s)
        return math.copysign(abs(s) ** (1.0 / (p - 1.0)), s) if s != 0.0 else 0.0
    s = np.asarray(s, dtype=float)
    return np.sign(s) * np.abs(s) ** (1.0 / (p - 1.0))


def _upow(u: float, e: float) -> float:
    """u**e for u >= 0 with the limits at u = 0 (0, 1 or inf)."""
    if u == 0.0:
        return 0.0 if e > 0 else (1.0 if e == 0 else math.inf)
    return u**e


def _spow(u: float, e: float) -> float:
    """Odd extension sign(u)|u|^e, used only inside ODE right-hand sides."""
    if u >= 0.0:
        return _upow(u, e)
    return -(-u) ** e


def _as_poly(c) -> Polynomial:
    if isinstance(c, Polynomial):
        return c
    if isinstance(c, (list, tuple)):
        return Polynomial(c)
    return Polynomial([c])


# types ----------------------------------------------------------------------


@dataclass(frozen=True)
class Exponents:
    p: float
    n: int
    q: float | None = None

    def __post_init__(self):
        if not self.p > 1:
            raise DomainError(f"p must exceed 1, got {self.p}")
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be an integer >= 1, got {self.n}")
        if self.q is not None and not self.q > min(1.0, self.p - 1.0):
            raise DomainError(f"q must exceed min(1, p-1) = {min(1.0, self.p - 1.0)}, got {self.q}")

    @property
    def critical_exponent(self) -> float:
        """(np - n + p)/(n - p) when n > p, else +inf."""
        p, n = self.p, self.n
        return (n * p - n + p) / (n - p) if n > p else math.inf


class NonlinearityValues(NamedTuple):
    f: float
    f_u: float
    f_r: float
    F: float
    F_r: float


class Kernel(NamedTuple):
    """Fast scalar callables (r, u) -> value used in ODE right-hand sides."""

    f: Callable[[float, float], float]
    f_u: Callable[[float, float], float]


@dataclass(frozen=True)
class ModelAB:
    """f = -s a(r) u^(p-1) + b(r)^beta u^q.

    ``a_scale`` (s) and ``b_power`` (beta) parametrize the homotopy families;
    both default to 1.
    """

    a: Polynomial
    b: Polynomial
    q: float
    a_scale: float = 1.0
    b_power: float = 1.0
    tag = "model_ab"

    def __post_init__(self):
        object.__setattr__(self, "a", _as_poly(self.a))
        object.__setattr__(self, "b", _as_poly(self.b))

    @property
    def is_autonomous(self) -> bool:
        return (self.a.is_constant or self.a_scale == 0) and (self.b.is_constant or self.b_power == 0)

    def _bb(self, r):
        b = self.b(r)
        if self.b_power == 1.0:
            return b, self.b.deriv()(r)
        if self.b_power == 0.0:
            return 1.0, 0.0
        bp = b**self.b_power
        return bp, self.b_power * bp / b * self.b.deriv()(r)

    def evaluate(self, r: float, u: float, p: float) -> NonlinearityValues:
        q, s = self.q, self.a_scale
        a, da = s * self.a(r), s * self.a.deriv()(r)
        bb, dbb = self._bb(r)
        up1, uq = _upow(u, p - 1), _upow(u, q)
        f = -a * up1 + bb * uq
        # at u = 0 with p < 2 the a-term has a pole; 0 * inf must not leak
        f_u = (0.0 if a == 0 else -(p - 1) * a * _upow(u, p - 2)) + q * bb * _upow(u, q - 1)
        f_r = -da * up1 + dbb * uq
        F = -a * u * up1 / p + bb * u * uq / (q + 1)
        F_r = -da * u * up1 / p + dbb * u * uq / (q + 1)
        return NonlinearityValues(f, f_u, f_r, F, F_r)

    def kernel(self, p: float) -> Kernel:
        q, s, beta = self.q, self.a_scale, self.b_power
        ac = self.a.coeffs
        if len(ac) == 1:
            a0 = s * float(ac[0])
            a_of = lambda r: a0  # noqa: E731
        else:
            a_of = lambda r, A=self.a: s * A(r)  # noqa: E731
        if self.b.is_constant or beta == 0:
            b0 = float(self.b.coeffs[0]) ** beta
            b_of = lambda r: b0  # noqa: E731
        elif beta == 1.0:
            b_of = self.b
        else:
            b_of = lambda r, B=self.b: B(r) ** beta  # noqa: E731
        pm1, pm2, qm1 = p - 1.0, p - 2.0, q - 1.0

        def f(r, u):
            return -a_of(r) * _spow(u, pm1) + b_of(r) * _spow(u, q)

        def f_u(r, u):
            au = abs(u)
            return -pm1 * a_of(r) * (_upow(au, pm2) if p != 2 else 1.0) + q * b_of(r) * _upow(au, qm1)

        return Kernel(f, f_u)

    def describe(self) -> dict:
        return {
            "kind": self.tag,
            "a": self.a.to_json(),
            "b": self.b.to_json(),
            "q": self.q,
            "a_scale": self.a_scale,
            "b_power": self.b_power,
        }


@dataclass(frozen=True)
class PureB:
    """f = b(r)^beta u^q."""

    b: Polynomial
    q: float
    b_power: float = 1.0
    tag = "pure_b"

    def __post_init__(self):
        object.__setattr__(self, "b", _as_poly(self.b))

    @property
    def is_autonomous(self) -> bool:
        return self.b.is_constant or self.b_power == 0

    def as_model_ab(self) -> ModelAB:
        return ModelAB(Polynomial([0]), self.b, self.q, a_scale=0.0, b_power=self.b_power)

    def evaluate(self, r, u, p):
        return self.as_model_ab().evaluate(r, u, p)

    def kernel(self, p):
        return self.as_model_ab().kernel(p)

    def describe(self) -> dict:
        return {"kind": self.tag, "b": self.b.to_json(), "q": self.q, "b_power": self.b_power}


@dataclass(frozen=True)
class Autonomous1D:
    """f = f(u), a polynomial in u with rational coefficients (ascending)."""

    poly: Polynomial
    _du: Polynomial = field(init=False, repr=False, compare=False)
    _prim: Polynomial = field(init=False, repr=False, compare=False)
    tag = "autonomous"

    def __post_init__(self):
        object.__setattr__(self, "poly", _as_poly(self.poly))
        object.__setattr__(self, "_du", self.poly.deriv())
        object.__setattr__(self, "_prim", self.poly.integ())

    is_autonomous = True

    @property
    def primitive(self) -> Polynomial:
        return self._prim

    @property
    def derivative(self) -> Polynomial:
        return self._du

    def evaluate(self, r, u, p):
        return NonlinearityValues(self.poly(u), self._du(u), 0.0, self._prim(u), 0.0)

    def kernel(self, p):
        f, du = self.poly, self._du
        return Kernel(lambda r, u: f(u), lambda r, u: du(u))

    def describe(self) -> dict:
        return {"kind": self.tag, "coefficients": self.poly.to_json()}


@dataclass(frozen=True)
class LinearTest:
    """f = u.  Oracle-only: u f_u - (p-1) f vanishes identically for p = 2."""

    tag = "linear"
    is_autonomous = True

    def evaluate(self, r, u, p):
        return NonlinearityValues(u, 1.0, 0.0, 0.5 * u * u, 0.0)

    def kernel(self, p):
        return Kernel(lambda r, u: u, lambda r, u: 1.0)

    def describe(self) -> dict:
        return {"kind": self.tag}


Nonlinearity = Union[ModelAB, PureB, Autonomous1D, LinearTest]


@dataclass(frozen=True)
class ProblemSpec:
    """p-Laplace exponent, dimension, nonlinearity and scale parameter.

    ``lam`` multiplies the nonlinearity; it is 1 when absorbed into the
    coefficients.  Subcriticality of ``q`` is *not* enforced here so that
    the hypothesis auditor can be run on supercritical problems.
    """

    p: float
    n: int
    nonlinearity: Nonlinearity
    lam: float = 1.0

    def __post_init__(self):
        q = getattr(self.nonlinearity, "q", None)
        Exponents(self.p, self.n, q)
        if not self.lam > 0:
            raise DomainError(f"lambda must be positive, got {self.lam}")

    @property
    def exponents(self) -> Exponents:
        return Exponents(self.p, self.n, getattr(self.nonlinearity, "q", None))

    @property
    def is_autonomous(self) -> bool:
        return bool(self.nonlinearity.is_autonomous)

    def with_lam(self, lam: float) -> "ProblemSpec":
        return ProblemSpec(self.p, self.n, self.nonlinearity, lam)

    def with_nonlinearity(self, nl) -> "ProblemSpec":
        return ProblemSpec(self.p, self.n, nl, self.lam)

    def evaluate(self, r, u) -> NonlinearityValues:
        return self.nonlinearity.evaluate(r, u, self.p)

    def kernel(self) -> Kernel:
        return self.nonlinearity.kernel(self.p)

    def f_at_zero(self) -> float:
        """f(0, 0); nonzero only for polynomial families with a constant term."""
        return self.evaluate(0.0, 0.0).f

    def gamma(self, r: float = 0.0) -> float:
        """Positive zero of u -> f(r, u); 0 when f(r, .) > 0 on (0, inf)."""
        return _critical(self, r)[0]

    def theta(self, r: float = 0.0) -> float:
        """Zero of u -> F(r, u) above gamma; 0 when F(r, .) > 0 on (0, inf)."""
        return _critical(self, r)[1]

    def describe(self) -> dict:
        return {"p": self.p, "n": self.n, "lambda": self.lam, "nonlinearity": self.nonlinearity.describe()}


def eval_nonlinearity(spec: ProblemSpec, r: float, u: float) -> NonlinearityValues:
    """Exact (f, f_u, f_r, F, F_r) at (r, u).

    Raises
    ------
    DomainError
        If ``u < 0`` or ``r`` lies outside [0, 1].
    """
    if u < 0:
        raise DomainError(f"nonlinearity is defined for u >= 0 only, got u = {u}")
    if not 0.0 <= r <= 1.0:
        raise DomainError(f"r must lie in [0, 1], got {r}")
    return spec.evaluate(r, u)


# gamma / theta -------------------------------------------------------------------


def _bisect(fun, a, b):
    fa = fun(a)
    while True:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            return m
        fm = fun(m)
        if fm == 0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b = m


def _critical(spec: ProblemSpec, r: float) -> tuple[float, float]:
    nl, p = spec.nonlinearity, spec.p
    if isinstance(nl, LinearTest):
        return 0.0, 0.0
    if isinstance(nl, (ModelAB, PureB)):
        m = nl if isinstance(nl, ModelAB) else nl.as_model_ab()
        a = m.a_scale * m.a(r)
        bb, _ = m._bb(r)
        if a <= 0:
            return 0.0, 0.0
        e = 1.0 / (m.q - p + 1.0)
        if m.q - p + 1.0 <= 0:
            raise AdmissibilityError("u f_u - (p-1) f > 0 requires q > p - 1")
        return (a / bb) ** e, (a * (m.q + 1) / (p * bb)) ** e
    poly = nl.poly
    roots = positive_roots(poly)
    low = poly.lowest_nonzero()
    if low is None:
        raise AdmissibilityError("f vanishes identically")
    if not roots:
        if poly.exact(1) > 0:
            return 0.0, 0.0
        raise AdmissibilityError("f is negative for all u > 0")
    if len(roots) > 1:
        raise AdmissibilityError("f changes sign more than once on (0, inf)")
    a, b = roots[0]
    if poly.exact(b + 1) < 0:
        raise AdmissibilityError("f must be negative below gamma and positive above")
    gamma = refine_root(poly, float(a), float(b)) if a != b else float(a)
    prim = nl.primitive
    hi = max(2.0 * gamma, 1.0)
    while prim(hi) <= 0:
        hi *= 2.0
    theta = _bisect(prim, gamma, hi)
    return gamma, theta
