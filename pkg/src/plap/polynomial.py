"""Exact univariate polynomials with rational coefficients.

Coefficients are stored in ascending order as :class:`fractions.Fraction`.
Floating-point evaluation uses Horner's rule on a cached float copy;
exact sign analysis on an interval delegates real-root isolation to sympy.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = ["Polynomial", "as_fraction", "sign_pattern", "positive_on", "nonnegative_on", "positive_roots"]


def as_fraction(value) -> Fraction:
    """Convert int, float, str ("3/4", "0.5") or Fraction to an exact Fraction.

    Floats are converted exactly (binary value), not by shortest decimal.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not valid coefficients")
    if isinstance(value, (int, float, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as a rational number")


@dataclass(frozen=True)
class Polynomial:
    """Polynomial ``c0 + c1 x + ... + cd x^d`` with exact rational coefficients."""

    coeffs: tuple[Fraction, ...]
    _fc: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __init__(self, coeffs: Iterable = (0,)):
        cs = [as_fraction(c) for c in coeffs]
        while len(cs) > 1 and cs[-1] == 0:
            cs.pop()
        if not cs:
            cs = [Fraction(0)]
        object.__setattr__(self, "coeffs", tuple(cs))
        object.__setattr__(self, "_fc", tuple(float(c) for c in reversed(cs)))

    @classmethod
    def constant(cls, c) -> "Polynomial":
        return cls([c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs != (0,) else -1

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) == 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0,)

    def __call__(self, x):
        """Float evaluation (Horner); accepts scalars or numpy arrays."""
        fc = self._fc
        if isinstance(x, np.ndarray):
            acc = np.full_like(x, fc[0], dtype=float)
        else:
            acc = fc[0]
        for c in fc[1:]:
            acc = acc * x + c
        return acc

    def exact(self, x) -> Fraction:
        x = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def deriv(self) -> "Polynomial":
        return Polynomial([k * c for k, c in enumerate(self.coeffs)][1:] or [0])

    def integ(self) -> "Polynomial":
        """Antiderivative vanishing at 0."""
        return Polynomial([0] + [c / (k + 1) for k, c in enumerate(self.coeffs)])

    def shift_x(self) -> "Polynomial":
        """Multiply by x."""
        return Polynomial((0,) + self.coeffs)

    def __add__(self, other):
        other = _coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Polynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_coerce(other))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def leading(self) -> Fraction:
        return self.coeffs[-1]

    def lowest_nonzero(self) -> tuple[int, Fraction] | None:
        """(k, c_k) for the lowest-order nonzero coefficient, or None for 0."""
        for k, c in enumerate(self.coeffs):
            if c != 0:
                return k, c
        return None

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]

    def __str__(self):
        return self.render("r")

    def render(self, var: str) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            terms.append(f"{c}{'*' if mono else ''}{mono}")
        return " + ".join(terms) or "0"


def _coerce(x) -> Polynomial:
    return x if isinstance(x, Polynomial) else Polynomial([x])


# exact sign analysis ------------------------------------------------------


def _sympy_poly(poly: Polynomial):
    import sympy

    x = sympy.Symbol("x")
    coeffs = [sympy.Rational(c.numerator, c.denominator) for c in reversed(poly.coeffs)]
    return sympy.Poly(coeffs, x, domain=sympy.QQ)


def _root_boxes(poly: Polynomial, lo: Fraction, hi: Fraction | None, eps=None):
    """Disjoint rational isolating intervals for the real roots in [lo, hi]."""
    if poly.is_constant:
        return []
    sp = _sympy_poly(poly)
    kw = {"inf": lo}
    if hi is not None:
        kw["sup"] = hi
    if eps is not None:
        kw["eps"] = eps
    boxes = []
    for (a, b), _mult in sp.intervals(**kw):
        boxes.append((Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))))
    boxes.sort()
    return boxes


def sign_pattern(poly: Polynomial, lo=0, hi=1):
    """Exact sign of ``poly`` on the open interval (lo, hi).

    Returns a list of ``(sample_point, sign)`` pairs, one per maximal open
    sub-interval between consecutive real roots, in increasing order.  The
    sample points are rationals strictly between isolating boxes (or beyond
    the last root when ``hi`` is None, meaning +infinity).
    """
    lo = as_fraction(lo)
    hi = None if hi is None else as_fraction(hi)
    if poly.is_zero:
        return [(lo + 1 if hi is None else (lo + hi) / 2, 0)]
    eps = None
    while True:
        boxes = _root_boxes(poly, lo, hi, eps)
        if boxes and poly.exact(lo) == 0 and boxes[0][0] == lo:
            boxes = boxes[1:]
        if boxes and hi is not None and poly.exact(hi) == 0 and boxes[-1][1] == hi:
            boxes = boxes[:-1]
        starts = [lo] + [b for _, b in boxes]
        ends = [a for a, _ in boxes] + [hi]
        if all(e is None or s < e for s, e in zip(starts, ends)):
            break
        width = min(b - a for a, b in boxes) if boxes else Fraction(1)
        eps = (width or Fraction(1, 2**20)) / 16
    out = []
    for s, e in zip(starts, ends):
        point = s + 1 if e is None else (s + e) / 2
        out.append((point, 1 if poly.exact(point) > 0 else -1))
    return out


def positive_on(poly: Polynomial, lo=0, hi=1):
    """(True, None) if poly > 0 on (lo, hi); else (False, witness)."""
    for point, sgn in sign_pattern(poly, lo, hi):
        if sgn <= 0:
            return False, float(point)
    return True, None


def nonnegative_on(poly: Polynomial, lo=0, hi=1):
    """(True, None) if poly >= 0 on (lo, hi); else (False, witness)."""
    for point, sgn in sign_pattern(poly, lo, hi):
        if sgn < 0:
            return False, float(point)
    return True, None


def positive_roots(poly: Polynomial) -> list[tuple[Fraction, Fraction]]:
    """Isolating intervals of the strictly positive real roots."""
    return [(a, b) for a, b in _root_boxes(poly, Fraction(0), None) if b > 0 and not (a == b == 0)]


def refine_root(poly: Polynomial, a: float, b: float) -> float:
    """Bisect a sign-changing float bracket down to adjacent doubles."""
    fa = poly(a)
    if fa == 0:
        return a
    fb = poly(b)
    if fb == 0:
        return b
    if fa * fb > 0:
        raise ValueError("bracket does not change sign")
    while True:
        m = 0.5 * (a + b)
        if m <= a or m >= b:
            return a if abs(fa) <= abs(fb) else b
        fm = poly(m)
        if fm == 0:
            return m
        if (fm > 0) == (fa > 0):
            a, fa = m, fm
        else:
            b, fb = m, fm


def from_sequence(values: Sequence) -> Polynomial:
    return Polynomial(values)
