"""Identity functions, qualitative checks and hypothesis audits.

Everything here is expressed in the divergence variables of the
integrator, v = r^(n-1) phi(u') and z = r^(n-1) phi'(u') w', with the scale
parameter lambda folded into f.  In those variables

    xi = (p-1) v w - u z                        xi' = r^(n-1) w (u f_u - (p-1) f)
    T  = r u' z + r^n f w + (n-p) v w           T'  = r^(n-1) w (p f + r f_r)
    Q  = (p-1) r v u' + r^n u f + (n-p) v u
    P  = (p-1) r v u' + p r^n F + (n-p) v u     P'  = r^(n-1) I
    I  = n p F - (n-p) u f + p r F_r

Residuals are measured in integrated form: on every grid step the change
of a profile is compared with a Gauss-Legendre integral of its claimed
derivative evaluated on the dense outputs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .ivp import LinearizedTrajectory, integrate_linearized
from .model import Autonomous1D, LinearTest, ModelAB, ProblemSpec, PureB, phi, phi_inverse, phi_prime
from .polynomial import Polynomial, as_fraction, nonnegative_on, positive_on, sign_pattern
from .shoot import RadialSolution

__all__ = [
    "CheckEntry",
    "HypothesisReport",
    "TangProfiles",
    "OneDimIdentities",
    "tang_profiles",
    "locate_r2",
    "qualitative_checks",
    "a_posteriori_checks",
    "alpha_monotonicity_check",
    "check_model_hypotheses",
    "check_autonomous_hypotheses",
    "check_hypotheses",
    "one_dim_identities",
    "energy_residual",
]

_GL_X, _GL_W = np.polynomial.legendre.leggauss(8)


@dataclass(frozen=True)
class CheckEntry:
    name: str
    passed: bool
    witness: float | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "pass": self.passed, "witness": self.witness, "detail": self.detail}


@dataclass(frozen=True)
class HypothesisReport:
    entries: tuple[CheckEntry, ...]

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    @property
    def failures(self) -> list[CheckEntry]:
        return [e for e in self.entries if not e.passed]

    def __getitem__(self, name: str) -> CheckEntry:
        for e in self.entries:
            if e.name == name:
                return e
        raise KeyError(name)

    def names(self) -> list[str]:
        return [e.name for e in self.entries]

    def __add__(self, other: "HypothesisReport") -> "HypothesisReport":
        return HypothesisReport(self.entries + other.entries)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "entries": [e.to_dict() for e in self.entries]}


# pointwise evaluation ------------------------------------------------------------


def _nl_arrays(spec: ProblemSpec, r, u):
    vals = [spec.evaluate(float(ri), max(float(ui), 0.0)) for ri, ui in zip(r, u)]
    return (np.array(c, dtype=float) for c in zip(*vals))


class _State:
    """All pointwise quantities at radii ``r`` (solution, linearization, f)."""

    def __init__(self, solution: RadialSolution, lin: LinearizedTrajectory | None, r):
        spec, lam = solution.spec, solution.lam
        p, n = spec.p, spec.n
        tr = solution.trajectory
        self.r = r = np.asarray(r, dtype=float)
        y = tr.dense(r)
        self.u, self.v = np.asarray(y[0]), np.asarray(y[1])
        rm = r ** (n - 1)
        self.up = np.asarray(phi_inverse(self.v / rm, p), dtype=float)
        f, fu, fr, F, Fr = _nl_arrays(spec, r, self.u)
        self.f, self.fu, self.fr, self.F, self.Fr = lam * f, lam * fu, lam * fr, lam * F, lam * Fr
        self.rm = rm
        if lin is not None:
            yl = lin.dense(r)
            self.w, self.z = np.asarray(yl[0]), np.asarray(yl[1])
        self.p, self.n = p, n

    # profiles
    def xi(self):
        return (self.p - 1) * self.v * self.w - self.u * self.z

    def T(self):
        r, n = self.r, self.n
        return r * self.up * self.z + r**n * self.f * self.w + (n - self.p) * self.v * self.w

    def Q(self):
        r, n, p = self.r, self.n, self.p
        return (p - 1) * r * self.v * self.up + r**n * self.u * self.f + (n - p) * self.v * self.u

    def P(self):
        r, n, p = self.r, self.n, self.p
        return (p - 1) * r * self.v * self.up + p * r**n * self.F + (n - p) * self.v * self.u

    def I(self):  # noqa: E743
        n, p = self.n, self.p
        return n * p * self.F - (n - p) * self.u * self.f + p * self.r * self.Fr

    def energy(self):
        p = self.p
        return (p - 1) / p * np.abs(self.up) ** p + self.F

    # derivatives claimed by the identities
    def d_xi(self):
        return self.rm * self.w * (self.u * self.fu - (self.p - 1) * self.f)

    def d_T(self):
        return self.rm * self.w * (self.p * self.f + self.r * self.fr)

    def d_P(self):
        return self.rm * self.I()

    def d_energy(self):
        n, p = self.n, self.p
        return -(n - 1) / self.r * np.abs(self.up) ** p + self.Fr


def _integrated_residual(solution, lin, grid, value, derivative) -> float:
    """max over steps |G(b) - G(a) - int_a^b G'| divided by max|G| on the grid."""
    nodes = _State(solution, lin, grid)
    G = value(nodes)
    a, b = grid[:-1], grid[1:]
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    pts = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    d = derivative(_State(solution, lin, pts)).reshape(len(a), len(_GL_X))
    integral = half * (d @ _GL_W)
    scale = float(np.max(np.abs(G)))
    if scale == 0:
        return 0.0
    return float(np.max(np.abs(np.diff(G) - integral)) / scale)


@dataclass(frozen=True, eq=False)
class TangProfiles:
    r: np.ndarray
    xi: np.ndarray
    T: np.ndarray
    Q: np.ndarray
    P: np.ndarray
    I: np.ndarray  # noqa: E741
    alpha_fun: np.ndarray
    residuals: dict
    r2: float
    u_prime_at_one: float = field(default=math.nan)

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())


def _grid(solution: RadialSolution) -> np.ndarray:
    return np.asarray(solution.trajectory.r, dtype=float)


def _linearized(solution: RadialSolution, lin):
    if lin is not None:
        return lin
    if solution.linearized is not None:
        return solution.linearized
    return integrate_linearized(solution.spec, solution.lam, solution.trajectory)


def tang_profiles(solution: RadialSolution, linearized: LinearizedTrajectory | None = None) -> TangProfiles:
    """Profiles xi, T, Q, P, I and alpha(r) on the solution grid, with identity residuals."""
    lin = _linearized(solution, linearized)
    grid = _grid(solution)
    s = _State(solution, lin, grid)
    with np.errstate(divide="ignore", invalid="ignore"):
        den = s.u * s.fu - (s.p - 1) * s.f
        afun = np.where(den != 0, (s.p * s.f + s.r * s.fr) / den, np.nan)
    residuals = {
        "xi": _integrated_residual(solution, lin, grid, _State.xi, _State.d_xi),
        "T": _integrated_residual(solution, lin, grid, _State.T, _State.d_T),
        "P": _integrated_residual(solution, lin, grid, _State.P, _State.d_P),
    }
    return TangProfiles(grid, s.xi(), s.T(), s.Q(), s.P(), s.I(), afun, residuals, locate_r2(solution), solution.u_prime_at_one)


def energy_residual(solution: RadialSolution) -> float:
    """Integrated residual of E' = -(n-1)/r |u'|^p + lam F_r, relative to max|E|."""
    return _integrated_residual(solution, None, _grid(solution), _State.energy, _State.d_energy)


# sign structure along a solution ------------------------------------------------------


def _f_along(solution: RadialSolution, r):
    s = _State(solution, None, np.atleast_1d(r))
    return s.f


def locate_r2(solution: RadialSolution) -> float:
    """Radius where r -> f(r, u(r)) turns from positive to negative; 1 if it stays positive."""
    grid = _grid(solution)[:-1]
    f = _f_along(solution, grid)
    neg = np.nonzero(f <= 0)[0]
    if neg.size == 0:
        return 1.0
    i = int(neg[0])
    if i == 0:
        return float(grid[0])
    return float(brentq(lambda x: float(_f_along(solution, x)[0]), grid[i - 1], grid[i], xtol=1e-12, rtol=1e-15))


def _sign_changes(values, tiny):
    signs = [1 if x > tiny else -1 if x < -tiny else 0 for x in values]
    nz = [(i, s) for i, s in enumerate(signs) if s != 0]
    changes = [nz[k][0] for k in range(1, len(nz)) if nz[k][1] != nz[k - 1][1]]
    return nz, changes, signs.count(0)


def qualitative_checks(solution: RadialSolution, hopf_threshold: float = 1e-10) -> HypothesisReport:
    """Hopf slope, strict monotonicity, f(0, alpha) > 0, single sign change of f along u, energy decay."""
    spec = solution.spec
    tr = solution.trajectory
    entries = []
    up1 = solution.u_prime_at_one
    entries.append(CheckEntry("hopf", up1 < -hopf_threshold, 1.0 if up1 >= -hopf_threshold else up1, f"u'(1) = {up1:.6g}"))

    r, up, u = tr.r, tr.u_prime, tr.u
    bad = np.nonzero((up[1:] >= 0) | (np.diff(u) >= 0))[0]
    entries.append(
        CheckEntry(
            "monotone",
            bad.size == 0,
            float(r[bad[0] + 1]) if bad.size else None,
            "u' < 0 on the interior grid" if bad.size == 0 else "u' >= 0 at an interior node",
        )
    )
    f0 = spec.evaluate(0.0, solution.alpha).f
    entries.append(CheckEntry("center_positive", f0 > 0, 0.0 if f0 <= 0 else f0, f"f(0, alpha) = {f0:.6g}"))

    grid = _grid(solution)[:-1]
    fvals = _f_along(solution, grid)
    tiny = 1e-14 * float(np.max(np.abs(fvals)))
    nz, changes, _ = _sign_changes(fvals, tiny)
    ok = nz and nz[0][1] > 0 and len(changes) <= 1
    r2 = locate_r2(solution)
    witness = None
    if not ok:
        witness = float(grid[changes[1]]) if len(changes) > 1 else float(grid[0])
    entries.append(CheckEntry("single_sign_change", bool(ok), witness if not ok else r2, f"r2 = {r2:.12g}"))

    E = tr.energy()
    scale = float(np.max(np.abs(E))) or 1.0
    if spec.is_autonomous and spec.n == 1:
        dev = np.abs(E - E[0]) / scale
        k = int(np.argmax(dev))
        entries.append(CheckEntry("energy_constant", dev[k] < 1e-8, float(r[k]), f"max relative deviation {dev[k]:.3g}"))
    else:
        rise = np.diff(E) / scale
        k = int(np.argmax(rise))
        entries.append(
            CheckEntry("energy_monotone", rise[k] <= 1e-8, float(r[k + 1]), f"largest relative increase {max(rise[k], 0.0):.3g}")
        )
    return HypothesisReport(tuple(entries))


def alpha_monotonicity_check(solution: RadialSolution, tol: float = 1e-8) -> CheckEntry:
    """Condition (23): alpha(r) = (p f + r f_r)/(u f_u - (p-1) f) non-increasing along the solution."""
    grid = _grid(solution)
    s = _State(solution, None, grid)
    keep = (s.u > 0) & (grid < 1.0)
    keep[-1] = False
    r = grid[keep]
    num = (s.p * s.f + s.r * s.fr)[keep]
    den = (s.u * s.fu - (s.p - 1) * s.f)[keep]
    scale = float(np.max(np.abs(s.u * s.fu))) or 1.0
    k = int(np.argmin(den))
    if den[k] < 1e-12 * scale:
        return CheckEntry("(23)", False, float(r[k]), f"precondition (22) fails: u f_u - (p-1) f = {den[k]:.3g}")
    a = num / den
    rise = np.diff(a) / np.maximum(1.0, np.abs(a[:-1]))
    j = int(np.argmax(rise))
    return CheckEntry("(23)", bool(rise[j] <= tol), float(r[j + 1]), f"largest relative increase {max(rise[j], 0.0):.3g}")


def a_posteriori_checks(solution: RadialSolution, linearized: LinearizedTrajectory | None = None) -> HypothesisReport:
    """Conditions (21), (22), (23), (42), (42.1) and the w-sign fact past r2, along a computed solution."""
    spec = solution.spec
    p, n = spec.p, spec.n
    grid = _grid(solution)
    s = _State(solution, None, grid)
    interior = slice(0, -1)
    entries = []

    f_zero = [spec.evaluate(float(x), 0.0).f for x in (0.0, 0.5, 1.0)]
    fr_max = float(np.max(s.fr[interior])) if grid.size > 1 else 0.0
    ok21 = all(v == 0 for v in f_zero) and fr_max <= 0
    entries.append(
        CheckEntry("(21)", ok21, None if ok21 else (0.0 if any(f_zero) else float(grid[int(np.argmax(s.fr[interior]))])),
                   f"f(r,0) = {f_zero[0]:.3g}, max f_r along u = {fr_max:.3g}")
    )
    den = (s.u * s.fu - (p - 1) * s.f)[interior]
    k = int(np.argmin(den))
    entries.append(CheckEntry("(22)", bool(den[k] > 0), float(grid[k]), f"min u f_u - (p-1) f = {den[k]:.3g}"))
    entries.append(alpha_monotonicity_check(solution))

    r2 = locate_r2(solution)
    if n > p:
        g = (s.u * s.f - p * s.F)[interior]
        mask = grid[interior] < r2
        if mask.any():
            j = int(np.argmin(np.where(mask, g, np.inf)))
            entries.append(CheckEntry("(42)", bool(g[j] > 0), float(grid[j]), f"min u f - p F on (0, r2) = {g[j]:.3g}"))
        I = s.I()[interior]
        entries.append(_classify_I(grid[interior], I, r2))
    else:
        entries.append(CheckEntry("(42)", True, None, "not required for n <= p"))
        entries.append(CheckEntry("(42.1)", True, None, "not required for n <= p"))

    lin = _linearized(solution, linearized)
    w = np.asarray(lin.w)
    past = (lin.r > r2) & (lin.r < 1.0)
    ws = w[past]
    flips = np.nonzero(np.sign(ws[1:]) != np.sign(ws[:-1]))[0]
    entries.append(
        CheckEntry(
            "w_no_zero_past_r2",
            flips.size == 0,
            float(lin.r[past][flips[0] + 1]) if flips.size else None,
            f"sign changes of w on (r2, 1): {flips.size}",
        )
    )
    return HypothesisReport(tuple(entries))


def _classify_I(r, I, r2) -> CheckEntry:
    tiny = 1e-12 * (float(np.max(np.abs(I))) or 1.0)
    nz, changes, zeros = _sign_changes(I, tiny)
    if zeros and not nz:
        return CheckEntry("(42.1)", False, float(r[0]), "indeterminate: I vanishes to tolerance")
    first = nz[0][1]
    if not changes and first < 0:
        return CheckEntry("(42.1)", True, None, "case (ii): I < 0 on (0, 1)")
    before = [sgn for i, sgn in nz if r[i] < r2]
    if before and all(sgn > 0 for sgn in before):
        return CheckEntry("(42.1)", True, None, "case (i): I > 0 on (0, r2)")
    if len(changes) == 1 and first > 0:
        return CheckEntry("(42.1)", True, float(r[changes[0]]), "case (iii): I changes sign once, + to -")
    if any(abs(x) <= tiny for x in I):
        return CheckEntry("(42.1)", False, float(r[changes[0]] if changes else r[0]), "indeterminate: I near zero at a sign change")
    return CheckEntry("(42.1)", False, float(r[changes[-1]] if changes else r[0]), f"no case applies ({len(changes)} sign changes)")


# exact hypothesis audits ------------------------------------------------------------

_R = Polynomial([0, 1])


def _poly_entry(name, ok_witness, detail) -> CheckEntry:
    ok, witness = ok_witness
    return CheckEntry(name, ok, witness, detail)


def _exact_audit(p, n, q, a: Polynomial | None, b: Polynomial, theta: Fraction) -> list[CheckEntry]:
    """Checks for f = -a u^(p-1) + b^theta u^q (a = None for the pure power family)."""
    P, Q = as_fraction(p), as_fraction(q)
    entries = []
    lower = min(1, P - 1)
    crit = (n * P - n + P) / (n - P) if n > P else None
    ok49 = Q > lower and (crit is None or Q < crit)
    crit_txt = "inf" if crit is None else f"{float(crit):.12g}"
    entries.append(CheckEntry("(49)", ok49, None if ok49 else float(q), f"min(1,p-1) = {float(lower):.6g} < q = {float(q):.6g} < {crit_txt}"))
    db = b.deriv()
    if a is not None:
        da = a.deriv()
        entries.append(_poly_entry("(51) a > 0", positive_on(a), f"a = {a}"))
        entries.append(_poly_entry("(51) a' >= 0", nonnegative_on(da), f"a' = {da}"))
    entries.append(_poly_entry("(51) b > 0", positive_on(b), f"b = {b}"))
    if theta != 0:
        entries.append(_poly_entry("(51) b' <= 0", nonnegative_on(-db), f"b' = {db}"))
    else:
        entries.append(CheckEntry("(51) b' <= 0", True, None, "b^0 is constant"))
    if a is not None:
        A = P * a + _R * a.deriv()
        entries.append(_poly_entry("A > 0", positive_on(A), f"A = {A}"))
        entries.append(_poly_entry("A non-decreasing", nonnegative_on(A.deriv()), f"A' = {A.deriv()}"))
        # B for b^theta equals b^(theta-1) times this polynomial
        c = n * P / (Q + 1) - (n - P)
        Bp = c * b + (P * theta / (Q + 1)) * _R * db
        entries.append(_poly_entry("B > 0", positive_on(Bp), f"B ~ {Bp}"))
    d2b = db.deriv()
    ratio_num = (db + _R * d2b) * b - _R * db * db
    if theta != 0:
        entries.append(_poly_entry("rb'/b non-increasing", nonnegative_on(-ratio_num), f"(rb'/b)' ~ {ratio_num}"))
        if theta == 1:
            rb_d = db + _R * d2b
            entries.append(_poly_entry("rb' non-increasing", nonnegative_on(-rb_d), f"(rb')' = {rb_d}"))
        else:
            # (r (b^theta)')' = theta b^(theta-2) [...]: the bracket carries the sign only where b > 0
            rb_num = (db + _R * d2b) * b + (theta - 1) * _R * db * db
            b_ok, b_witness = positive_on(b)
            if b_ok:
                entries.append(_poly_entry("rb' non-increasing", nonnegative_on(-rb_num), f"(rb')' ~ {rb_num}"))
            else:
                entries.append(CheckEntry("rb' non-increasing", False, b_witness, "undefined: b^theta needs b > 0"))
    else:
        entries.append(CheckEntry("rb'/b non-increasing", True, None, "b^0 is constant"))
        entries.append(CheckEntry("rb' non-increasing", True, None, "b^0 is constant"))
    ok22 = Q > P - 1
    entries.append(CheckEntry("(22)", ok22, None if ok22 else float(q), "u f_u - (p-1) f = (q-p+1) b u^q"))
    return entries


def check_model_hypotheses(spec: ProblemSpec) -> HypothesisReport:
    """Exact audit of the power-type families on (0, 1).

    A ModelAB with a_scale = 0 is audited as a pure power family.
    """
    nl = spec.nonlinearity
    if isinstance(nl, PureB):
        nl = nl.as_model_ab()
    if not isinstance(nl, ModelAB):
        raise TypeError("check_model_hypotheses expects ModelAB or PureB")
    theta = as_fraction(nl.b_power)
    a = None if nl.a_scale == 0 or nl.a.is_zero else nl.a * as_fraction(nl.a_scale)
    entries = _exact_audit(spec.p, spec.n, nl.q, a, nl.b, theta)
    if a is not None and nl.a_scale < 0:
        entries.append(CheckEntry("a_scale >= 0", False, float(nl.a_scale), "negative linear coefficient scale"))
    return HypothesisReport(tuple(entries))


def check_autonomous_hypotheses(spec: ProblemSpec, probe: float = 1e-5) -> HypothesisReport:
    """Conditions (2), (3), (14) and growth for a polynomial f(u)."""
    nl = spec.nonlinearity
    if isinstance(nl, LinearTest):
        nl = Autonomous1D(Polynomial([0, 1]))
    if not isinstance(nl, Autonomous1D):
        raise TypeError("check_autonomous_hypotheses expects a polynomial nonlinearity")
    f, P = nl.poly, as_fraction(spec.p)
    entries = []
    pattern = sign_pattern(f, 0, None)
    signs = [s for _, s in pattern]
    has_gamma = signs == [-1, 1]
    ok2 = has_gamma or signs == [1]
    witness = None if ok2 else float(next((x for x, s in pattern if s <= 0), pattern[0][0]))
    entries.append(CheckEntry("(2)", ok2, witness, "f < 0 on (0, gamma), f > 0 above" if has_gamma else "f > 0 on (0, inf)"))

    g = _R * f.deriv() - P * f + f  # u f' - (p-1) f
    lo = _gamma_box(f)[0][0] if has_gamma else Fraction(0)
    ok3, w3 = positive_on(g, lo, None)
    entries.append(CheckEntry("(3)", ok3, w3, f"u f' - (p-1) f = {g.render('u')} on (gamma, inf)"))

    low = f.lowest_nonzero()
    if low is not None and low[0] == 0:
        entries.append(CheckEntry("(14)", True, None, "not required: f(0) != 0"))
    else:
        k, ck = low
        ok14 = ck > 0 or k >= P - 1
        s1, s2 = probe, probe / 10
        if -f(s1) > 0 and -f(s2) > 0:
            slope = math.log(-f(s1) / -f(s2)) / math.log(10.0)
            detail = f"-f(s) ~ s^{slope:.6g} for small s"
        else:
            slope = None
            detail = "f > 0 for small s"
        entries.append(CheckEntry("(14)", ok14, slope if slope is not None else None, detail))

    deg, lead = f.degree, f.leading()
    ok_growth = lead > 0 and deg > min(1, P - 1)
    entries.append(CheckEntry("growth", ok_growth, None if ok_growth else float(deg), f"f ~ {lead} u^{deg} at infinity"))
    return HypothesisReport(tuple(entries))


def _gamma_box(f: Polynomial):
    from .polynomial import _root_boxes

    boxes = [bx for bx in _root_boxes(f, Fraction(0), None, Fraction(1, 10**30)) if bx[1] > 0]
    return boxes[:1]


def check_hypotheses(spec: ProblemSpec) -> HypothesisReport:
    if isinstance(spec.nonlinearity, (ModelAB, PureB)):
        return check_model_hypotheses(spec)
    return check_autonomous_hypotheses(spec)


# one-dimensional identities ------------------------------------------------------------


@dataclass(frozen=True)
class OneDimIdentities:
    wronskian: float
    wronskian_deviation: float
    T_residual: float
    energy_deviation: float
    x0: float | None
    q_x0: float | None
    combination7: float | None
    w_prime_x0: float | None
    report: HypothesisReport


def one_dim_identities(solution: RadialSolution, linearized: LinearizedTrajectory | None = None) -> OneDimIdentities:
    """Wronskian constancy, T' = p lam f w, q(x0) < 0 and the signs of (p-1) w phi(u') - u z and w' at x0, for n = 1."""
    spec = solution.spec
    if spec.n != 1:
        raise ValueError("one-dimensional identities need n = 1")
    lin = _linearized(solution, linearized)
    grid = _grid(solution)
    s = _State(solution, lin, grid)
    p = spec.p
    W = -s.f * s.w - s.up * s.z
    scale = float(np.max(np.abs(s.f * s.w)) + np.max(np.abs(s.up * s.z))) or 1.0
    wdev = float(np.max(np.abs(W - W[0])) / scale)
    T_res = _integrated_residual(solution, lin, grid, _State.T, _State.d_T)
    E = s.energy()
    edev = float(np.max(np.abs(E - E[0])) / (np.max(np.abs(E)) or 1.0))
    entries = [
        CheckEntry("wronskian constant", wdev < 1e-7, float(grid[int(np.argmax(np.abs(W - W[0])))]), f"W = {W[0]:.12g}, deviation {wdev:.3g}"),
        CheckEntry("T' = p lam f w", T_res < 1e-6, None, f"integrated residual {T_res:.3g}"),
        CheckEntry("energy constant", edev < 1e-8, None, f"deviation {edev:.3g}"),
    ]
    gamma = spec.gamma(0.0)
    x0 = q0 = c7 = wp0 = None
    if gamma <= 0:
        entries.append(CheckEntry("x0", True, None, "f > 0 on (0, inf): no interior sign change"))
    elif solution.alpha <= gamma:
        entries.append(CheckEntry("x0", False, 0.0, "u(0) <= gamma: f(u(0)) <= 0, not a valid positive solution"))
    else:
        tr = solution.trajectory
        x0 = float(brentq(lambda x: float(tr.dense(x)[0]) - gamma, grid[0], grid[-1], xtol=1e-12, rtol=1e-15))
        at = _State(solution, lin, np.array([x0]))
        up, u, w, z = float(at.up[0]), float(at.u[0]), float(at.w[0]), float(at.z[0])
        q0 = (p - 1) * (1 - x0) * phi(up, p) + phi_prime(up, p) * u
        c7 = (p - 1) * w * phi(up, p) - u * z
        wp0 = z / phi_prime(up, p)
        entries += [
            CheckEntry("x0", True, x0, f"u(x0) = gamma = {gamma:.12g}"),
            CheckEntry("q(x0) < 0", q0 < 0, x0, f"q(x0) = {q0:.6g}"),
            CheckEntry("xi-type combination positive", c7 > 0, x0, f"value {c7:.6g}"),
            CheckEntry("w'(x0) < 0", wp0 < 0, x0, f"w'(x0) = {wp0:.6g}"),
        ]
    return OneDimIdentities(float(W[0]), wdev, T_res, edev, x0, q0, c7, wp0, HypothesisReport(tuple(entries)))
