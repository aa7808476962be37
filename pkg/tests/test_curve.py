import math

import numpy as np
import pytest

from conftest import B_DECREASING, one_dim, pure_start, switch_start
from oracles import CUBIC_MINUS_ONE, CUBIC_SHIFTED, lambda0_cubic_minus_one, pure_power_lambda
from plap.curve import SolutionCurve, classify_curve, detect_lambda0, homotopy_member, trace_homotopy, trace_lambda_curve
from plap.errors import BracketError, HomotopyError, PlapError
from plap.model import ModelAB, ProblemSpec, PureB
from plap.polynomial import Polynomial
from plap.shoot import solve_at_lambda, solve_from_boundary


def test_power_curve_scaling_law(cubic_curve):
    curve = cubic_curve.value
    inv = [pt.alpha * math.sqrt(pt.parameter) for pt in curve.points]
    assert max(inv) / min(inv) - 1 < 1e-5
    assert curve.shape.folds_detected == 0
    assert curve.shape.trend_exponent == pytest.approx(-0.5, abs=1e-3)
    assert curve.stop_reason == "completed"


def test_step_doubling_stable(cubic_curve):
    coarse = trace_lambda_curve(one_dim([0, 0, 0, 1]), (0.5, 50.0), 7)
    fine = cubic_curve.value
    for k, pt in enumerate(coarse.points):
        twin = fine.points[2 * k]
        assert twin.parameter == pytest.approx(pt.parameter, rel=1e-14)
        assert abs(twin.alpha - pt.alpha) < 1e-7


def test_extinction_curve(extinction_curve):
    curve = extinction_curve.value
    assert curve.stop_reason == "lambda0"
    assert curve.lambda0 == pytest.approx(lambda0_cubic_minus_one(), rel=1e-6)
    assert abs(curve.points[-1].u_prime_at_one) < 1e-6
    shape = classify_curve(curve)
    assert shape.folds_detected == 0 and shape.alpha_monotone
    assert shape.template == "f(0)<0"


def test_detect_lambda0_and_beyond():
    spec = one_dim(CUBIC_MINUS_ONE)
    lam0 = detect_lambda0(spec, (1.0, 10.0))
    assert lam0 == pytest.approx(lambda0_cubic_minus_one(), rel=1e-6)
    with pytest.raises(BracketError):
        solve_at_lambda(spec, 1.01 * lam0)
    with pytest.raises(BracketError):
        solve_from_boundary(spec, 1.01 * lam0)


def test_detect_lambda0_infinite_for_nonnegative_f():
    assert math.isinf(detect_lambda0(one_dim([0, 0, 0, 1]), (0.5, 1000.0)))


def test_decay_curve(decay_curve):
    curve = decay_curve.value
    assert curve.stop_reason == "completed"
    assert curve.points[-1].parameter == pytest.approx(1000.0)
    mid = [float(pt.solution.trajectory.dense(0.5)[0]) for pt in curve.points]
    assert np.all(np.diff(mid) < 0)
    assert mid[-1] < 1e-3
    shape = classify_curve(curve)
    assert math.isinf(shape.lambda0) and shape.template == "f(0)=0" and shape.folds_detected == 0


def test_detect_lambda0_infinite_for_zero_at_origin():
    assert math.isinf(detect_lambda0(one_dim([0, -1, 0, 1]), (0.5, 1000.0)))


def test_amplitude_blows_up_as_lambda_vanishes():
    curve = trace_lambda_curve(one_dim(CUBIC_SHIFTED), (1e-6, 1.0), 13, seed_at="high")
    low = curve.points[0]
    assert low.parameter == pytest.approx(1e-6)
    assert low.alpha > 1e3
    # the cubic term dominates: lambda alpha^2 tends to the pure-power constant
    assert low.parameter * low.alpha**2 == pytest.approx(pure_power_lambda(2, 3, 1.0), rel=1e-5)
    assert curve.shape.trend_exponent == pytest.approx(-0.5, abs=1e-3)
    assert curve.shape.alpha_monotone


def test_classify_needs_three_points(cubic_curve):
    c = cubic_curve.value
    short = SolutionCurve(c.spec, c.points[:2], "lambda", "completed")
    with pytest.raises(ValueError):
        classify_curve(short)


def test_homotopy_members():
    start = pure_start(3)
    assert homotopy_member(start, "coefficientPower", 0.5).nonlinearity.b_power == 0.5
    sw = homotopy_member(switch_start(2), "linearTermSwitch", 0.3)
    assert sw.nonlinearity.a_scale == 0.3
    with pytest.raises(ValueError):
        homotopy_member(start, "linearTermSwitch", 0.5)


def test_homotopy_start_matches_direct_solve(homotopy_chain):
    power, switch, back = homotopy_chain.value
    direct = solve_at_lambda(ProblemSpec(2, 2, PureB(Polynomial([1]), 3)), 1.0)
    assert power.points[0].alpha == pytest.approx(direct.alpha, rel=1e-8)
    # the two legs meet at b = 2 - r^2 without the linear term
    assert switch.points[0].alpha == pytest.approx(power.points[-1].alpha, rel=1e-8)


def test_homotopy_endpoints(homotopy_chain):
    power, switch, back = homotopy_chain.value
    for curve in (power, switch):
        end = curve.points[-1].solution
        assert abs(end.u_at_one) < 1e-8
        margins = [pt.degeneracy_margin for pt in curve.points]
        assert len({np.sign(m) for m in margins}) == 1
        assert min(abs(m) for m in margins) > 1e-4 * np.median(np.abs(margins))
    assert back.points[0].alpha == pytest.approx(switch.points[0].alpha, abs=1e-6)


def test_pure_power_homotopy_three_dimensions():
    curve = trace_homotopy(pure_start(3), "coefficientPower", 10)
    assert abs(curve.points[-1].solution.u_at_one) < 1e-8
    assert curve.points[-1].alpha < curve.points[0].alpha


def test_switch_refused_when_audit_fails():
    # with n = 3 the audited B ~ 1 - 1.5 r^2 changes sign once the linear term is on (n = 2 gives 2 - 2 r^2)
    with pytest.raises(HomotopyError) as exc:
        trace_homotopy(switch_start(3), "linearTermSwitch", 10)
    assert "B > 0" in str(exc.value)
