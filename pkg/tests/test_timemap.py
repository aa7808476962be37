import math

import numpy as np
import pytest

from oracles import CUBIC_2U, CUBIC_SHIFTED, PI2_OVER_4, SQRT2, p_sine_lambda, pure_power_lambda
from plap.errors import AdmissibilityError
from plap.model import Autonomous1D, LinearTest, ProblemSpec
from plap.polynomial import Polynomial
from plap.shoot import solve_autonomous_by_scaling
from plap.timemap import critical_points, time_map_lambda


def poly(cs):
    return Autonomous1D(Polynomial(cs))


def test_linear_quarter_wave():
    assert time_map_lambda(LinearTest(), 2, 1.0).lam == pytest.approx(PI2_OVER_4, rel=1e-12)


@pytest.mark.parametrize("p", [2, 3, 4])
def test_homogeneous_case_amplitude_free(p):
    # q = p - 1 must stay above min(1, p - 1), which excludes p < 2
    f = LinearTest() if p == 2 else poly([0] * (p - 1) + [1])
    vals = [time_map_lambda(f, p, a).lam for a in (0.5, 1.0, 2.0)]
    assert max(vals) / min(vals) - 1 < 1e-8
    assert vals[0] == pytest.approx(p_sine_lambda(p), rel=1e-9)


def test_theta_refused():
    with pytest.raises(AdmissibilityError):
        time_map_lambda(poly(CUBIC_SHIFTED), 2, SQRT2)
    with pytest.raises(AdmissibilityError):
        time_map_lambda(poly(CUBIC_SHIFTED), 2, 1.2)


def test_critical_points():
    g, t = critical_points(poly(CUBIC_SHIFTED))
    assert (g, t) == (pytest.approx(1.0), pytest.approx(SQRT2))
    assert critical_points(poly([0, 0, 0, 1])) == (0.0, 0.0)
    g, t = critical_points(poly(CUBIC_2U))
    assert (g, t) == (pytest.approx(SQRT2), pytest.approx(2.0))


@pytest.mark.parametrize("p", [1.5, 2.0, 3.0])
@pytest.mark.parametrize("q", [3, 5])
def test_beta_integral_oracle(p, q):
    for a in (0.3, 1.0, 3.0):
        assert time_map_lambda(poly([0] * q + [1]), p, a).lam == pytest.approx(pure_power_lambda(p, q, a), rel=1e-10)


@pytest.mark.parametrize("cs", [CUBIC_SHIFTED, [0, -1, 0, 0, 0, 1]])
def test_node_doubling_stable(cs):
    f = poly(cs)
    theta = critical_points(f)[1]
    for a in (theta * 1.1, theta * 2):
        r1 = time_map_lambda(f, 2, a, nodes=256).lam
        r2 = time_map_lambda(f, 2, a, nodes=512).lam
        assert abs(r1 / r2 - 1) < 1e-9
        assert abs(r2 / time_map_lambda(f, 2, a).lam - 1) < 1e-9


def test_tail_grows_toward_theta():
    f = poly(CUBIC_SHIFTED)
    lams = [time_map_lambda(f, 2, SQRT2 + 10.0**-k).lam for k in range(1, 8)]
    assert np.all(np.diff(lams) > 0)


def test_against_scaling_shooting():
    f = poly(CUBIC_SHIFTED)
    for a in (1.5, 2.5, 5.0):
        lam, _ = solve_autonomous_by_scaling(ProblemSpec(3, 1, f), a, with_linearized=False)
        assert lam == pytest.approx(time_map_lambda(f, 3, a).lam, rel=1e-8)
