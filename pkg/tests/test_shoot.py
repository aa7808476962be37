import math

import pytest

from oracles import CUBIC_SHIFTED, PI2_OVER_4, SQRT2, pure_power_lambda
from plap.errors import AdmissibilityError, BracketError, PlapError
from plap.ivp import integrate_radial
from plap.model import Autonomous1D, LinearTest, ModelAB, ProblemSpec, PureB
from plap.polynomial import Polynomial
from plap.shoot import (
    BOUNDARY_TOL,
    is_degenerate,
    solve_at_lambda,
    solve_autonomous_by_scaling,
    solve_from_boundary,
)
from plap.timemap import time_map_lambda

SHIFTED = Autonomous1D(Polynomial(CUBIC_SHIFTED))


def power(q):
    return Autonomous1D(Polynomial([0] * q + [1]))


def test_recovers_time_map_amplitude():
    lam = time_map_lambda(SHIFTED, 2, 2.0).lam
    sol = solve_at_lambda(ProblemSpec(2, 1, SHIFTED), lam)
    assert sol.alpha == pytest.approx(2.0, rel=1e-6)
    assert sol.method == "center"


def test_amplitude_scaling_sixteen():
    spec = ProblemSpec(2, 1, power(3))
    a1 = solve_at_lambda(spec, 1.0).alpha
    a16 = solve_at_lambda(spec, 16.0).alpha
    assert a16 == pytest.approx(a1 / 4, rel=1e-6)


def test_no_solution_is_reported_not_fabricated():
    # n = 3: alpha tends to the ground-state amplitude and u'(1) decays like exp(-sqrt(lambda))
    spec = ProblemSpec(2, 3, ModelAB(Polynomial([1]), Polynomial([1]), 3))
    with pytest.raises(BracketError):
        solve_at_lambda(spec, 1e4)


def test_impossible_bracket():
    with pytest.raises(BracketError):
        solve_at_lambda(ProblemSpec(2, 1, SHIFTED), 1.0, (0.1, 0.2))


def test_scaling_eigen_oracle():
    lam, sol = solve_autonomous_by_scaling(ProblemSpec(2, 1, LinearTest()), 1.0)
    assert lam == pytest.approx(PI2_OVER_4, rel=1e-8)
    assert sol.extras["R"] == pytest.approx(math.pi / 2, rel=1e-8)


def test_scaling_matches_time_map_p3():
    lam, _ = solve_autonomous_by_scaling(ProblemSpec(3, 1, power(5)), 1.0)
    assert lam == pytest.approx(time_map_lambda(power(5), 3, 1.0).lam, rel=1e-6)


def test_scaling_refuses_theta():
    with pytest.raises(PlapError):
        solve_autonomous_by_scaling(ProblemSpec(2, 1, SHIFTED), SQRT2)


@pytest.mark.parametrize("p,q", [(2, 3), (3, 5), (1.5, 3)])
def test_amplitude_power_law(p, q):
    spec = ProblemSpec(p, 1, power(q))
    vals = []
    for a in (0.5, 1.0, 2.0, 4.0):
        lam, _ = solve_autonomous_by_scaling(spec, a, with_linearized=False)
        assert lam == pytest.approx(pure_power_lambda(p, q, a), rel=1e-6)
        vals.append(lam * a ** (q - (p - 1)))
    assert max(vals) / min(vals) - 1 < 1e-5


@pytest.mark.parametrize(
    "spec,lam",
    [
        (ProblemSpec(2, 1, SHIFTED), 1.0),
        (ProblemSpec(2, 3, PureB(Polynomial([1]), 3)), 1.0),
        (ProblemSpec(3, 3, PureB(Polynomial([2, 0, -1]), 4)), 2.0),
        (ProblemSpec(1.5, 2, power(3)), 5.0),
    ],
)
def test_shooting_consistency_and_hopf(spec, lam):
    sol = solve_at_lambda(spec, lam)
    again = integrate_radial(spec, lam, sol.alpha, stop_at_zero=False)
    assert abs(again.u[-1]) <= 2 * BOUNDARY_TOL
    assert sol.u_prime_at_one < -1e-10
    assert "multiplicity_risk" not in sol.flags


def test_boundary_shooting_agrees_with_center():
    spec = ProblemSpec(2, 1, SHIFTED)
    lam = time_map_lambda(SHIFTED, 2, 2.0).lam
    sol = solve_from_boundary(spec, lam)
    assert sol.alpha == pytest.approx(2.0, rel=1e-9)
    assert sol.method == "boundary"


def test_degenerate_eigen_pair():
    _, sol = solve_autonomous_by_scaling(ProblemSpec(2, 1, LinearTest()), 1.0)
    margin, flag = is_degenerate(sol)
    assert flag and abs(margin) < 1e-8


def test_subcritical_power_is_nondegenerate():
    sol = solve_at_lambda(ProblemSpec(2, 3, power(3)), 1.0)
    margin, flag = is_degenerate(sol)
    assert not flag and abs(margin) > 1e-3


def test_degeneracy_flag_invariant_under_scaling():
    from dataclasses import replace

    from plap.ivp import integrate_linearized

    for spec in (ProblemSpec(2, 3, power(3)), ProblemSpec(2, 1, LinearTest())):
        if isinstance(spec.nonlinearity, LinearTest):
            _, sol = solve_autonomous_by_scaling(spec, 1.0)
        else:
            sol = solve_at_lambda(spec, 1.0)
        flag = is_degenerate(sol)[1]
        for c in (-2.0, 1e-3, 7.5):
            lin = integrate_linearized(spec, sol.lam, sol.trajectory, w0=c)
            assert is_degenerate(replace(sol, linearized=lin))[1] == flag


def test_multiplicity_flag_logic():
    from plap.shoot import _monotone

    assert _monotone({0.5: 0.3, 0.99: 0.01, 1.0: 0.0, 1.01: -0.01}, 1.0)
    # a turn inside the root neighbourhood is reported
    assert not _monotone({0.99: 0.01, 1.0: 0.0, 1.01: 0.02}, 1.0)
    # differences at noise level are ignored
    assert _monotone({0.99: 1e-12, 1.0: 2e-12, 1.01: -1e-3}, 1.0)
