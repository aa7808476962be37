import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import CUBIC_MINUS_ONE  # noqa: E402
from plap.curve import trace_homotopy, trace_lambda_curve  # noqa: E402
from plap.model import Autonomous1D, ModelAB, ProblemSpec, PureB  # noqa: E402
from plap.polynomial import Polynomial  # noqa: E402

B_DECREASING = Polynomial([2, 0, -1])  # b = 2 - r^2
A_INCREASING = Polynomial([1, 1])  # a = 1 + r


def one_dim(cs, p=2):
    return ProblemSpec(p, 1, Autonomous1D(Polynomial(cs)))


class Timed:
    def __init__(self, fn):
        t = time.perf_counter()
        self.value = fn()
        self.seconds = time.perf_counter() - t


@pytest.fixture(scope="session")
def cubic_curve():
    return Timed(lambda: trace_lambda_curve(one_dim([0, 0, 0, 1]), (0.5, 50.0), 13))


@pytest.fixture(scope="session")
def extinction_curve():
    return Timed(lambda: trace_lambda_curve(one_dim(CUBIC_MINUS_ONE), (0.05, 50.0), 20))


@pytest.fixture(scope="session")
def decay_curve():
    return Timed(lambda: trace_lambda_curve(one_dim([0, -1, 0, 1]), (0.5, 1000.0), 25))


def pure_start(n):
    return ProblemSpec(2, n, PureB(B_DECREASING, 3, b_power=0.0), lam=1.0)


def switch_start(n):
    return ProblemSpec(2, n, ModelAB(A_INCREASING, B_DECREASING, 3, a_scale=0.0), lam=1.0)


@pytest.fixture(scope="session")
def homotopy_chain():
    """b^theta from b = 1 to b = 2 - r^2, then a switched on, forward and back (n = 2)."""
    def run():
        power = trace_homotopy(pure_start(2), "coefficientPower", 10)
        switch = trace_homotopy(switch_start(2), "linearTermSwitch", 10, seed_alpha=power.points[-1].alpha)
        back = trace_homotopy(switch_start(2), "linearTermSwitch", 10, reverse=True, seed_alpha=switch.points[-1].alpha)
        return power, switch, back

    return Timed(run)
