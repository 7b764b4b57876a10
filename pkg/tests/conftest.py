import numpy as np
import pytest
from hypothesis import strategies as st

from gausschain.chain_model import ChainSpec, Model
from gausschain.symplectic import Coupler, Rotator, Squeezer


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@st.composite
def chains(draw, max_n=8, models=(Model.FULL, Model.ROTATING_WAVE)):
    n = draw(st.integers(2, max_n))
    omega = draw(st.floats(0.3, 3.0))
    ratio = draw(st.floats(-0.3, 0.3))
    model = draw(st.sampled_from(models))
    return ChainSpec(n, omega, ratio * omega, model)


@st.composite
def gates(draw, n):
    kind = draw(st.sampled_from(["r", "s", "c"]))
    angle = draw(st.floats(-10.0, 10.0))
    j = draw(st.integers(1, n))
    if kind == "r":
        return Rotator(j, angle)
    if kind == "s":
        return Squeezer(j, draw(st.floats(-1.5, 1.5)))
    k = draw(st.integers(1, n).filter(lambda k: k != j))
    return Coupler(min(j, k), max(j, k), angle)


# PASS/FAIL lines from tests/test_acceptance.py, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
