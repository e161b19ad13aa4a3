import os

import pytest
from hypothesis import HealthCheck, settings

from tightcodes.certify import certify
from tightcodes.solver import find_configuration
from tightcodes.systems import SpaceDescriptor, build_system, decode_solution

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

RUN_LONG = os.environ.get("TCP_RUN_LONG") == "1"


@pytest.fixture(scope="session")
def hp6():
    """A converged, certified 6-point simplex in HP^2."""
    desc = SpaceDescriptor.parse("hp d=3 n=6")
    cs = build_system(desc)
    res = find_configuration(desc, attempts=3)
    cert = certify(cs, res.point)
    return {"desc": desc, "cs": cs, "result": res, "config": decode_solution(cs, res.point), "cert": cert}


@pytest.fixture(scope="session")
def op2_5():
    desc = SpaceDescriptor.parse("op2 n=5")
    cs = build_system(desc)
    res = find_configuration(desc, attempts=5)
    return {"desc": desc, "cs": cs, "result": res, "config": decode_solution(cs, res.point)}


ACCEPTANCE_LINES: list = []


@pytest.fixture
def report():
    """Record one acceptance line; all lines are repeated in the terminal summary."""

    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} | {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
