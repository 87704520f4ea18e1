import sys

import pytest

from hadamard_domains import make_ball, make_polydisc


@pytest.fixture(scope="session")
def p11():
    return make_polydisc(1.0, 1.0)


@pytest.fixture(scope="session")
def ball1():
    return make_ball(1.0)


@pytest.fixture(scope="session")
def hstar_p11(p11):
    from hadamard_domains import h_star_shadow

    return h_star_shadow(p11, 256)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not getattr(mod, "RESULTS", None) and not getattr(mod, "CRITERIA", None):
        return
    terminalreporter.section("acceptance criteria")
    for n, title in mod.CRITERIA.items():
        ok, detail = mod.RESULTS.get(n, (False, "not run or errored"))
        terminalreporter.write_line(f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
