from __future__ import annotations

import pytest
from hypothesis import settings

from rdca.reactions import from_table, maximal

# wall-clock deadlines make property tests flaky on loaded machines
settings.register_profile("repo", deadline=None)
settings.load_profile("repo")

# 31-entry multiplicity table with K=30, a=3
MULTI_TABLE = (
    0, 0, 1, 3, 10, 12, 16, 17, 18, 19, 20, 21, 22, 23, 24, 25,
    26, 26, 26, 27, 27, 27, 27, 28, 28, 28, 28, 29, 29, 30, 30,
)
MULTI_CORES = {
    (5, 11, 20, 24, 28, 29),
    (5, 11, 20, 24, 29, 29),
    (5, 12, 19, 25, 28, 29),
    (5, 12, 19, 25, 29, 29),
}


@pytest.fixture
def multi_f():
    return from_table(30, 3, MULTI_TABLE)


@pytest.fixture
def max37():
    return maximal(3, 7)


# -- one PASS/FAIL line per acceptance criterion ----------------------------

_criteria: dict[int, list[str]] = {}


def pytest_runtest_logreport(report):
    # count the call phase, or an earlier phase that did not pass
    if report.when != "call" and report.passed:
        return
    for key, value in report.user_properties:
        if key == "criterion":
            _criteria.setdefault(value, []).append(report.outcome)


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            item.user_properties.append(("criterion", mark.args[0]))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_criteria):
        outcomes = _criteria[n]
        status = "PASS" if all(o == "passed" for o in outcomes) else "FAIL"
        terminalreporter.write_line(f"criterion {n:2d}: {status} ({len(outcomes)} check{'s' if len(outcomes) > 1 else ''})")
