import time

import pytest

from wnnm.cone import ProblemShape
from wnnm.linalg import WeightProfile
from wnnm.phase import SolverConfig, sweep_phase

PHASE_SHAPE = ProblemShape(10, 10, 2)
PHASE_GRID = list(range(5, 101, 5))
PHASE_TRIALS = 50
PHASE_SEED = 20240601

_criteria = []


def run_phase_sweep(weights):
    start = time.perf_counter()
    res = sweep_phase(PHASE_SHAPE, weights, PHASE_GRID, PHASE_TRIALS, SolverConfig(), PHASE_SEED)
    return res, time.perf_counter() - start


@pytest.fixture(scope="session")
def ones_sweep():
    return run_phase_sweep(WeightProfile.ones(2, 10))


@pytest.fixture(scope="session")
def weighted_sweep():
    return run_phase_sweep(WeightProfile((0.3, 0.3), 1.0, 10))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when != "call" and not (report.when == "setup" and report.failed):
        return
    _criteria.append((marker.args[0], marker.args[1], report.outcome))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, outcome in sorted(_criteria):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  criterion {number:>2}: {title}")
