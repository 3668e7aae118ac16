import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    max_examples=int(os.environ.get("HECKE_HYPOTHESIS_EXAMPLES", "150")),
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

DEFAULT_SEED = 20260611


def pytest_addoption(parser):
    parser.addoption("--seed", type=int, default=int(os.environ.get("HECKE_SEED", DEFAULT_SEED)),
                     help="seed for the randomized property suites")
    parser.addoption("--cases", type=int, default=int(os.environ.get("HECKE_PROPERTY_CASES", "10000")),
                     help="cases per acceptance property suite")


@pytest.fixture(scope="session")
def seed(request):
    return request.config.getoption("--seed")


@pytest.fixture(scope="session")
def cases(request):
    return request.config.getoption("--cases")


_criteria = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (rep.when != "call" and not rep.failed):
        return
    number, title = mark.args
    prev = _criteria.get(number)
    passed = rep.passed and (prev is None or prev[1])
    _criteria[number] = (title, passed, rep.duration + (prev[2] if prev else 0.0))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, passed, seconds = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {title}  ({seconds:.1f}s)")
