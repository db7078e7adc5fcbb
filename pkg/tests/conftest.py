import pytest

from gradedhom.gring import Generator, GradedRing, localize
from gradedhom.site import catalog_closure, worked_example


def ring(names, relations=(), inverted=()):
    return GradedRing.build([Generator(n) for n in names], relations, inverted)


@pytest.fixture(scope="session")
def R():
    return ring("xy", ["x*y"])


@pytest.fixture(scope="session")
def Qx():
    return ring("x")


@pytest.fixture(scope="session")
def example():
    return worked_example(10)


@pytest.fixture(scope="session")
def closed(example):
    return catalog_closure(example.catalog, 2)


CRITERIA = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call with (number, title) then the test body runs."""
    state = {}

    def start(number, title):
        state["key"] = (number, title)

    yield start
    if "key" in state:
        number, title = state["key"]
        failed = getattr(request.node, "rep_call", None)
        ok = failed is not None and failed.passed
        CRITERIA[number] = f"{'PASS' if ok else 'FAIL'} criterion {number}: {title}"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(CRITERIA):
            terminalreporter.write_line(CRITERIA[n])
