import pytest

from opm_fixpoint import ExprMap, FiniteOrderedMetricSpace, RealVectorSpace, TableMap


def make_two_point_space():
    return FiniteOrderedMetricSpace(
        ["0", "1"], [[0.0, 2.0], [2.0, 0.0]], [("0", "0"), ("0", "1"), ("1", "1")]
    )


def make_two_point_map():
    return TableMap([("0", "0", "0"), ("0", "1", "0"), ("1", "0", "1"), ("1", "1", "1")])


@pytest.fixture
def two_point_space():
    return make_two_point_space()


@pytest.fixture
def two_point_map():
    return make_two_point_map()


@pytest.fixture
def line():
    return RealVectorSpace(1, "L1", ((-1.0, 1.0),))


@pytest.fixture
def linear_map():
    return ExprMap.from_strings(["(x1 - 2*y1)/8"], 1)


_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when not in ("setup", "call"):
        return
    number, title = mark.args
    ok = rep.passed and _CRITERIA.get(number, (True,))[0]
    if rep.when == "call" or not rep.passed:
        _CRITERIA[number] = (ok, title)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        ok, title = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
