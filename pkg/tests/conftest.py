import pytest

from koszulkt.cartan import build_cartan

_criteria: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, text): acceptance criterion checked by this test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        prev = _criteria.get(number)
        status = "PASS" if rep.passed else "FAIL"
        if prev and prev[1] == "FAIL":
            status = "FAIL"
        _criteria[number] = (text, status)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        text, status = _criteria[number]
        terminalreporter.write_line(f"[{status}] criterion {number:2d}: {text}")


@pytest.fixture(scope="session")
def A1():
    return build_cartan("A1")


@pytest.fixture(scope="session")
def A2():
    return build_cartan("A2")


@pytest.fixture(scope="session")
def B2():
    return build_cartan("B2")


@pytest.fixture(scope="session")
def G2():
    return build_cartan("G2")
