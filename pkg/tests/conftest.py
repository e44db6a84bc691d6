import numpy as np
import pytest

_CRITERIA: dict[int, tuple[str, str]] = {}


@pytest.fixture
def rng():
    return np.random.Generator(np.random.Philox(12345))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, text = marker.args
    if report.when == "call" or (report.failed and number not in _CRITERIA):
        _CRITERIA[number] = ("PASS" if report.passed else "FAIL", text)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        status, text = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {text}")
