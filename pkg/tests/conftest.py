"""Collects acceptance outcomes and prints one line per criterion."""

import pytest

_OUTCOMES: dict[int, tuple[str, str]] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when != "call" and not report.failed:
        return
    number, title = mark.args
    status = "PASS" if report.passed else "FAIL"
    if _OUTCOMES.get(number, ("PASS",))[0] == "PASS":
        _OUTCOMES[number] = (status, title)


def pytest_terminal_summary(terminalreporter):
    if not _OUTCOMES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_OUTCOMES):
        status, title = _OUTCOMES[number]
        terminalreporter.write_line(f"criterion {number:2d} {status}: {title}")
