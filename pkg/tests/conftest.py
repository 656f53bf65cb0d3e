"""Collects acceptance-criterion outcomes and prints one PASS/FAIL line per criterion."""
import pytest

_RESULTS = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title, limit_s): acceptance criterion with runtime limit")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when not in ("setup", "call"):
        return
    number, title, limit = mark.args
    if report.when == "setup" and report.passed:
        return
    _RESULTS[number] = (title, report.outcome, report.duration, limit)


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_RESULTS):
        title, outcome, duration, limit = _RESULTS[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(
            f"criterion {number}: {verdict}  {title}  ({duration:.2f} s, limit {limit:g} s)")
