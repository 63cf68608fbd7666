"""Collects outcomes of tests tagged with an acceptance criterion and prints one line per criterion."""

import pytest

_criteria: dict[int, dict] = {}


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            number, title = mark.args
            entry = _criteria.setdefault(number, {"title": title, "passed": True, "seen": 0, "ran": 0})
            entry["seen"] += 1


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    entry = _criteria[mark.args[0]]
    if report.when == "call":
        entry["ran"] += 1
    if report.failed:
        entry["passed"] = False


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        e = _criteria[number]
        complete = e["ran"] == e["seen"]
        verdict = "PASS" if e["passed"] and complete else ("FAIL" if not e["passed"] else "NOT RUN")
        terminalreporter.write_line(f"criterion {number}: {verdict}  {e['title']}")
