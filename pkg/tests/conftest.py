import pytest

_results = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("acceptance")
    if mark is None or not mark.args:
        return
    number, title = mark.args
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        passed = call.excinfo is None
        prev = _results.get(number)
        ok = passed and (prev is None or prev[1])
        _results[number] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        title, ok = _results[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
