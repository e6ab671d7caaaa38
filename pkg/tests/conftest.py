import pytest

_acceptance = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    name = marker.args[0]
    if report.when == "call" or report.failed:
        ok = report.passed and _acceptance.get(name, True)
        _acceptance[name] = ok


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(name): acceptance criterion covered by a test")


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok in _acceptance.items():
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}")
