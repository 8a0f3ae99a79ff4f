import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    """Print one PASS/FAIL line per acceptance criterion as it completes."""
    outcome = yield
    report = outcome.get_result()
    if report.when != "call":
        return
    if not item.nodeid.split("::", 1)[0].endswith("test_acceptance.py"):
        return
    reporter = item.config.pluginmanager.get_plugin("terminalreporter")
    if reporter is not None:
        status = "PASS" if report.passed else "FAIL"
        reporter.write_line(f"[acceptance] {status} {item.name}")
