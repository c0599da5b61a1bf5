import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number")


def pytest_runtest_logreport(report):
    crit = getattr(report, "_criterion", None)
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry = _CRITERIA.setdefault(crit[0], {"title": crit[1], "passed": 0, "failed": 0})
        entry["passed" if report.outcome == "passed" else "failed"] += 1


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    m = item.get_closest_marker("criterion")
    if m is not None:
        rep._criterion = (m.args[0], m.args[1])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        e = _CRITERIA[n]
        status = "PASS" if e["failed"] == 0 else "FAIL"
        total = e["passed"] + e["failed"]
        terminalreporter.write_line(f"criterion {n:2d} {status}  {e['title']}  ({e['passed']}/{total} checks passed)")
