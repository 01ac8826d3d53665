import time

import pytest

_CRITERIA: dict = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call":
        return
    num = mark.args[0]
    entry = _CRITERIA.setdefault(num, {"ok": True, "secs": 0.0, "notes": []})
    entry["secs"] += call.duration if hasattr(call, "duration") else 0.0
    if hasattr(rep, "wasxfail"):
        entry["ok"] = False
        entry["notes"].append(f"{item.name}: expected failure ({rep.wasxfail})")
    elif not rep.passed:
        entry["ok"] = False
        entry["notes"].append(f"{item.name}: failed")


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_CRITERIA):
        e = _CRITERIA[num]
        line = f"criterion {num}: {'PASS' if e['ok'] else 'FAIL'} ({e['secs']:.2f} s)"
        terminalreporter.write_line(line)
        for note in e["notes"]:
            terminalreporter.write_line(f"    {note}")


@pytest.fixture
def timer():
    start = time.perf_counter()
    yield lambda: time.perf_counter() - start
