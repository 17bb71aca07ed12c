import re

import pytest

from decbrw import field as fa

_CRITERION = re.compile(r"test_c(\d+)_(\w+)")
_results: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    m = _CRITERION.match(name)
    if m is None or "test_acceptance" not in report.nodeid:
        return
    num = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and not report.passed):
        outcome = "PASS" if report.passed else ("SKIP" if report.skipped else "FAIL")
        if outcome == "PASS" and ("criterion_status", "WARN") in report.user_properties:
            outcome = "WARN"
        # parametrized criteria report their worst case
        prev = _results.get(num, ("PASS", ""))[0]
        rank = ["PASS", "SKIP", "WARN", "FAIL"]
        worst = max(prev, outcome, key=rank.index)
        _results[num] = (worst, m.group(2).split("[")[0])


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_results):
        outcome, label = _results[num]
        terminalreporter.write_line(f"criterion {num:2d} {label:<28s} {outcome}")


CONFIGS = {"P1305": fa.P1305, "P1271": fa.P1271, "P1271_4L": fa.P1271_4L}


@pytest.fixture(params=list(CONFIGS), ids=list(CONFIGS))
def cfg(request):
    return CONFIGS[request.param]
