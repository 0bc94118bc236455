import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_criteria: dict[int, dict] = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion a test belongs to")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            num, title = mark.args
            _criteria.setdefault(num, {"title": title, "tests": {}})
            _criteria[num]["tests"][item.nodeid] = None


def pytest_runtest_logreport(report):
    for entry in _criteria.values():
        if report.nodeid in entry["tests"]:
            prev = entry["tests"][report.nodeid]
            if report.when == "call" or report.failed:
                if prev != "failed":
                    entry["tests"][report.nodeid] = "failed" if report.failed else report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_criteria):
        entry = _criteria[num]
        outcomes = list(entry["tests"].values())
        if any(o is None for o in outcomes):
            status = "NOT RUN"
        elif all(o == "passed" for o in outcomes):
            status = "PASS"
        else:
            status = "FAIL"
        failed = [nid.split("::", 1)[1] for nid, o in entry["tests"].items() if o == "failed"]
        line = f"criterion {num} ({entry['title']}): {status}"
        if failed:
            line += "  [failing: " + ", ".join(failed) + "]"
        terminalreporter.write_line(line)


@pytest.fixture
def rng():
    import random

    return random.Random(1234)
