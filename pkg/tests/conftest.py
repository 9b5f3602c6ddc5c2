from __future__ import annotations

import re
from pathlib import Path

import pytest
from hypothesis import settings

import convexgen
from convexgen.formats import load_instance

DATA = Path(convexgen.__file__).parent / "data"

settings.register_profile("default", deadline=None, derandomize=True)
settings.load_profile("default")

_CRITERION = re.compile(r"test_c(\d\d)_")
_outcomes: dict[int, list[tuple[str, str]]] = {}


@pytest.fixture
def data_dir() -> Path:
    return DATA


@pytest.fixture
def load():
    return lambda name: load_instance(DATA / name)


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    if report.when == "call" or report.outcome != "passed":
        _outcomes.setdefault(int(m.group(1)), []).append((report.nodeid, report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    from test_acceptance import CRITERIA

    terminalreporter.section("acceptance criteria")
    for number, title in CRITERIA.items():
        results = _outcomes.get(number)
        if not results:
            status = "NOT RUN"
        elif all(outcome == "passed" for _, outcome in results):
            status = "PASS"
        else:
            status = "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {status:7s} {title}")
