import re
from pathlib import Path

import pytest

from strandbench import dsd

DATA = Path(__file__).resolve().parent.parent / "src" / "strandbench" / "data"
GOLDEN = Path(__file__).resolve().parent / "golden"

# every simulate() call in the session is replayed and its census checked
CENSUS_LOG = {"runs": 0, "steps": 0}


def _census_guard(initial, final, trace):
    before = dsd.census(initial)
    s = initial
    for ev in trace:
        assert dsd.species_census(ev.reactants) == dsd.species_census(ev.products), ev
        s = dsd.apply_event(s, ev)
        assert dsd.census(s) == before, f"census drift after {ev}"
    assert s == final
    assert dsd.census(final) == before
    CENSUS_LOG["runs"] += 1
    CENSUS_LOG["steps"] += len(trace)


def pytest_configure(config):
    dsd.add_observer(_census_guard)


def pytest_unconfigure(config):
    if _census_guard in dsd._observers:
        dsd.remove_observer(_census_guard)


_CRITERIA: dict[int, tuple[str, str]] = {}


def pytest_runtest_logreport(report):
    m = re.search(r"test_criterion_(\d+)_(\w+)", report.nodeid)
    if not m:
        return
    n = int(m.group(1))
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA[n] = (m.group(2), "PASS" if report.outcome == "passed" else "FAIL")


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_CRITERIA):
            name, verdict = _CRITERIA[n]
            terminalreporter.write_line(f"criterion {n} [{name}]: {verdict}")
    terminalreporter.write_line(
        f"census conservation checked on {CENSUS_LOG['runs']} simulate runs, {CENSUS_LOG['steps']} events")


@pytest.fixture
def data_dir():
    return DATA
