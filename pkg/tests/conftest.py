import random

import pytest

from timedfca.lattice import TimedFuzzyContext, time_attribute

# membership grid includes every tested threshold exactly, so ">=" boundaries get exercised
MU_GRID = (0.0, 0.2, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0)


def random_context(rng: random.Random, n_obj: int, n_attr: int, threshold: float,
                   density: float = 0.5) -> TimedFuzzyContext:
    """Random timed context with ``n_attr`` attributes in total (fuzzy + time)."""
    n_time = rng.randint(0, min(3, n_attr))
    n_fuzzy = n_attr - n_time
    objects = tuple(f"g{i}" for i in range(n_obj))
    fuzzy = tuple(f"m{j}" for j in range(n_fuzzy))
    times = tuple(time_attribute(p) for p in range(1, n_time + 1))
    memberships = {}
    for g in objects:
        row = {}
        for m in fuzzy:
            if rng.random() < density:
                row[m] = rng.choice(MU_GRID[4:])
            elif rng.random() < 0.5:
                row[m] = rng.choice(MU_GRID[:5])
        memberships[g] = row
    time_of = {g: rng.choice(times) for g in objects} if times else {}
    return TimedFuzzyContext(objects, fuzzy, times, memberships, time_of, threshold)


@pytest.fixture
def rng():
    return random.Random(20240611)


_ACCEPTANCE = []
_NOTES = []


@pytest.fixture
def acceptance_note():
    """Lines appended here are shown under the acceptance summary."""
    return _NOTES.append


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        _ACCEPTANCE.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _ACCEPTANCE:
        mark = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{mark}  {name}")
    for line in _NOTES:
        terminalreporter.write_line(f"      {line}")
