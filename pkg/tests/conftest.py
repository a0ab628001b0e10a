import pytest

from stkm import Dataset, EventInstance, EventType, NeighborhoodConfig, SpaceExtent

_criteria: list[tuple[str, bool, str]] = []


@pytest.fixture
def criterion():
    """Record an acceptance criterion result; printed in the terminal summary."""
    def record(name, passed, detail=""):
        _criteria.append((name, bool(passed), detail))
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _criteria:
        mark = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{mark}] {name}" + (f"  ({detail})" if detail else ""))


def make_dataset(rows, dsize=100.0, tsize=20.0, dims=1, labels=()):
    """rows: (id, label, x or (x, y), t)"""
    recs = [(i, lab, loc if isinstance(loc, tuple) else (loc,), t) for i, lab, loc, t in rows]
    return Dataset.from_records(recs, SpaceExtent.square(dsize, tsize, dims), labels=labels)


@pytest.fixture
def ratio_fixture():
    """One A and three Bs in a 1-D space of volume 20 * 100."""
    return make_dataset([
        ("a1", "A", 0.0, 0.0),
        ("b1", "B", 1.0, 1.0),
        ("b2", "B", 2.0, 1.0),
        ("b3", "B", 50.0, 15.0),
    ])


@pytest.fixture
def cube5():
    return NeighborhoodConfig("cube", 5.0, 5.0)


@pytest.fixture
def chain_dataset():
    """Three A->B->C->D chains in a 1-D space plus a few stray instances."""
    rows = []
    for n, x in enumerate((19.0, 83.0, 50.0), start=1):
        rows += [
            (f"a{n}", "A", x, 1.0),
            (f"b{n}", "B", x + 2, 3.0),
            (f"c{n}", "C", x + 1, 7.0),
            (f"d{n}", "D", x - 1, 11.0),
        ]
    # a few unrelated instances
    rows += [("b4", "B", 1.0, 15.0), ("c4", "C", 99.0, 2.0), ("d4", "D", 35.0, 19.0)]
    return make_dataset(rows)
