import pytest

from connwidth.core import ConnectivitySystem, GraphCut, Table

ACCEPTANCE_LINES = []


def triangle_system():
    return ConnectivitySystem(GraphCut(("a", "b", "c"), (("a", "b"), ("b", "c"), ("c", "a"))),
                              name="triangle")


def table(elements, values_by_names):
    """Table system from {frozenset of labels: value}."""
    from connwidth.core import GroundSet
    g = GroundSet(tuple(elements))
    vals = [None] * (1 << len(elements))
    for names, v in values_by_names.items():
        vals[g.mask(names)] = v
    return ConnectivitySystem(Table(tuple(elements), tuple(vals)))


@pytest.fixture
def triangle():
    return triangle_system()


@pytest.fixture
def two():
    """n=2 table with f(empty)=f(X)=0 and f({a})=f({b})=1."""
    return table("ab", {(): 0, ("a",): 1, ("b",): 1, ("a", "b"): 0})


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
