import pytest

from fibertypes.ring import ring_make
from fibertypes.tree import tree_ball


@pytest.fixture(scope="session")
def ball3():
    """Vertex ball of radius 3 for q = 3."""
    return tree_ball(ring_make(3, 1, 8), 3)


@pytest.fixture(scope="session")
def ball5():
    return tree_ball(ring_make(5, 1, 8), 3)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n])
