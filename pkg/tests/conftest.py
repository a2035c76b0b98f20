import pytest
from hypothesis import HealthCheck, settings

from schurlab.enumeration import enumerate_srings
from schurlab.groups import make_group
from schurlab.srings import SRing

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def e9():
    return make_group([3, 3])


@pytest.fixture(scope="session")
def e9_catalog(e9):
    return enumerate_srings(e9)


@pytest.fixture(scope="session")
def order18_catalog():
    return enumerate_srings(make_group([2, 3, 3]))


@pytest.fixture(scope="session")
def shrikhande():
    """Rank-3 S-ring over C4 x C4 whose Cayley graph is the Shrikhande graph.

    It is not schurian: the full automorphism group of the graph has a
    point stabiliser that merges the two non-trivial classes differently.
    """
    G = make_group([4, 4])
    S = [G.index(c) for c in [(0, 1), (0, 3), (1, 0), (3, 0), (1, 1), (3, 3)]]
    rest = [g for g in range(1, 16) if g not in S]
    return SRing.from_partition(G, [[0], S, rest])


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", help="run the multi-minute catalog tests")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


_ACCEPTANCE: list[str] = []


@pytest.fixture(scope="session")
def acceptance_log():
    return _ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in sorted(_ACCEPTANCE, key=lambda s: int(s.split()[0][1:])):
            terminalreporter.write_line(line)
