import os

import pytest

from comdef.lattice import named_lattice
from comdef.universe import UniverseSpec, build_universe

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")

SMALL_RECIPE = {
    "name": "small",
    "group_exponents": [1, 2],
    "max_m": 2,
    "nil": [
        {"family": "D", "k": 2},
        {"family": "D", "k": 3},
        {"family": "N", "k": 2},
        {"family": "N", "k": 3},
    ],
    "space": {"dA": 8, "dB": 4, "dC": 6},
}


def pytest_addoption(parser):
    parser.addoption(
        "--runslow",
        action="store_true",
        default=False,
        help="Also run tests that build the packaged fragments.",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def chain3():
    return named_lattice("chain", 3)


@pytest.fixture
def chain5():
    return named_lattice("chain", 5)


@pytest.fixture
def m3():
    return named_lattice("M3")


@pytest.fixture
def n5():
    return named_lattice("N5")


@pytest.fixture(scope="session")
def small_spec():
    return UniverseSpec.from_json(SMALL_RECIPE)


@pytest.fixture(scope="session")
def small_universe(small_spec):
    return build_universe(small_spec)


@pytest.fixture(scope="session")
def fragment_f2():
    return build_universe(UniverseSpec.load("builtin:F2"))


@pytest.fixture(scope="session")
def fragment_nz():
    return build_universe(UniverseSpec.load("builtin:NZ"))
