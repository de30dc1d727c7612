# /usr/bin/env python3
# Shared fixtures for the test suite
# Small named spaces, topologies and foliations used across modules

import pytest

from src.core import ConnectivitySpace, GroundSet, brunnian_space, coarse_space
from src.foliation import Foliation
from src.separation import FiniteTopology
from tests.sample_documents import BORROMEAN_TEXT, TOPOLOGY_TEXT


@pytest.fixture
def ground3():
    return GroundSet(("1", "2", "3"))


@pytest.fixture
def b3(ground3):
    """Borromean space: singletons and the whole carrier are connected."""
    return brunnian_space(ground3)


@pytest.fixture
def p3():
    """Path a - b - c."""
    ground = GroundSet(("a", "b", "c"))
    return ConnectivitySpace(ground, (0b011, 0b110), integral=True)


@pytest.fixture
def example_topology(ground3):
    """Opens {1, 2} and {1, 3} with the forced {1}, the empty set and the carrier."""
    return FiniteTopology.from_opens(ground3, (0b011, 0b101, 0b001))


@pytest.fixture
def ground4():
    return GroundSet(("1", "2", "3", "4"))


@pytest.fixture
def two_leaf_foliation(ground4):
    """Leaves {1, 2} and {3, 4} inside a coarse external structure."""
    internal = ConnectivitySpace(ground4, (0b0011, 0b1100), integral=True)
    return Foliation(internal, coarse_space(ground4))


@pytest.fixture
def borromean_file(tmp_path):
    path = tmp_path / "B3.cnc"
    path.write_text(BORROMEAN_TEXT, encoding="utf-8")
    return str(path)


@pytest.fixture
def topology_file(tmp_path):
    path = tmp_path / "example.top"
    path.write_text(TOPOLOGY_TEXT, encoding="utf-8")
    return str(path)
