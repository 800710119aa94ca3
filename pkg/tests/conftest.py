"""
Pytest configuration and fixtures for cyclepack tests
"""

import os
import sys

import numpy as np
import pytest

# Sources live under python/
sys.path.insert(
    0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "python")
)

from cyclepack import (  # noqa: E402
    BipartiteTournament,
    Limits,
    MarginMatrix,
    canonical_bipartite,
    canonical_regular_tournament,
    enumerate_eulerian_bipartite,
)


def pytest_configure(config):
    """Configure pytest"""
    config.addinivalue_line("markers", "unit: Unit tests")
    config.addinivalue_line("markers", "integration: End-to-end CLI tests")
    config.addinivalue_line("markers", "slow: Exhaustive and sampled acceptance sweeps")


@pytest.fixture(scope="session")
def jobs():
    """Worker count for sweeps"""
    return int(os.getenv("CYCLEPACK_JOBS", "1"))


@pytest.fixture(scope="session")
def limits(jobs):
    """Default limits with the configured worker count"""
    return Limits().with_jobs(jobs)


@pytest.fixture
def k22():
    """The Eulerian orientation of K_{2,2} (a single directed 4-cycle)"""
    return BipartiteTournament.from_rows(["+-", "-+"])


@pytest.fixture
def k24():
    """Canonical Eulerian K_{2,4}"""
    return canonical_bipartite(2, 4)


@pytest.fixture(scope="session")
def all_k24():
    """All 6 Eulerian orientations of K_{2,4}"""
    return list(enumerate_eulerian_bipartite(2, 4))


@pytest.fixture(scope="session")
def all_k44():
    """All 90 Eulerian orientations of K_{4,4}"""
    return list(enumerate_eulerian_bipartite(4, 4))


@pytest.fixture
def t9():
    """Rotational regular tournament on 9 vertices"""
    return canonical_regular_tournament(9)


@pytest.fixture
def identity3():
    return MarginMatrix.of(np.eye(3, dtype=np.uint8))


@pytest.fixture
def cycle3():
    """Permutation matrix of the 3-cycle 0 -> 1 -> 2 -> 0"""
    return MarginMatrix.of(np.roll(np.eye(3, dtype=np.uint8), 1, axis=1))
