"""Shared fixtures: a few dense random hosts with their robust families.

Family extraction is the expensive step (it scans every pair/vertex link),
so the hosts that several test modules share are built once per session.
"""

import pytest

from hyperham.connectivity import (
    build_family3,
    build_family4,
    connectable_pairs,
    connectable_triples,
)
from hyperham.extremal import random_hypergraph


@pytest.fixture(scope="session")
def host60():
    return random_hypergraph(60, 4, 0.92, seed=202)


@pytest.fixture(scope="session")
def family60(host60):
    return build_family4(host60, alpha=0.15, beta=1e-6, ell=3)


@pytest.fixture(scope="session")
def index60(family60):
    return connectable_triples(family60, 0.1)


@pytest.fixture(scope="session")
def host3_16():
    return random_hypergraph(16, 3, 0.92, seed=11)


@pytest.fixture(scope="session")
def family3_16(host3_16):
    return build_family3(host3_16, 0.1, 0.001, 3)


@pytest.fixture(scope="session")
def index3_16(family3_16):
    return connectable_pairs(family3_16, 0.05)


@pytest.fixture(scope="session")
def host4_16():
    return random_hypergraph(16, 4, 0.95, seed=13)


@pytest.fixture(scope="session")
def family4_16(host4_16):
    return build_family4(host4_16, alpha=0.02, beta=0.001, ell=3)
