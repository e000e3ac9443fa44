from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cliquelab.graph import Graph


@pytest.fixture
def triangle() -> Graph:
    return Graph.complete(3)


@pytest.fixture
def k4() -> Graph:
    return Graph.complete(4)


@pytest.fixture
def c5() -> Graph:
    return Graph.cycle(5)


@pytest.fixture
def c6() -> Graph:
    return Graph.cycle(6)
