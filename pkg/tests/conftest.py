from __future__ import annotations

import pytest

from synth import corridor_scored, plain_grid_scored, varied_grid_scored


@pytest.fixture(scope="session")
def grid_scored():
    return plain_grid_scored()


@pytest.fixture(scope="session")
def grid_scored_varied():
    return varied_grid_scored()


@pytest.fixture(scope="session")
def corridor():
    return corridor_scored()
