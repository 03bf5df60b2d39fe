from pathlib import Path

import pytest

from probal import path_graph, star_graph, uniform_prior

REPO_ROOT = Path(__file__).resolve().parent.parent
DATA_DIR = REPO_ROOT / "data"


@pytest.fixture
def path5():
    return path_graph(5)


@pytest.fixture
def path5_uniform(path5):
    return uniform_prior(path5)


@pytest.fixture
def star4():
    return star_graph("c", ["a", "b", "d"])
