import numpy as np
import pytest

from forge.generators import complete_graph, cycle_graph, path_graph
from forge.graphon import StepGraphon, write_graphon
from forge.graph import write_graph


@pytest.fixture
def k2():
    return complete_graph(2)


@pytest.fixture
def k3():
    return complete_graph(3)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def p3():
    return path_graph(3)


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def identity2():
    return StepGraphon(np.eye(2))


@pytest.fixture
def k3_file(tmp_path, k3):
    path = tmp_path / "k3.json"
    write_graph(k3, path)
    return path


@pytest.fixture
def half_file(tmp_path):
    path = tmp_path / "half.json"
    write_graphon(StepGraphon.constant(0.5), path)
    return path

