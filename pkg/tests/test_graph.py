import itertools
import math
from collections import deque

import pytest

from forge.errors import ForgeCapacityError, ForgeInputError
from forge.generators import (
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    path_graph,
    petersen_graph,
    random_graph,
)
from forge.graph import (
    Graph,
    are_isomorphic,
    chromatic_number,
    disjoint_union,
    find_coloring,
    girth,
    induced_subgraph,
    is_connected,
    is_independent,
    is_proper_coloring,
    permute,
    read_graph,
    vertex_connectivity,
    write_graph,
)


def test_from_edges_normalises_order():
    g = Graph.from_edges(3, [(2, 1), (1, 0)])
    assert g.edges == ((0, 1), (1, 2))
    assert g.has_edge(1, 0)
    assert not g.has_edge(0, 2)
    assert g.degree(1) == 2


@pytest.mark.parametrize("edges", [[(0, 0)], [(0, 3)], [(0, 1), (1, 0)], [(0, 1, 2)]])
def test_from_edges_rejects_bad_edges(edges):
    with pytest.raises(ForgeInputError):
        Graph.from_edges(3, edges)


def test_label_count_must_match():
    with pytest.raises(ForgeInputError):
        Graph.from_edges(2, [(0, 1)], ["a"])


def test_is_independent(k3, c4):
    assert not is_independent(k3, {0, 1})
    assert is_independent(c4, {0, 2})
    assert is_independent(k3, set())
    with pytest.raises(ForgeInputError):
        is_independent(k3, {5})


@pytest.mark.parametrize("g, expected", [
    (complete_bipartite_graph(3, 3), 3),
    (path_graph(4), 1),
    (petersen_graph(), 3),
    (complete_graph(4), 3),
    (cycle_graph(5), 2),
])
def test_vertex_connectivity(g, expected):
    assert vertex_connectivity(g) == expected


def test_vertex_connectivity_of_disconnected_graph(k2):
    assert vertex_connectivity(disjoint_union(k2, k2)) == 0


def test_vertex_connectivity_needs_two_vertices():
    with pytest.raises(ForgeInputError):
        vertex_connectivity(Graph.from_edges(1, []))


@pytest.mark.parametrize("g, expected", [
    (complete_graph(4), 4),
    (cycle_graph(5), 3),
    (cycle_graph(4), 2),
    (petersen_graph(), 3),
    (Graph.from_edges(3, []), 1),
])
def test_chromatic_number(g, expected):
    assert chromatic_number(g) == expected


def test_chromatic_number_refuses_large_graphs():
    with pytest.raises(ForgeCapacityError):
        chromatic_number(cycle_graph(12), limit=10)


def test_find_coloring(c5):
    assert find_coloring(c5, 2) is None
    colors = find_coloring(c5, 3)
    assert is_proper_coloring(c5, colors)
    assert set(colors) <= {0, 1, 2}


def test_girth(c5, k4):
    assert girth(c5) == 5
    assert girth(k4) == 3
    assert math.isinf(girth(path_graph(4)))


def test_are_isomorphic(k3):
    assert are_isomorphic(k3, cycle_graph(3))
    assert not are_isomorphic(complete_bipartite_graph(1, 3), path_graph(4))
    assert not are_isomorphic(cycle_graph(6), disjoint_union(k3, k3))
    assert are_isomorphic(cycle_graph(4), complete_bipartite_graph(2, 2))


def test_is_connected(k2):
    assert is_connected(k2)
    assert not is_connected(disjoint_union(k2, k2))


def test_induced_subgraph_and_permute(c5):
    sub = induced_subgraph(c5, {0, 1, 2})
    assert sub.n == 3
    assert sub.edges == ((0, 1), (1, 2))
    reversed_cycle = permute(c5, [4, 3, 2, 1, 0])
    assert are_isomorphic(reversed_cycle, c5)
    assert reversed_cycle.has_edge(0, 4)
    with pytest.raises(ForgeInputError):
        permute(c5, [0, 0, 1, 2, 3])


def test_json_and_dot(tmp_path):
    g = Graph.from_edges(3, [(0, 1), (1, 2)], ["(α,1)", "b", "c"])
    path = tmp_path / "g.json"
    write_graph(g, path)
    assert read_graph(path) == g
    dot = g.to_dot()
    assert "0 -- 1;" in dot
    assert 'label="(α,1)"' in dot


def test_read_graph_reports_bad_files(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json", encoding="utf-8")
    with pytest.raises(ForgeInputError):
        read_graph(path)
    path.write_text('{"edges": []}', encoding="utf-8")
    with pytest.raises(ForgeInputError):
        read_graph(path)


def shortest_cycle_by_edge_removal(g):
    """min over edges uv of 1 + dist(u, v) once uv is deleted."""
    best = math.inf
    for u, v in g.edges:
        dist = {u: 0}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in g.adjacency[x]:
                if y in dist or {x, y} == {u, v}:
                    continue
                dist[y] = dist[x] + 1
                queue.append(y)
        if v in dist:
            best = min(best, dist[v] + 1)
    return best


def connectivity_by_separators(g):
    """Size of a smallest vertex set whose removal leaves a disconnected graph."""
    for size in range(g.n - 1):
        for removed in itertools.combinations(range(g.n), size):
            if not is_connected(induced_subgraph(g, set(range(g.n)) - set(removed))):
                return size
    return g.n - 1


def test_girth_agrees_with_edge_removal(rng):
    for _ in range(200):
        g = random_graph(int(rng.integers(3, 13)), float(rng.uniform(0.1, 0.5)), rng)
        assert girth(g) == shortest_cycle_by_edge_removal(g), g.edges


def test_vertex_connectivity_agrees_with_separators(rng):
    for _ in range(100):
        g = random_graph(int(rng.integers(2, 11)), float(rng.uniform(0.2, 0.8)), rng)
        assert vertex_connectivity(g) == connectivity_by_separators(g), g.edges


@pytest.mark.parametrize("a", [2, 3, 4, 5])
@pytest.mark.parametrize("b", [2, 3, 4, 5])
def test_complete_bipartite_connectivity(a, b):
    assert vertex_connectivity(complete_bipartite_graph(a, b)) == min(a, b)


def test_chromatic_number_is_monotone(rng):
    for _ in range(30):
        g = random_graph(int(rng.integers(4, 10)), 0.5, rng)
        sub = Graph.from_edges(g.n, [edge for edge in g.edges if rng.random() < 0.6])
        assert chromatic_number(sub) <= chromatic_number(g)
        kept = [v for v in range(g.n) if rng.random() < 0.7] or [0]
        assert chromatic_number(induced_subgraph(g, kept)) <= chromatic_number(g)
