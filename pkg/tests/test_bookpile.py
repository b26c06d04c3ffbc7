import itertools

import pytest

from forge.bookpile import (
    alpha_bit,
    bookpile,
    bookpile_size,
    clone_coloring_certificate,
    extend_coloring,
    format_label,
    labels_to_coords,
    parse_label,
    q_book,
    verify_clone_coloring,
    verify_standard_copies,
)
from forge.errors import ForgeCapacityError, ForgeInputError, ForgeStructuralError
from forge.generators import (
    complete_bipartite_graph,
    complete_graph,
    cycle_graph,
    hypercube_graph,
    line_graph,
    path_graph,
)
from forge.graph import Graph, are_isomorphic, chromatic_number, find_coloring, girth, is_proper_coloring, permute
from forge.graphon import StepGraphon, jensen_check


def test_labels():
    assert format_label((2, 0, 1)) == "(2,α,1)"
    assert parse_label("(2,α,1)") == (2, 0, 1)
    assert parse_label(" (2, a, 1) ") == (2, 0, 1)
    assert parse_label("(*,3)") == (0, 3)
    for text in ["(1,2)", "(α,α)", "(0,1)", "(x,α)"]:
        with pytest.raises(ForgeStructuralError):
            parse_label(text)


def test_q_book_examples(k2, k3, c4):
    star = q_book(k2, {0}, 3)
    assert are_isomorphic(star, complete_bipartite_graph(1, 3))
    bowtie = q_book(k3, {0}, 2)
    assert (bowtie.n, bowtie.e) == (5, 6)
    assert sorted(bowtie.degree(v) for v in range(5)) == [2, 2, 2, 2, 4]
    assert are_isomorphic(q_book(c4, {0, 2}, 2), complete_bipartite_graph(2, 4))


def test_q_book_rejects_dependent_sets(k3):
    with pytest.raises(ForgeInputError):
        q_book(k3, {0, 1}, 2)
    with pytest.raises(ForgeInputError):
        q_book(k3, {0}, 0)


@pytest.mark.parametrize("h", [complete_graph(2), complete_graph(3), cycle_graph(5), complete_graph(4)])
@pytest.mark.parametrize("q", [1, 2, 3])
def test_structural_counts(h, q):
    bp = bookpile(h, q)
    r = h.n
    assert bp.graph.n == bookpile_size(r, q) == r * q ** (r - 1)
    assert bp.graph.e == q ** r * h.e
    assert len(bp.copies) == q ** r
    assert verify_standard_copies(h, bp)


def test_bookpile_of_an_edge(k2):
    bp = bookpile(k2, 3)
    assert are_isomorphic(bp.graph, complete_bipartite_graph(3, 3))
    assert bp.graph.labels[:3] == ("(α,1)", "(α,2)", "(α,3)")
    bp = bookpile(k2, 2)
    assert bp.graph.labels == ("(α,1)", "(α,2)", "(1,α)", "(2,α)")
    assert girth(bp.graph) == 4


def test_bookpile_with_one_copy_is_the_graph(c5):
    bp = bookpile(c5, 1)
    assert are_isomorphic(bp.graph, c5)


def test_triangle_bookpile_is_line_graph_of_cube(k3):
    bp = bookpile(k3, 2)
    assert (bp.graph.n, bp.graph.e) == (12, 24)
    assert are_isomorphic(bp.graph, line_graph(hypercube_graph(3)))
    assert chromatic_number(bp.graph) == 3


def test_vertex_numbering_follows_labels(k3):
    bp = bookpile(k3, 2)
    assert list(bp.coords) == sorted(bp.coords)
    assert labels_to_coords(bp.graph) == list(bp.coords)
    assert bp.vertex((0, 1, 2)) == bp.coords.index((0, 1, 2))
    with pytest.raises(ForgeInputError):
        bp.vertex((0, 3, 3))


def test_standard_copy_lookup(k3):
    bp = bookpile(k3, 2)
    copy = bp.copy_for((1, 2, 1))
    assert [bp.coords[v] for v in copy.vertex_map] == [(0, 2, 1), (1, 0, 1), (1, 2, 0)]
    assert len(copy.edges(k3)) == 3
    assert all(bp.graph.has_edge(a, b) for a, b in copy.edges(k3))
    with pytest.raises(ForgeInputError):
        bp.copy_for((1, 2, 3))


@pytest.mark.parametrize("h, q", [(complete_graph(3), 2), (cycle_graph(5), 2), (complete_graph(2), 5)])
def test_clone_coloring(h, q):
    bp = bookpile(h, q)
    assert verify_clone_coloring(h, bp.graph)
    colors = extend_coloring(bp.graph, find_coloring(h, chromatic_number(h)))
    assert is_proper_coloring(bp.graph, colors)


def test_clone_coloring_certificate(c5):
    certificate = clone_coloring_certificate(bookpile(c5, 2))
    assert certificate["chi"] == 3
    assert certificate["proper"]
    assert len(certificate["colors"]) == 5 * 2 ** 4


def test_clone_coloring_needs_labels(k3):
    with pytest.raises(ForgeInputError):
        verify_clone_coloring(k3, Graph.from_edges(3, k3.edges))


def test_bookpile_capacity(k4):
    with pytest.raises(ForgeCapacityError):
        bookpile(k4, 1000)
    with pytest.raises(ForgeCapacityError):
        bookpile(k4, 3, cap=100)


def test_bookpile_needs_positive_q(k3):
    with pytest.raises(ForgeInputError):
        bookpile(k3, 0)


@pytest.mark.parametrize("h, q", [
    (complete_graph(3), 3),
    (path_graph(4), 2),
    (cycle_graph(4), 2),
    (complete_bipartite_graph(1, 3), 2),
])
def test_bookpile_does_not_depend_on_vertex_order(h, q, rng):
    reference = bookpile(h, q).graph
    for _ in range(10):
        order = [int(v) for v in rng.permutation(h.n)]
        assert are_isomorphic(bookpile(permute(h, order), q).graph, reference), order


@pytest.mark.parametrize("h, q", [(complete_graph(3), 2), (path_graph(3), 3), (complete_graph(4), 2)])
def test_shared_copy_iff_coordinates_agree(h, q):
    bp = bookpile(h, q)
    copies_of = [set() for _ in range(bp.graph.n)]
    for index, copy in enumerate(bp.copies):
        for v in copy.vertex_map:
            copies_of[v].add(index)
    for a, b in itertools.combinations(range(bp.graph.n), 2):
        x, y = bp.coords[a], bp.coords[b]
        skip = {alpha_bit(x), alpha_bit(y)}
        agree = all(x[j] == y[j] for j in range(h.n) if j not in skip)
        assert bool(copies_of[a] & copies_of[b]) == agree, (format_label(x), format_label(y))


@pytest.mark.parametrize("h", [
    complete_graph(2),
    complete_graph(3),
    cycle_graph(4),
    cycle_graph(5),
    path_graph(3),
    complete_graph(4),
])
@pytest.mark.parametrize("q", [2, 3])
def test_bookpile_has_short_cycles(h, q):
    assert girth(bookpile(h, q).graph) <= 4


def test_bookpile_keeps_chromatic_number(c5):
    bp = bookpile(c5, 2)
    assert bp.graph.n > 40
    assert chromatic_number(bp.graph, limit=bp.graph.n) == chromatic_number(c5) == 3


@pytest.mark.parametrize("h", [complete_graph(2), complete_graph(3), cycle_graph(4)])
@pytest.mark.parametrize("q", [2, 3])
def test_book_density_dominates_power(h, q, rng):
    for _ in range(100):
        w = StepGraphon.random(int(rng.integers(1, 4)), rng)
        report = jensen_check(h, {0}, q, w)
        assert report.lhs >= report.rhs - 1e-12
