import itertools

import pytest

from forge.bookpile import StandardCopy, bookpile
from forge.errors import ForgeInputError, ForgeStructuralError
from forge.generators import complete_bipartite_graph, complete_graph, cycle_graph
from forge.graph import are_isomorphic, vertex_connectivity
from forge.hypergraph import (
    HyperPath,
    aux_hypergraph_of_copies,
    aux_product_graph,
    build_hqr,
    check_r_extension,
    codegree,
    connect,
    edge_intersection,
    edge_vertices,
    is_linear,
    slice_view,
    threshold_q,
    uv_slice_paths,
    validate_disjoint,
)
from forge.verify import sample_pairs, verify_hypergraph_connectivity

A = 0


def test_build_hqr_sizes():
    hg = build_hqr(2, 3)
    assert len(hg.vertices) == 12
    assert len(hg.edges) == 8
    assert all(hg.degree(v) == 2 for v in hg.vertices)
    assert all(len(edge_vertices(e)) == 3 for e in hg.edges)


def test_two_uniform_case_is_complete_bipartite():
    hg = build_hqr(2, 2)
    assert (len(hg.vertices), len(hg.edges)) == (4, 4)
    hg = build_hqr(3, 2)
    pairs = {frozenset(edge_vertices(e)) for e in hg.edges}
    assert pairs == {frozenset({(A, b), (a, A)}) for a in range(1, 4) for b in range(1, 4)}


def test_build_hqr_preconditions():
    with pytest.raises(ForgeInputError):
        build_hqr(3, 1)
    with pytest.raises(ForgeInputError):
        build_hqr(0, 3)


def test_codegree():
    hg = build_hqr(2, 3)
    assert codegree(hg, (A, 1, 1), (1, A, 1)) == 1
    assert codegree(hg, (A, 1, 1), (A, 2, 1)) == 0
    assert codegree(hg, (A, 1, 1), (1, 1, A)) == 1
    assert codegree(hg, (A, 1, 1), (2, A, 2)) == 0
    with pytest.raises(ForgeInputError):
        codegree(hg, (A, 1, 1), (A, 1, 1))


def test_codegree_agrees_with_incidence():
    hg = build_hqr(3, 3)
    for u, v in itertools.combinations(hg.vertices[:20], 2):
        shared = set(hg.incidence[u]) & set(hg.incidence[v])
        assert codegree(hg, u, v) == len(shared)


def test_is_linear():
    assert is_linear(build_hqr(3, 3))
    assert is_linear(build_hqr(2, 4))


def test_edge_intersection():
    assert edge_intersection((1, 1, 1), (1, 1, 2)) == {(1, 1, A)}
    assert edge_intersection((1, 1, 1), (1, 2, 2)) == set()
    assert len(edge_intersection((1, 2, 3), (1, 2, 3))) == 3


@pytest.mark.parametrize("q, r", [(2, 3), (3, 3), (3, 4)])
def test_slices_are_extensions(q, r):
    hg = build_hqr(q, r)
    assert all(check_r_extension(hg, i) for i in range(1, q + 1))
    view = slice_view(hg, 1)
    assert len(view.W_i) == (r - 1) * q ** (r - 2)
    assert len(view.U_r) == q ** (r - 1)
    assert view.W_i.isdisjoint(view.U_r)


def test_slice_view_preconditions():
    with pytest.raises(ForgeInputError):
        slice_view(build_hqr(3, 2), 1)
    with pytest.raises(ForgeInputError):
        slice_view(build_hqr(3, 3), 4)


@pytest.mark.parametrize("h, q", [
    (complete_graph(3), 2),
    (complete_graph(3), 3),
    (complete_graph(2), 3),
    (complete_graph(4), 2),
])
def test_standard_copies_form_hqr(h, q):
    bp = bookpile(h, q)
    assert aux_hypergraph_of_copies(bp.copies, bp.graph, q, h.n).isomorphic


def test_perturbed_copy_is_detected(k3):
    bp = bookpile(k3, 2)
    first = bp.copies[0]
    moved = StandardCopy((2,) + first.edge_coords[1:], first.vertex_map)
    copies = (moved,) + bp.copies[1:]
    assert not aux_hypergraph_of_copies(copies, bp.graph, 2, 3).isomorphic


def test_copy_outside_the_graph_is_a_structural_error(k3):
    bp = bookpile(k3, 2)
    broken = StandardCopy(bp.copies[0].edge_coords, (0, 1, 99))
    with pytest.raises(ForgeStructuralError):
        aux_hypergraph_of_copies((broken,) + bp.copies[1:], bp.graph, 2, 3)


def test_product_graph():
    g = aux_product_graph(3, 3)
    assert (g.n, g.e) == (9, 18)
    assert g.labels[0] == "(1,1,α)"
    assert are_isomorphic(aux_product_graph(2, 3), cycle_graph(4))


@pytest.mark.parametrize("q, r", [(3, 3), (4, 3), (3, 4)])
def test_product_graph_connectivity(q, r):
    assert vertex_connectivity(aux_product_graph(q, r)) == (r - 1) * (q - 1)


@pytest.mark.parametrize("k, r, expected", [(2, 2, 2), (2, 3, 9), (3, 5, 12), (1, 3, 6), (4, 3, 15)])
def test_threshold_q(k, r, expected):
    assert threshold_q(k, r) == expected


def test_hyperpath_checks():
    path = HyperPath(((A, 1, 1), (1, A, 1), (1, 2, A)), ((1, 1, 1), (1, 2, 1)))
    path.check()
    assert path.reversed().start == (1, 2, A)
    assert path.covered() == set(edge_vertices((1, 1, 1))) | set(edge_vertices((1, 2, 1)))
    assert path.to_dict()["alternation"] == ["(α,1,1)", "(1,1,1)", "(1,α,1)", "(1,2,1)", "(1,2,α)"]
    assert HyperPath.from_dict(path.to_dict()) == path
    with pytest.raises(ForgeStructuralError):
        HyperPath(((A, 1, 1), (1, 2, A)), ((1, 1, 1),)).check()
    with pytest.raises(ForgeStructuralError):
        HyperPath(((A, 1, 1),), ((1, 1, 1),)).check()


def test_nonconsecutive_edges_must_be_disjoint():
    # first and last edges meet at (1,α,1)
    path = HyperPath(
        ((1, 1, A), (A, 1, 1), (2, A, 1), (A, 2, 1), (1, 2, A)),
        ((1, 1, 1), (2, 1, 1), (2, 2, 1), (1, 2, 1)),
    )
    with pytest.raises(ForgeStructuralError, match="non-consecutive"):
        path.check()


def test_uv_slice_paths_single():
    paths = uv_slice_paths(3, 3, [(1, 1, A)], [(3, 3, A)], 1)
    assert len(paths) == 1
    path = paths[0]
    path.check()
    assert (path.start, path.end) == ((1, 1, A), (3, 3, A))
    assert all(edge[-1] == 1 for edge in path.edges)


def test_uv_slice_paths_shared_vertex():
    paths = uv_slice_paths(3, 3, [(2, 2, A)], [(2, 2, A)], 1)
    assert paths == [HyperPath.trivial((2, 2, A))]


def test_uv_slice_paths_are_disjoint():
    U = [(1, 1, A), (2, 5, A), (7, 3, A)]
    V = [(9, 9, A), (4, 8, A), (6, 2, A)]
    paths = uv_slice_paths(9, 3, U, V, 3)
    assert len(paths) == 3
    assert sorted(edge[-1] for path in paths for edge in path.edges[:1]) == [1, 2, 3]
    for path in paths:
        path.check()
        assert path.start in U and path.end in V
        assert not set(path.vertices[1:-1]) & (set(U) | set(V))
    for a, b in itertools.combinations(paths, 2):
        assert a.covered().isdisjoint(b.covered())


def test_uv_slice_paths_preconditions():
    with pytest.raises(ForgeInputError):
        uv_slice_paths(3, 3, [(1, 1, A)], [(3, 3, A)], 2)
    with pytest.raises(ForgeInputError):
        uv_slice_paths(3, 2, [(1, A)], [(3, A)], 1)
    with pytest.raises(ForgeInputError):
        uv_slice_paths(3, 3, [(1, A, 1)], [(3, 3, A)], 1)


def test_validate_disjoint_examples():
    u, v = (A, 1), (1, A)
    direct = HyperPath((u, v), ((1, 1),))
    through_two = HyperPath((u, (2, A), (A, 2), v), ((2, 1), (2, 2), (1, 2)))
    through_three = HyperPath((u, (3, A), (A, 3), v), ((3, 1), (3, 3), (1, 3)))
    also_through_two = HyperPath((u, (3, A), (A, 2), v), ((3, 1), (3, 2), (1, 2)))
    assert validate_disjoint([direct, through_two, through_three], u, v)
    assert validate_disjoint([through_two], u, v)
    assert not validate_disjoint([through_two, also_through_two], u, v)
    assert not validate_disjoint([direct, direct], u, v)
    with pytest.raises(ForgeInputError):
        validate_disjoint([direct], u, u)
    with pytest.raises(ForgeStructuralError):
        validate_disjoint([direct.reversed()], u, v)


def test_connect_complete_bipartite():
    hg = build_hqr(3, 2)
    u, v = (A, 1), (A, 2)
    paths = connect(hg, u, v, 3)
    assert len(paths) == 3
    assert validate_disjoint(paths, u, v)
    assert are_isomorphic(bookpile(complete_graph(2), 3).graph, complete_bipartite_graph(3, 3))


def test_connect_rejects_bad_requests():
    hg = build_hqr(9, 3)
    with pytest.raises(ForgeInputError):
        connect(hg, (1, 1, A), (1, 1, A), 2)
    with pytest.raises(ForgeInputError, match="threshold_q"):
        connect(build_hqr(6, 3), (1, 1, A), (6, 6, A), 2)
    with pytest.raises(ForgeStructuralError):
        connect(hg, (10, 1, A), (1, 1, A), 2)


@pytest.mark.parametrize("u, v", [
    ((1, 1, A), (9, 9, A)),
    ((1, 1, A), (1, 2, A)),
    ((1, 1, A), (A, 1, 1)),
    ((1, 1, A), (1, A, 1)),
    ((A, 3, 4), (2, 3, A)),
    ((A, 1, 1), (A, 2, 1)),
    ((A, 1, 1), (1, A, 2)),
    ((A, 1, 2), (1, A, 1)),
    ((5, A, 9), (A, 5, 8)),
])
def test_connect_covers_every_case(u, v):
    hg = build_hqr(9, 3)
    paths = connect(hg, u, v, 2)
    assert len(paths) == 2
    assert validate_disjoint(paths, u, v)
    assert validate_disjoint([p.reversed() for p in paths], v, u)


def test_connect_in_four_uniform_hypergraph():
    hg = build_hqr(9, 4)
    for u, v in [((A, 1, 1, 5), (2, A, 3, 5)), ((1, 2, 3, A), (A, 1, 1, 4)), ((A, 1, 1, 2), (1, A, 1, 7))]:
        paths = connect(hg, u, v, 2)
        assert validate_disjoint(paths, u, v)


def test_connect_sampled_pairs():
    hg = build_hqr(9, 3)
    report = verify_hypergraph_connectivity(9, 3, 2, pairs=sample_pairs(hg.vertices, 300, 7))
    assert report["pairs_checked"] == 300
    assert report["ok"], report["failures"]


def test_connect_all_pairs_of_complete_bipartite():
    report = verify_hypergraph_connectivity(4, 2, 4)
    assert report["pairs_checked"] == 8 * 7 // 2
    assert report["ok"]


@pytest.mark.slow
def test_connect_all_pairs():
    report = verify_hypergraph_connectivity(9, 3, 2)
    assert report["pairs_checked"] == 243 * 242 // 2
    assert report["ok"], report["failures"]


@pytest.mark.parametrize("k", [2, 3])
def test_connect_all_pairs_at_threshold_of_bipartite_case(k):
    q = threshold_q(k, 2)
    report = verify_hypergraph_connectivity(q, 2, k)
    assert report["pairs_checked"] == 2 * q * (2 * q - 1) // 2
    assert report["ok"], report["failures"]


def test_connect_three_paths_sampled():
    q = threshold_q(3, 3)
    assert q == 12
    report = verify_hypergraph_connectivity(q, 3, 3, pairs=sample_pairs(build_hqr(q, 3).vertices, 300, 11))
    assert report["ok"], report["failures"]


@pytest.mark.slow
def test_connect_three_paths_all_pairs():
    report = verify_hypergraph_connectivity(12, 3, 3)
    assert report["pairs_checked"] == 432 * 431 // 2
    assert report["ok"], report["failures"]
