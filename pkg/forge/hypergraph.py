"""Hypergraph paths

The r-uniform linear hypergraph H_q^r on V(q, r, alpha) whose edges are the tuples of [q]^r, its
slices, and the constructive machinery that builds k internally vertex-disjoint paths between any
two of its vertices once q is large enough.

Vertices and edges are plain coordinate tuples (see forge.bookpile): a vertex has exactly one ALPHA
entry and lies in the q edges obtained by substituting a value for it.

Slices: W_i holds the vertices whose last coordinate is i, U_r those whose last coordinate is ALPHA,
and H_i is the sub-hypergraph induced on W_i and U_r. Between slices, paths are routed through the
product graph on U_r, where two vertices are adjacent when they differ in exactly one coordinate.
"""

import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property, lru_cache

import networkx as nx

from . import constants as fc
from .bookpile import (
    LabeledVertex,
    alpha_bit,
    bookpile_size,
    check_labeled_vertex,
    format_label,
    labels_to_coords,
    parse_label,
    plant_alpha,
)
from .errors import (
    ForgeCapacityError,
    ForgeContradictionError,
    ForgeInputError,
    ForgeStructuralError,
)
from .graph import Graph

log = logging.getLogger(__name__)

HyperEdge = tuple[int, ...]

_SOURCE = "source"
_SINK = "sink"


def edge_vertices(edge: Sequence[int]) -> tuple[LabeledVertex, ...]:
    return tuple(plant_alpha(edge, p) for p in range(len(edge)))


def vertex_edges(v: Sequence[int], q: int) -> tuple[HyperEdge, ...]:
    p = alpha_bit(v)
    return tuple(tuple(x if j == p else c for j, c in enumerate(v)) for x in range(1, q + 1))


def vertex_in_edge(v: Sequence[int], edge: Sequence[int]) -> bool:
    if len(v) != len(edge) or tuple(v).count(fc.ALPHA) != 1:
        return False
    return all(c == fc.ALPHA or c == e for c, e in zip(v, edge))


def edge_intersection(e: Sequence[int], f: Sequence[int]) -> frozenset[LabeledVertex]:
    """Common vertices of two edges: all of them, exactly one, or none."""
    differing = [p for p in range(len(e)) if e[p] != f[p]]
    if not differing:
        return frozenset(edge_vertices(e))
    if len(differing) == 1:
        return frozenset((plant_alpha(e, differing[0]),))
    return frozenset()


@dataclass(frozen=True)
class BookpileHypergraph:
    q: int
    r: int

    @cached_property
    def vertices(self) -> tuple[LabeledVertex, ...]:
        return tuple(sorted(
            rest[:p] + (fc.ALPHA,) + rest[p:]
            for p in range(self.r)
            for rest in itertools.product(range(1, self.q + 1), repeat=self.r - 1)
        ))

    @cached_property
    def vertex_set(self) -> frozenset[LabeledVertex]:
        return frozenset(self.vertices)

    @cached_property
    def edges(self) -> tuple[HyperEdge, ...]:
        return tuple(itertools.product(range(1, self.q + 1), repeat=self.r))

    @cached_property
    def incidence(self) -> dict[LabeledVertex, tuple[HyperEdge, ...]]:
        return {v: vertex_edges(v, self.q) for v in self.vertices}

    def degree(self, v: LabeledVertex) -> int:
        return len(self.incidence[v])

    def check_vertex(self, v: Sequence[int]) -> LabeledVertex:
        v = tuple(v)
        if len(v) != self.r:
            raise ForgeInputError("%s does not have %d coordinates" % (format_label(v), self.r), "hypergraph")
        return check_labeled_vertex(v, self.q)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "r": self.r,
            "vertices": [format_label(v) for v in self.vertices],
            "edges": [format_label(e) for e in self.edges],
        }


def build_hqr(q: int, r: int, cap: int = fc.BOOKPILE_VERTEX_CAP) -> BookpileHypergraph:
    if not isinstance(q, int) or q < 1:
        raise ForgeInputError("q must be a positive integer, found %r" % (q,), "build_hqr")
    if not isinstance(r, int) or r < 2:
        raise ForgeInputError("r must be an integer >= 2, found %r" % (r,), "build_hqr")
    size = bookpile_size(r, q)
    if size > cap:
        raise ForgeCapacityError("H_%d^%d would have %d vertices, above the cap %d" % (q, r, size, cap),
                                 "build_hqr")
    return BookpileHypergraph(q, r)


def codegree(hg: BookpileHypergraph, u: Sequence[int], v: Sequence[int]) -> int:
    """Number of edges containing both u and v; 0 or 1 since H_q^r is linear."""
    u, v = hg.check_vertex(u), hg.check_vertex(v)
    if u == v:
        raise ForgeInputError("codegree needs two distinct vertices", "codegree")
    pu, pv = alpha_bit(u), alpha_bit(v)
    if pu == pv:
        return 0
    return int(all(u[j] == v[j] for j in range(hg.r) if j not in (pu, pv)))


def is_linear(hg: BookpileHypergraph) -> bool:
    seen = set()
    for edge in hg.edges:
        for pair in itertools.combinations(edge_vertices(edge), 2):
            if pair in seen:
                return False
            seen.add(pair)
    return True


@dataclass(frozen=True)
class HyperPath:
    vertices: tuple[LabeledVertex, ...]
    edges: tuple[HyperEdge, ...]

    @classmethod
    def trivial(cls, v: LabeledVertex) -> "HyperPath":
        return cls((v,), ())

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def start(self) -> LabeledVertex:
        return self.vertices[0]

    @property
    def end(self) -> LabeledVertex:
        return self.vertices[-1]

    def reversed(self) -> "HyperPath":
        return HyperPath(self.vertices[::-1], self.edges[::-1])

    def then(self, other: "HyperPath") -> "HyperPath":
        if self.end != other.start:
            raise ForgeStructuralError("cannot join a path ending at %s to one starting at %s"
                                       % (format_label(self.end), format_label(other.start)), "hyperpath")
        return HyperPath(self.vertices + other.vertices[1:], self.edges + other.edges)

    def covered(self) -> frozenset[LabeledVertex]:
        """Every vertex of every edge of the path."""
        if not self.edges:
            return frozenset(self.vertices)
        return frozenset(v for edge in self.edges for v in edge_vertices(edge))

    def check(self) -> None:
        """Raise ForgeStructuralError unless this is a path of a linear hypergraph."""
        if len(self.vertices) != len(self.edges) + 1:
            raise ForgeStructuralError("%d vertices cannot alternate with %d edges"
                                       % (len(self.vertices), len(self.edges)), "hyperpath")
        r = len(self.vertices[0])
        for v in self.vertices:
            if len(v) != r or tuple(v).count(fc.ALPHA) != 1:
                raise ForgeStructuralError("%s is not a labelled vertex" % format_label(v), "hyperpath")
        for j, edge in enumerate(self.edges):
            if len(edge) != r or any(c < 1 for c in edge):
                raise ForgeStructuralError("%s is not an edge" % format_label(edge), "hyperpath")
            if not (vertex_in_edge(self.vertices[j], edge) and vertex_in_edge(self.vertices[j + 1], edge)):
                raise ForgeStructuralError("edge %s does not contain %s and %s" % (
                    format_label(edge), format_label(self.vertices[j]), format_label(self.vertices[j + 1])),
                    "hyperpath")
            if self.vertices[j] == self.vertices[j + 1]:
                raise ForgeStructuralError("vertex %s repeats" % format_label(self.vertices[j]), "hyperpath")
        for a in range(len(self.edges)):
            for b in range(a + 2, len(self.edges)):
                if edge_intersection(self.edges[a], self.edges[b]):
                    raise ForgeStructuralError("non-consecutive edges %s and %s meet" % (
                        format_label(self.edges[a]), format_label(self.edges[b])), "hyperpath")

    def to_dict(self) -> dict:
        alternation = [format_label(self.vertices[0])]
        for edge, v in zip(self.edges, self.vertices[1:]):
            alternation.extend((format_label(edge), format_label(v)))
        return {
            "vertices": [format_label(v) for v in self.vertices],
            "edges": [format_label(e) for e in self.edges],
            "alternation": alternation,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "HyperPath":
        try:
            vertices = tuple(parse_label(v) for v in data["vertices"])
            edges = tuple(_parse_edge(e) for e in data["edges"])
        except (KeyError, TypeError):
            raise ForgeStructuralError("hyperpath JSON needs 'vertices' and 'edges'", "hyperpath")
        return cls(vertices, edges)


def _parse_edge(text: str) -> HyperEdge:
    body = text.strip().strip("()")
    try:
        edge = tuple(int(part) for part in body.split(","))
    except ValueError:
        raise ForgeStructuralError("'%s' is not an edge label" % text, "hyperpath")
    if any(c < 1 for c in edge):
        raise ForgeStructuralError("'%s' is not an edge label" % text, "hyperpath")
    return edge


def validate_disjoint(paths: Sequence[HyperPath], u: Sequence[int], v: Sequence[int]) -> bool:
    """Whether the u-v paths are pairwise internally vertex-disjoint.

    Two edges taken from different paths may share u only if both are first edges, v only if both
    are last edges, and nothing else. No edge may serve two paths.
    """
    u, v = tuple(u), tuple(v)
    if u == v:
        raise ForgeInputError("internal disjointness needs distinct endpoints", "validate_disjoint")
    for path in paths:
        path.check()
        if path.start != u or path.end != v:
            raise ForgeStructuralError("path runs from %s to %s, expected %s to %s" % (
                format_label(path.start), format_label(path.end), format_label(u), format_label(v)),
                "validate_disjoint")
    return all(_internally_disjoint(a, b, u, v) for a, b in itertools.combinations(paths, 2))


def _internally_disjoint(a: HyperPath, b: HyperPath, u: LabeledVertex, v: LabeledVertex) -> bool:
    if set(a.edges) & set(b.edges):
        return False
    last_a, last_b = len(a.edges) - 1, len(b.edges) - 1
    for i, e in enumerate(a.edges):
        for j, f in enumerate(b.edges):
            shared = edge_intersection(e, f)
            if not shared:
                continue
            allowed = set()
            if i == 0 and j == 0:
                allowed.add(u)
            if i == last_a and j == last_b:
                allowed.add(v)
            if not shared <= allowed:
                return False
    return True


@dataclass(frozen=True)
class SliceView:
    q: int
    r: int
    i: int

    @cached_property
    def W_i(self) -> frozenset[LabeledVertex]:
        return frozenset(v for v in BookpileHypergraph(self.q, self.r).vertices if v[-1] == self.i)

    @cached_property
    def U_r(self) -> frozenset[LabeledVertex]:
        return frozenset(v for v in BookpileHypergraph(self.q, self.r).vertices if v[-1] == fc.ALPHA)

    @cached_property
    def edges(self) -> tuple[HyperEdge, ...]:
        return tuple(e + (self.i,) for e in itertools.product(range(1, self.q + 1), repeat=self.r - 1))

    def edge_of(self, w: LabeledVertex) -> HyperEdge:
        """The only edge of H_i containing the U_r vertex w."""
        return w[:-1] + (self.i,)


def slice_view(hg: BookpileHypergraph, i: int) -> SliceView:
    if hg.r < 3:
        raise ForgeInputError("slices need r >= 3, found r=%d" % hg.r, "slice_view")
    if not 1 <= i <= hg.q:
        raise ForgeInputError("slice index %d outside 1..%d" % (i, hg.q), "slice_view")
    return SliceView(hg.q, hg.r, i)


def check_r_extension(hg: BookpileHypergraph, i: int) -> bool:
    """Whether H_i is the r-extension of H_q^{r-1} placed on W_i."""
    view = slice_view(hg, i)
    lower = BookpileHypergraph(hg.q, hg.r - 1)
    if {w[:-1] for w in view.W_i} != lower.vertex_set:
        return False
    extended = {}
    for edge in view.edges:
        members = edge_vertices(edge)
        in_slice = {w[:-1] for w in members if w[-1] == i}
        extra = [w for w in members if w[-1] == fc.ALPHA]
        if in_slice != set(edge_vertices(edge[:-1])) or len(extra) != 1:
            return False
        extended.setdefault(extra[0], []).append(edge)
    return set(extended) == view.U_r and all(len(edges) == 1 for edges in extended.values())


@dataclass(frozen=True)
class AuxiliaryHypergraph:
    q: int
    r: int
    edges: tuple[frozenset[LabeledVertex], ...]
    isomorphic: bool

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "r": self.r,
            "edges": len(self.edges),
            "isomorphic": self.isomorphic,
        }


def aux_hypergraph_of_copies(copies, hq: Graph, q: int, r: int) -> AuxiliaryHypergraph:
    """The r-graph of standard copies, read through the coordinate labels of hq.

    isomorphic is true iff the labelled copies are exactly the edges of H_q^r and every copy sits on
    the edge its coordinates name.
    """
    hg = build_hqr(q, r)
    coords = labels_to_coords(hq)
    if len(set(coords)) != hq.n or set(coords) != hg.vertex_set:
        raise ForgeStructuralError("the labels of the graph are not the vertex set of H_%d^%d" % (q, r),
                                   "aux_hypergraph_of_copies")
    aux_edges = []
    on_own_edge = True
    for copy in copies:
        if len(copy.vertex_map) != r or any(not 0 <= x < hq.n for x in copy.vertex_map):
            raise ForgeStructuralError("copy %s maps outside the graph" % format_label(copy.edge_coords),
                                       "aux_hypergraph_of_copies")
        image = frozenset(coords[x] for x in copy.vertex_map)
        if len(image) != r:
            raise ForgeStructuralError("copy %s is not injective" % format_label(copy.edge_coords),
                                       "aux_hypergraph_of_copies")
        aux_edges.append(image)
        if image != frozenset(edge_vertices(copy.edge_coords)):
            log.debug("copy %s is not placed on its own edge", format_label(copy.edge_coords))
            on_own_edge = False
    expected = {frozenset(edge_vertices(e)) for e in hg.edges}
    isomorphic = on_own_edge and len(aux_edges) == len(expected) and set(aux_edges) == expected
    return AuxiliaryHypergraph(q, r, tuple(aux_edges), isomorphic)


@lru_cache(maxsize=16)
def _product_nx(q: int, r: int) -> nx.Graph:
    """K_q^{r-1} on the U_r vertices of H_q^r."""
    graph = nx.Graph()
    nodes = [rest + (fc.ALPHA,) for rest in itertools.product(range(1, q + 1), repeat=r - 1)]
    graph.add_nodes_from(nodes)
    for node in nodes:
        for p in range(r - 1):
            for x in range(node[p] + 1, q + 1):
                graph.add_edge(node, node[:p] + (x,) + node[p + 1:])
    return graph


def aux_product_graph(q: int, r: int) -> Graph:
    if r < 3:
        raise ForgeInputError("the product graph needs r >= 3, found r=%d" % r, "aux_product_graph")
    if q < 1:
        raise ForgeInputError("q must be a positive integer, found %r" % (q,), "aux_product_graph")
    product = _product_nx(q, r)
    graph = Graph.from_networkx(product, labels=False)
    return Graph(graph.n, graph.edges, tuple(format_label(node) for node in sorted(product.nodes())))


def threshold_q(k: int, r: int) -> int:
    """Smallest q for which connect is guaranteed to produce k paths in H_q^r."""
    if k < 1 or r < 2:
        raise ForgeInputError("threshold_q needs k >= 1 and r >= 2, found k=%d, r=%d" % (k, r), "threshold_q")
    if r == 2:
        return k
    base = max(threshold_q(k, r - 1), 3 * (k + 1))
    return base + (-base) % 3


def uv_slice_paths(q: int, r: int, U: Iterable[Sequence[int]], V: Iterable[Sequence[int]], s: int,
                   slices: Iterable[int] | None = None,
                   avoid: Iterable[Sequence[int]] = ()) -> list[HyperPath]:
    """s vertex-disjoint U-V paths, each inside its own slice H_i.

    Vertices shared by U and V give trivial paths first. The others come from vertex-disjoint paths
    of the product graph, made induced and then lifted into the slices taken in order from
    slices (default 1..q). Vertices in avoid are not used at all.
    """
    if r < 3:
        raise ForgeInputError("slice paths need r >= 3, found r=%d" % r, "uv_slice_paths")
    if not (1 <= s <= q <= (r - 1) * (q - 1)):
        raise ForgeInputError("need (r-1)(q-1) >= q >= s >= 1, found q=%d, r=%d, s=%d" % (q, r, s),
                              "uv_slice_paths")
    U = {_hub_vertex(x, q, r) for x in U}
    V = {_hub_vertex(x, q, r) for x in V}
    avoid = {tuple(x) for x in avoid}
    if len(U) < s or len(V) < s:
        raise ForgeInputError("need |U|, |V| >= s=%d, found %d and %d" % (s, len(U), len(V)), "uv_slice_paths")
    if avoid & (U | V):
        raise ForgeInputError("U and V may not contain avoided vertices", "uv_slice_paths")
    pool = list(range(1, q + 1)) if slices is None else list(slices)
    if len(set(pool)) != len(pool) or any(not 1 <= i <= q for i in pool):
        raise ForgeInputError("slice indices must be distinct values in 1..%d" % q, "uv_slice_paths")

    shared = sorted(U & V)
    paths = [HyperPath.trivial(x) for x in shared[:s]]
    remaining = s - len(paths)
    if remaining == 0:
        return paths
    if len(pool) < remaining:
        raise ForgeInputError("%d slices cannot carry %d paths" % (len(pool), remaining), "uv_slice_paths")

    routes = _disjoint_product_paths(q, r, U - V, V - U, remaining, avoid | set(shared))
    for route, i in zip(routes, pool):
        paths.append(_slice_hyperpath(route, i))
    return paths


def _hub_vertex(x: Sequence[int], q: int, r: int) -> LabeledVertex:
    x = tuple(x)
    if len(x) != r or x[-1] != fc.ALPHA:
        raise ForgeInputError("%s is not a vertex of U_r" % format_label(x), "uv_slice_paths")
    return check_labeled_vertex(x, q)


def _disjoint_product_paths(q, r, sources, targets, count, blocked):
    graph = _product_nx(q, r)
    work = graph.copy()
    work.remove_nodes_from(blocked)
    work.add_edges_from((_SOURCE, x) for x in sorted(sources))
    work.add_edges_from((x, _SINK) for x in sorted(targets))
    try:
        raw = list(nx.node_disjoint_paths(work, _SOURCE, _SINK, cutoff=count))
    except nx.NetworkXNoPath:
        raw = []
    if len(raw) < count:
        raise ForgeContradictionError("found %d of %d disjoint paths in K_%d^%d" % (len(raw), count, q, r - 1),
                                      "uv_slice_paths")
    routes = [_shorten(_trim(route[1:-1], sources, targets), graph) for route in raw[:count]]
    return sorted(routes)


def _trim(route, sources, targets):
    """Cut a flow path down to a U-V path: last U vertex before the first V vertex."""
    end = next(j for j, x in enumerate(route) if x in targets)
    start = max(j for j in range(end + 1) if route[j] in sources)
    return route[start:end + 1]


def _shorten(route, graph):
    """Replace detours by chords, shortest chord first, until the path is induced."""
    route = list(route)
    while True:
        chord = None
        for span in range(2, len(route)):
            for a in range(len(route) - span):
                if graph.has_edge(route[a], route[a + span]):
                    chord = (a, a + span)
                    break
            if chord:
                break
        if chord is None:
            return route
        route = route[:chord[0] + 1] + route[chord[1]:]


def _slice_hyperpath(route, i):
    if len(route) == 1:
        return HyperPath.trivial(route[0])
    edges = tuple(x[:-1] + (i,) for x in route)
    joints = tuple(next(iter(edge_intersection(edges[j], edges[j + 1]))) for j in range(len(edges) - 1))
    return HyperPath((route[0],) + joints + (route[-1],), edges)


def connect(hg: BookpileHypergraph, u: Sequence[int], v: Sequence[int], k: int) -> list[HyperPath]:
    """k internally vertex-disjoint u-v paths in H_q^r, checked before they are returned."""
    u, v = hg.check_vertex(u), hg.check_vertex(v)
    if u == v:
        raise ForgeInputError("connect needs two distinct vertices", "connect")
    if not isinstance(k, int) or k < 1:
        raise ForgeInputError("k must be a positive integer, found %r" % (k,), "connect")
    threshold = threshold_q(k, hg.r)
    if hg.q < threshold:
        raise ForgeInputError("q=%d is below threshold_q(%d, %d) = %d" % (hg.q, k, hg.r, threshold), "connect")
    paths = _connect(hg.q, hg.r, u, v, k)
    if len(paths) < k:
        raise ForgeContradictionError("built %d of %d paths between %s and %s" % (
            len(paths), k, format_label(u), format_label(v)), "connect")
    paths = paths[:k]
    try:
        valid = validate_disjoint(paths, u, v)
    except ForgeStructuralError as err:
        raise ForgeContradictionError("constructed a malformed path: %s" % err, "connect")
    if not valid:
        raise ForgeContradictionError("constructed paths between %s and %s are not internally disjoint"
                                      % (format_label(u), format_label(v)), "connect")
    return paths


def _connect(q, r, u, v, k):
    if r == 2:
        return _connect_bipartite(q, u, v)
    u_hub, v_hub = u[-1] == fc.ALPHA, v[-1] == fc.ALPHA
    if not u_hub and not v_hub and u[-1] == v[-1]:
        i = u[-1]
        return [_extend(path, i) for path in _connect(q, r - 1, u[:-1], v[:-1], k)]
    if u_hub and v_hub:
        return _connect_hubs(q, r, u, v)
    if u_hub:
        return _connect_hub_to_slice(q, r, u, v)
    if v_hub:
        return [path.reversed() for path in _connect_hub_to_slice(q, r, v, u)]
    return _connect_across_slices(q, r, u, v, k)


def _extend(path, i):
    """Lift a path of H_q^{r-1} into the slice H_i of H_q^r."""
    return HyperPath(tuple(x + (i,) for x in path.vertices), tuple(e + (i,) for e in path.edges))


def _connect_bipartite(q, u, v):
    """H_q^2 is K_{q,q}: (alpha, b) and (a, alpha) are adjacent through the edge (a, b)."""
    pu, pv = alpha_bit(u), alpha_bit(v)
    if pu == pv:
        paths = []
        for x in range(1, q + 1):
            middle = plant_alpha((x, x), 1 - pu)
            first = _set(u, pu, x)
            last = _set(v, pv, x)
            paths.append(HyperPath((u, middle, v), (first, last)))
        return paths
    if pu == 1:
        return [path.reversed() for path in _connect_bipartite(q, v, u)]
    # u = (alpha, b), v = (a, alpha)
    b, a = u[1], v[0]
    paths = [HyperPath((u, v), ((a, b),))]
    others_a = [x for x in range(1, q + 1) if x != a]
    others_b = [y for y in range(1, q + 1) if y != b]
    for x, y in zip(others_a, others_b):
        paths.append(HyperPath((u, (x, fc.ALPHA), (fc.ALPHA, y), v), ((x, b), (x, y), (a, y))))
    return paths


def _set(v, position, value):
    return v[:position] + (value,) + v[position + 1:]


def _fans(q, x, slices, exclude):
    """Length-two paths x, w_i, x_i inside the slices, ending at distinct U_r vertices x_i."""
    fans = {}
    taken = set(exclude)
    base = x[:-1]
    for i in slices:
        joint = (fc.ALPHA,) + base[1:] + (i,)
        target = next(
            (y,) + base[1:] + (fc.ALPHA,)
            for y in range(1, q + 1)
            if y != base[0] and (y,) + base[1:] + (fc.ALPHA,) not in taken
        )
        taken.add(target)
        fans[target] = HyperPath((x, joint, target), (base + (i,), target[:-1] + (i,)))
    return fans


def _connect_hubs(q, r, u, v):
    """u, v in U_r: fans from u into the first third of the slices, fans from v into the second
    third, joined by slice paths in the last third."""
    t = q // 3
    fans_u = _fans(q, u, range(1, t + 1), {u, v})
    fans_v = _fans(q, v, range(t + 1, 2 * t + 1), {u, v})
    links = uv_slice_paths(q, r, fans_u, fans_v, t, slices=range(2 * t + 1, 3 * t + 1), avoid={u, v})
    return [fans_u[link.start].then(link).then(fans_v[link.end].reversed()) for link in links]


def _connect_hub_to_slice(q, r, u, v):
    """u in U_r, v in W_j: fans from u, slice paths to the U_r neighbours of v, one last edge."""
    t = q // 3
    j = v[-1]
    p = alpha_bit(v)
    neighbours = {_set(v, p, x)[:-1] + (fc.ALPHA,) for x in range(1, q + 1)}
    paths = []
    if u in neighbours:
        paths.append(HyperPath((u, v), (u[:-1] + (j,),)))
        neighbours.discard(u)
    fans = _fans(q, u, [i for i in range(1, t + 1) if i != j], {u})
    links = uv_slice_paths(q, r, fans, neighbours, len(fans),
                           slices=[i for i in range(t + 1, q + 1) if i != j], avoid={u})
    for link in links:
        last = HyperPath((link.end, v), (link.end[:-1] + (j,),))
        paths.append(fans[link.start].then(link).then(last))
    return paths


def _connect_across_slices(q, r, u, v, k):
    """u in W_i, v in W_j with i != j: q slice paths between their U_r neighbourhoods, minus the
    ones running through H_i or H_j."""
    i, j = u[-1], v[-1]
    starts = {_set(u, alpha_bit(u), x)[:-1] + (fc.ALPHA,) for x in range(1, q + 1)}
    ends = {_set(v, alpha_bit(v), x)[:-1] + (fc.ALPHA,) for x in range(1, q + 1)}
    links = uv_slice_paths(q, r, starts, ends, q)
    paths = []
    for link in links:
        if link.length and link.edges[0][-1] in (i, j):
            continue
        first = HyperPath((u, link.start), (link.start[:-1] + (i,),))
        last = HyperPath((link.end, v), (link.end[:-1] + (j,),))
        paths.append(first.then(link).then(last))
        if len(paths) == k:
            break
    return paths
