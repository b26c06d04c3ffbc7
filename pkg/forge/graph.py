"""Graph core

Simple undirected graphs on the vertex ids 0..n-1 plus the exact checkers the rest of the
package relies on: independence, vertex connectivity, chromatic number, girth and isomorphism.
Graphs are immutable; labels travel next to the integer ids so bookpile coordinates survive export.
"""

import json
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import networkx as nx

from . import constants as fc
from .errors import ForgeCapacityError, ForgeInputError

log = logging.getLogger(__name__)

VertexSet = frozenset[int]
Edge = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]
    labels: tuple[str, ...] | None = None

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], labels: Sequence[str] | None = None) -> "Graph":
        """Validate and normalise an edge list into a Graph."""
        if not isinstance(n, int) or n < 0:
            raise ForgeInputError("vertex count must be a nonnegative integer, found %r" % (n,), "graph")
        normalised = set()
        for edge in edges:
            if len(edge) != 2:
                raise ForgeInputError("edge %r does not have two endpoints" % (edge,), "graph")
            u, v = int(edge[0]), int(edge[1])
            if u == v:
                raise ForgeInputError("self-loop at vertex %d" % u, "graph")
            if not (0 <= u < n and 0 <= v < n):
                raise ForgeInputError("edge (%d, %d) has an endpoint outside [0, %d)" % (u, v, n), "graph")
            pair = (u, v) if u < v else (v, u)
            if pair in normalised:
                raise ForgeInputError("duplicate edge (%d, %d)" % pair, "graph")
            normalised.add(pair)
        if labels is not None:
            labels = tuple(str(label) for label in labels)
            if len(labels) != n:
                raise ForgeInputError("expected %d labels, found %d" % (n, len(labels)), "graph")
        return cls(n, tuple(sorted(normalised)), labels)

    @classmethod
    def from_networkx(cls, nx_graph: nx.Graph, labels: bool = True) -> "Graph":
        """Number the nodes of a networkx graph in sorted order, keeping their names as labels."""
        try:
            nodes = sorted(nx_graph.nodes())
        except TypeError:
            nodes = sorted(nx_graph.nodes(), key=str)
        index = {node: i for i, node in enumerate(nodes)}
        return cls.from_edges(
            len(nodes),
            ((index[a], index[b]) for a, b in nx_graph.edges()),
            [_node_label(node) for node in nodes] if labels else None,
        )

    @property
    def e(self) -> int:
        return len(self.edges)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        neighbours = [set() for _ in range(self.n)]
        for u, v in self.edges:
            neighbours[u].add(v)
            neighbours[v].add(u)
        return tuple(frozenset(s) for s in neighbours)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edge_set if u < v else (v, u) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self.edges)
        return g

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def to_dict(self) -> dict:
        result = {"n": self.n, "edges": [list(edge) for edge in self.edges]}
        if self.labels is not None:
            result["labels"] = list(self.labels)
        return result

    @classmethod
    def from_dict(cls, data: dict) -> "Graph":
        if not isinstance(data, dict) or "n" not in data or "edges" not in data:
            raise ForgeInputError("graph JSON needs 'n' and 'edges'", "graph")
        return cls.from_edges(data["n"], data["edges"], data.get("labels"))

    def to_dot(self, name: str = "G") -> str:
        lines = ["graph %s {" % name]
        for v in range(self.n):
            lines.append('  %d [label="%s"];' % (v, self.label(v).replace('"', '\\"')))
        for u, v in self.edges:
            lines.append("  %d -- %d;" % (u, v))
        lines.append("}")
        return "\n".join(lines) + "\n"


def _node_label(node) -> str:
    if isinstance(node, tuple):
        return "(" + ",".join(str(x) for x in node) + ")"
    return str(node)


def read_graph(path: str | Path) -> Graph:
    try:
        with open(path, "r", encoding="utf-8") as graph_file:
            data = json.load(graph_file)
    except (OSError, ValueError) as err:
        raise ForgeInputError("cannot read graph file %s: %s" % (path, err), "graph")
    return Graph.from_dict(data)


def write_graph(g: Graph, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as graph_file:
        json.dump(g.to_dict(), graph_file, indent=2, sort_keys=True)
        graph_file.write("\n")


def vertex_set(g: Graph, members: Iterable[int]) -> VertexSet:
    """Check that every member is a vertex of g."""
    members = frozenset(int(v) for v in members)
    for v in members:
        if not 0 <= v < g.n:
            raise ForgeInputError("vertex %d is not in [0, %d)" % (v, g.n), "vertex_set")
    return members


def is_independent(g: Graph, s: Iterable[int]) -> bool:
    s = vertex_set(g, s)
    return not any(u in s and v in s for u, v in g.edges)


def is_connected(g: Graph) -> bool:
    return g.n > 0 and nx.is_connected(g.to_networkx())


def is_proper_coloring(g: Graph, colors: Sequence[int]) -> bool:
    if len(colors) != g.n:
        return False
    return all(colors[u] != colors[v] for u, v in g.edges)


def induced_subgraph(g: Graph, s: Iterable[int]) -> Graph:
    """Subgraph on s, renumbered in ascending id order."""
    members = sorted(vertex_set(g, s))
    index = {v: i for i, v in enumerate(members)}
    edges = [(index[u], index[v]) for u, v in g.edges if u in index and v in index]
    labels = [g.label(v) for v in members] if g.labels is not None else None
    return Graph.from_edges(len(members), edges, labels)


def disjoint_union(g1: Graph, g2: Graph) -> Graph:
    edges = list(g1.edges) + [(u + g1.n, v + g1.n) for u, v in g2.edges]
    return Graph.from_edges(g1.n + g2.n, edges)


def permute(g: Graph, order: Sequence[int]) -> Graph:
    """Renumber g so that old vertex order[i] becomes vertex i."""
    if sorted(order) != list(range(g.n)):
        raise ForgeInputError("order is not a permutation of the vertices", "permute")
    index = {old: new for new, old in enumerate(order)}
    labels = [g.label(old) for old in order] if g.labels is not None else None
    return Graph.from_edges(g.n, ((index[u], index[v]) for u, v in g.edges), labels)


def vertex_connectivity(g: Graph) -> int:
    """Vertex connectivity by unit-capacity vertex-split maximum flow.

    Complete graphs get n-1 and disconnected graphs 0.
    """
    if g.n < 2:
        raise ForgeInputError("vertex connectivity needs at least 2 vertices, found %d" % g.n,
                              "vertex_connectivity")
    if g.e == g.n * (g.n - 1) // 2:
        return g.n - 1
    return nx.node_connectivity(g.to_networkx())


def chromatic_number(g: Graph, limit: int = fc.CHROMATIC_VERTEX_LIMIT) -> int:
    """Exact chromatic number.

    A maximum clique gives the lower bound and a DSatur greedy colouring the upper bound; the
    values in between are decided by backtracking k-colourability.
    """
    if g.n < 1:
        raise ForgeInputError("chromatic number needs at least one vertex", "chromatic_number")
    if g.n > limit:
        raise ForgeCapacityError("%d vertices exceeds the exact colouring limit %d" % (g.n, limit),
                                 "chromatic_number")
    if g.e == 0:
        return 1
    nx_graph = g.to_networkx()
    clique, _ = nx.max_weight_clique(nx_graph, weight=None)
    lower = len(clique)
    greedy = nx.coloring.greedy_color(nx_graph, strategy="DSATUR")
    upper = max(greedy.values()) + 1
    log.debug("chromatic number bounds %d..%d on %d vertices", lower, upper, g.n)
    for k in range(lower, upper):
        if _k_colorable(g, k) is not None:
            return k
    return upper


def find_coloring(g: Graph, k: int, limit: int = fc.CHROMATIC_VERTEX_LIMIT) -> list[int] | None:
    """A proper colouring with colours 0..k-1, or None."""
    if g.n > limit:
        raise ForgeCapacityError("%d vertices exceeds the exact colouring limit" % g.n, "find_coloring")
    return _k_colorable(g, k)


def _k_colorable(g: Graph, k: int) -> list[int] | None:
    adj = g.adjacency
    colors = [-1] * g.n
    neighbour_colors = [dict() for _ in range(g.n)]

    def choose_vertex():
        best, best_key = None, None
        for v in range(g.n):
            if colors[v] == -1:
                key = (len(neighbour_colors[v]), len(adj[v]))
                if best_key is None or key > best_key:
                    best, best_key = v, key
        return best

    def assign(v, c, delta):
        for u in adj[v]:
            if colors[u] == -1:
                seen = neighbour_colors[u]
                seen[c] = seen.get(c, 0) + delta
                if seen[c] == 0:
                    del seen[c]

    def backtrack(used):
        v = choose_vertex()
        if v is None:
            return True
        # a fresh colour is symmetric to any other fresh colour, so try only one
        for c in range(min(used + 1, k)):
            if c in neighbour_colors[v]:
                continue
            colors[v] = c
            assign(v, c, 1)
            if backtrack(max(used, c + 1)):
                return True
            assign(v, c, -1)
            colors[v] = -1
        return False

    return colors if backtrack(0) else None


def girth(g: Graph) -> float:
    """Length of a shortest cycle; math.inf for forests."""
    return nx.girth(g.to_networkx())


def are_isomorphic(g1: Graph, g2: Graph, limit: int = fc.ISOMORPHISM_VERTEX_LIMIT) -> bool:
    if max(g1.n, g2.n) > limit:
        raise ForgeCapacityError("isomorphism test is limited to %d vertices" % limit, "are_isomorphic")
    if g1.n != g2.n or g1.e != g2.e:
        return False
    if sorted(map(len, g1.adjacency)) != sorted(map(len, g2.adjacency)):
        return False
    return nx.is_isomorphic(g1.to_networkx(), g2.to_networkx())
