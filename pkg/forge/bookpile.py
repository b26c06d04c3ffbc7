"""Bookpile

The q-book of a graph along an independent set, the q-bookpile H(q) obtained by booking once per
vertex of H, and the standard copies of H inside H(q).

Every vertex of H(q) carries a coordinate tuple of length r = |V(H)|: entry j is the copy index
(1..q) chosen when vertex j was booked, except at the alpha-bit, which names the vertex of H the
bookpile vertex clones. ALPHA (0) marks the alpha-bit.
"""

import itertools
import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cached_property

from . import constants as fc
from .errors import ForgeCapacityError, ForgeInputError, ForgeStructuralError
from .graph import Graph, chromatic_number, find_coloring, is_independent, is_proper_coloring, vertex_set

log = logging.getLogger(__name__)

LabeledVertex = tuple[int, ...]


def format_label(coords: Sequence[int]) -> str:
    return "(" + ",".join(fc.ALPHA_TEXT if c == fc.ALPHA else str(c) for c in coords) + ")"


def parse_label(text: str) -> LabeledVertex:
    """Read "(2,α,1)"; a, alpha and * are accepted for α."""
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    coords = []
    for part in body.split(","):
        part = part.strip()
        if part.lower() in fc.ALPHA_ALIASES:
            coords.append(fc.ALPHA)
            continue
        try:
            value = int(part)
        except ValueError:
            raise ForgeStructuralError("'%s' is not a coordinate label" % text, "parse_label")
        if value < 1:
            raise ForgeStructuralError("coordinates start at 1, found %d in '%s'" % (value, text), "parse_label")
        coords.append(value)
    return check_labeled_vertex(coords)


def check_labeled_vertex(coords: Sequence[int], q: int | None = None) -> LabeledVertex:
    coords = tuple(coords)
    if coords.count(fc.ALPHA) != 1:
        raise ForgeStructuralError("%s must have exactly one α entry" % format_label(coords), "labeled_vertex")
    if q is not None and any(c > q for c in coords):
        raise ForgeStructuralError("%s has a coordinate above q=%d" % (format_label(coords), q), "labeled_vertex")
    return coords


def alpha_bit(coords: Sequence[int]) -> int:
    return coords.index(fc.ALPHA)


def plant_alpha(edge: Sequence[int], position: int) -> LabeledVertex:
    """The vertex of the edge whose alpha-bit sits at position."""
    coords = list(edge)
    coords[position] = fc.ALPHA
    return tuple(coords)


@dataclass(frozen=True)
class StandardCopy:
    edge_coords: tuple[int, ...]
    vertex_map: tuple[int, ...]

    def edges(self, h: Graph) -> list[tuple[int, int]]:
        """Edges of H(q) covered by this copy."""
        return [tuple(sorted((self.vertex_map[a], self.vertex_map[b]))) for a, b in h.edges]

    def to_dict(self, labels: Sequence[str] | None = None) -> dict:
        result = {"edge": list(self.edge_coords), "vertex_map": list(self.vertex_map)}
        if labels is not None:
            result["labels"] = [labels[v] for v in self.vertex_map]
        return result


@dataclass(frozen=True)
class Bookpile:
    h: Graph
    q: int
    graph: Graph
    coords: tuple[LabeledVertex, ...]
    copies: tuple[StandardCopy, ...]

    @property
    def r(self) -> int:
        return self.h.n

    @cached_property
    def index(self) -> dict[LabeledVertex, int]:
        return {c: v for v, c in enumerate(self.coords)}

    @cached_property
    def copy_index(self) -> dict[tuple[int, ...], StandardCopy]:
        return {copy.edge_coords: copy for copy in self.copies}

    def vertex(self, coords: Sequence[int]) -> int:
        try:
            return self.index[tuple(coords)]
        except KeyError:
            raise ForgeInputError("%s is not a vertex of this bookpile" % format_label(coords), "bookpile")

    def copy_for(self, edge: Sequence[int]) -> StandardCopy:
        try:
            return self.copy_index[tuple(edge)]
        except KeyError:
            raise ForgeInputError("%s is not a standard copy of this bookpile" % format_label(edge), "bookpile")


def bookpile_size(r: int, q: int) -> int:
    return r * q ** (r - 1)


def q_book(h: Graph, i: Iterable[int], q: int) -> Graph:
    """q vertex-disjoint copies of h glued along the independent set i."""
    graph, _ = _q_book(h, vertex_set(h, i), q)
    return graph


def _q_book(h: Graph, i: frozenset[int], q: int) -> tuple[Graph, list[tuple[int, int | None]]]:
    """Book h along i; also return, per new vertex, its origin (old vertex, copy or None if glued)."""
    if q < 1:
        raise ForgeInputError("q must be a positive integer, found %r" % (q,), "q_book")
    if not is_independent(h, i):
        raise ForgeInputError("the gluing set %s is not independent" % sorted(i), "q_book")
    origin = []
    ids = {}
    for v in range(h.n):
        if v in i:
            ids[v, None] = len(origin)
            origin.append((v, None))
        else:
            for c in range(1, q + 1):
                ids[v, c] = len(origin)
                origin.append((v, c))

    def image(v, c):
        return ids[v, None] if v in i else ids[v, c]

    edges = [(image(a, c), image(b, c)) for c in range(1, q + 1) for a, b in h.edges]
    labels = None
    if h.labels is not None:
        labels = [h.label(v) if c is None else "%s^%d" % (h.label(v), c) for v, c in origin]
    return Graph.from_edges(len(origin), edges, labels), origin


def bookpile(h: Graph, q: int, cap: int = fc.BOOKPILE_VERTEX_CAP) -> Bookpile:
    """The q-bookpile H(q) with its coordinate labels and all q^r standard copies.

    Vertices are booked in ascending id. The final numbering is the lexicographic order of the
    coordinate tuples, so vertex ids do not depend on construction details.
    """
    r = h.n
    if r < 1:
        raise ForgeInputError("the bookpile of the empty graph is undefined", "bookpile")
    if not isinstance(q, int) or q < 1:
        raise ForgeInputError("q must be a positive integer, found %r" % (q,), "bookpile")
    size = bookpile_size(r, q)
    if size > cap:
        raise ForgeCapacityError("H(%d) would have %d vertices, above the cap %d" % (q, size, cap), "bookpile")

    current = Graph.from_edges(h.n, h.edges)
    coords = [tuple(fc.ALPHA if j == p else None for j in range(r)) for p in range(r)]
    for step in range(r):
        glued = frozenset(v for v, c in enumerate(coords) if c[step] == fc.ALPHA)
        current, origin = _q_book(current, glued, q)
        coords = [coords[v] if c is None else _set_coordinate(coords[v], step, c) for v, c in origin]
        log.debug("bookpile step %d: %d vertices, %d edges", step + 1, current.n, current.e)

    order = sorted(range(current.n), key=lambda v: coords[v])
    position = {old: new for new, old in enumerate(order)}
    final_coords = tuple(coords[old] for old in order)
    graph = Graph.from_edges(
        current.n,
        ((position[u], position[v]) for u, v in current.edges),
        [format_label(c) for c in final_coords],
    )
    index = {c: v for v, c in enumerate(final_coords)}
    copies = tuple(
        StandardCopy(edge, tuple(index[plant_alpha(edge, p)] for p in range(r)))
        for edge in itertools.product(range(1, q + 1), repeat=r)
    )
    log.info("built H(%d) of a %d-vertex graph: %d vertices, %d edges, %d standard copies",
             q, r, graph.n, graph.e, len(copies))
    return Bookpile(h, q, graph, final_coords, copies)


def _set_coordinate(coords, position, value):
    coords = list(coords)
    coords[position] = value
    return tuple(coords)


def labels_to_coords(hq: Graph) -> list[LabeledVertex]:
    if hq.labels is None:
        raise ForgeInputError("the graph carries no coordinate labels", "labels_to_coords")
    return [parse_label(label) for label in hq.labels]


def verify_clone_coloring(h: Graph, hq: Graph) -> bool:
    """Whether sending each vertex of H(q) to its alpha-bit is a homomorphism H(q) -> H."""
    coords = labels_to_coords(hq)
    for c in coords:
        if len(c) != h.n:
            raise ForgeStructuralError("label %s does not have %d coordinates" % (format_label(c), h.n),
                                       "verify_clone_coloring")
    return all(h.has_edge(alpha_bit(coords[u]), alpha_bit(coords[v])) for u, v in hq.edges)


def extend_coloring(hq: Graph, colors: Sequence[int]) -> list[int]:
    """Give every clone the colour of the vertex of H it clones."""
    return [colors[alpha_bit(c)] for c in labels_to_coords(hq)]


def verify_standard_copies(h: Graph, bp: Bookpile) -> bool:
    """Each copy maps H isomorphically onto its induced subgraph, and the copies partition E(H(q))."""
    covered = set()
    for copy in bp.copies:
        image = set(copy.vertex_map)
        if len(image) != h.n:
            return False
        for p, v in enumerate(copy.vertex_map):
            if bp.coords[v] != plant_alpha(copy.edge_coords, p):
                return False
        mapped = set(copy.edges(h))
        induced = {(u, v) for u, v in bp.graph.edges if u in image and v in image}
        if mapped != induced or covered & mapped:
            return False
        covered |= mapped
    return covered == bp.graph.edge_set


def clone_coloring_certificate(bp: Bookpile) -> dict:
    """Proper colouring of H(q) lifted from an optimal colouring of H."""
    chi = chromatic_number(bp.h)
    colors = extend_coloring(bp.graph, find_coloring(bp.h, chi))
    return {"chi": chi, "colors": colors, "proper": is_proper_coloring(bp.graph, colors)}
