"""Lifting hypergraph paths into the bookpile.

An edge of H_q^r names a standard copy of H inside H(q), and a vertex of that edge is the clone of
the vertex of H at its alpha-bit. Walking from one clone to the next inside the copy follows a
shortest path of H, so a hyperpath turns into a walk of H(q) and disjoint hyperpaths turn into
internally disjoint graph paths.
"""

import logging
from collections.abc import Sequence
from itertools import pairwise

import networkx as nx

from .bookpile import Bookpile, alpha_bit
from .errors import ForgeInputError
from .graph import Graph, is_connected
from .hypergraph import HyperPath

log = logging.getLogger(__name__)


def lift_paths(bp: Bookpile, paths: Sequence[HyperPath]) -> list[list[int]]:
    h = bp.h
    if not is_connected(h):
        raise ForgeInputError("lifting needs a connected graph", "lift_paths")
    nx_h = h.to_networkx()
    lifted = []
    for path in paths:
        path.check()
        walk = [bp.vertex(path.start)]
        for j, edge in enumerate(path.edges):
            copy = bp.copy_for(edge)
            segment = nx.shortest_path(nx_h, alpha_bit(path.vertices[j]), alpha_bit(path.vertices[j + 1]))
            walk.extend(copy.vertex_map[x] for x in segment[1:])
        lifted.append(walk)
    log.debug("lifted %d paths into H(%d)", len(lifted), bp.q)
    return lifted


def validate_graph_paths(g: Graph, paths: Sequence[Sequence[int]], u: int, v: int) -> bool:
    """Whether the paths are u-v paths of g with pairwise disjoint interiors avoiding u and v."""
    if u == v:
        raise ForgeInputError("internal disjointness needs distinct endpoints", "validate_graph_paths")
    interiors = []
    direct = 0
    for path in paths:
        if len(path) < 2 or path[0] != u or path[-1] != v:
            return False
        if len(set(path)) != len(path):
            return False
        if not all(g.has_edge(a, b) for a, b in pairwise(path)):
            return False
        if len(path) == 2:
            direct += 1
        interiors.append(set(path[1:-1]))
    if direct > 1:
        return False
    seen = set()
    for interior in interiors:
        if interior & seen:
            return False
        seen |= interior
    return True
