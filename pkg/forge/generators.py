"""Standard graphs and the `gen:` graph sources understood by the command line."""

import re
from pathlib import Path

import networkx as nx
import numpy as np

from .errors import ForgeInputError
from .graph import Graph, read_graph

_GENERATOR_PATTERN = re.compile(r"^(?P<kind>lq|k|c|p|q)(?P<a>\d+)(?:[,_x](?P<b>\d+))?$")


def complete_graph(n: int) -> Graph:
    return Graph.from_networkx(nx.complete_graph(n), labels=False)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ForgeInputError("a cycle needs at least 3 vertices", "cycle_graph")
    return Graph.from_networkx(nx.cycle_graph(n), labels=False)


def path_graph(n: int) -> Graph:
    return Graph.from_networkx(nx.path_graph(n), labels=False)


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph.from_networkx(nx.complete_bipartite_graph(a, b), labels=False)


def petersen_graph() -> Graph:
    return Graph.from_networkx(nx.petersen_graph(), labels=False)


def hypercube_graph(r: int) -> Graph:
    return Graph.from_networkx(nx.hypercube_graph(r))


def line_graph(g: Graph) -> Graph:
    return Graph.from_networkx(nx.line_graph(g.to_networkx()))


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Erdős–Rényi graph drawn from a numpy generator."""
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph.from_edges(n, edges)


def generate(name: str) -> Graph:
    """Build a graph from a short name: k3, c5, p4, k3,3, petersen, q3 or lq3."""
    name = name.strip().lower()
    if name == "petersen":
        return petersen_graph()
    match = _GENERATOR_PATTERN.match(name)
    if match is None:
        raise ForgeInputError("unknown graph generator '%s'" % name, "generate")
    kind, a, b = match.group("kind"), int(match.group("a")), match.group("b")
    if b is not None:
        if kind != "k":
            raise ForgeInputError("only k accepts two sizes, found '%s'" % name, "generate")
        return complete_bipartite_graph(a, int(b))
    if kind == "k":
        return complete_graph(a)
    if kind == "c":
        return cycle_graph(a)
    if kind == "p":
        return path_graph(a)
    if kind == "q":
        return hypercube_graph(a)
    return line_graph(hypercube_graph(a))


def resolve_graph(source: str) -> Graph:
    """A `gen:<name>` generator reference or the path of a graph JSON file."""
    if source.startswith("gen:"):
        return generate(source[len("gen:"):])
    if not Path(source).is_file():
        raise ForgeInputError("graph file '%s' does not exist" % source, "resolve_graph")
    return read_graph(source)
