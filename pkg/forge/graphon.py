"""Step graphons and homomorphism densities.

A step graphon with m steps is a symmetric m x m matrix with entries in [0, 1], read as a
function on [0, 1]^2 that is constant on the blocks of the uniform m-partition. The homomorphism
density of H in W is the average over maps V(H) -> [m] of the product of W over the edges of H,
computed here as one tensor contraction.
"""

import itertools
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from string import ascii_letters

import numpy as np

from . import constants as fc
from .bookpile import q_book
from .errors import ForgeCapacityError, ForgeInputError
from .graph import Graph

log = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StepGraphon:
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != values.shape[1] or values.shape[0] < 1:
            raise ForgeInputError("a step graphon needs a square m x m matrix, found shape %s"
                                  % (values.shape,), "graphon")
        if not np.all(np.isfinite(values)):
            raise ForgeInputError("graphon values must be finite", "graphon")
        if np.max(np.abs(values - values.T)) > fc.SYMMETRY_TOLERANCE:
            raise ForgeInputError("graphon matrix is not symmetric", "graphon")
        values = (values + values.T) / 2
        if values.min() < 0.0 or values.max() > 1.0:
            raise ForgeInputError("graphon values must lie in [0, 1]", "graphon")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @property
    def m(self) -> int:
        return self.values.shape[0]

    @classmethod
    def constant(cls, p: float, m: int = 1) -> "StepGraphon":
        return cls(np.full((m, m), float(p)))

    @classmethod
    def block_identity(cls, m: int) -> "StepGraphon":
        return cls(np.eye(m))

    @classmethod
    def random(cls, m: int, rng: np.random.Generator) -> "StepGraphon":
        upper = np.triu(rng.random((m, m)))
        return cls(upper + np.triu(upper, 1).T)

    @classmethod
    def from_parameters(cls, theta: np.ndarray, m: int) -> "StepGraphon":
        """Inverse of parameters(): theta holds the upper triangle row by row."""
        values = np.zeros((m, m))
        rows, cols = np.triu_indices(m)
        values[rows, cols] = theta
        values[cols, rows] = theta
        return cls(values)

    def parameters(self) -> np.ndarray:
        return self.values[np.triu_indices(self.m)].copy()

    def complement(self) -> "StepGraphon":
        return StepGraphon(1.0 - self.values)

    def refine(self, factor: int = 2) -> "StepGraphon":
        """The same graphon with every step split into factor equal steps."""
        if factor < 1:
            raise ForgeInputError("refinement factor must be positive", "graphon")
        return StepGraphon(np.repeat(np.repeat(self.values, factor, axis=0), factor, axis=1))

    def to_dict(self) -> dict:
        return {"m": self.m, "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> "StepGraphon":
        if isinstance(data, dict) and "graphon" in data and "values" not in data:
            data = data["graphon"]
        if not isinstance(data, dict) or "values" not in data:
            raise ForgeInputError("graphon JSON needs 'values'", "graphon")
        graphon = cls(np.array(data["values"], dtype=float))
        if "m" in data and data["m"] != graphon.m:
            raise ForgeInputError("graphon JSON declares m=%s but holds %d steps" % (data["m"], graphon.m),
                                  "graphon")
        return graphon


def complement(w: StepGraphon) -> StepGraphon:
    return w.complement()


def read_graphon(path: str | Path) -> StepGraphon:
    try:
        with open(path, "r", encoding="utf-8") as graphon_file:
            data = json.load(graphon_file)
    except (OSError, ValueError) as err:
        raise ForgeInputError("cannot read graphon file %s: %s" % (path, err), "graphon")
    return StepGraphon.from_dict(data)


def write_graphon(w: StepGraphon, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as graphon_file:
        json.dump(w.to_dict(), graphon_file, indent=2, sort_keys=True)
        graphon_file.write("\n")


def _active_vertices(h: Graph) -> list[int]:
    """Vertices touching an edge; isolated vertices contribute a factor of 1."""
    return sorted({v for edge in h.edges for v in edge})


def _check_capacity(h: Graph, m: int, cap: int) -> list[int]:
    active = _active_vertices(h)
    if m > 1 and (m ** len(active) > cap or len(active) > len(ascii_letters)):
        raise ForgeCapacityError("%d^%d vertex maps exceeds the cap %d" % (m, len(active), cap), "hom_density")
    return active


def _subscripts(h: Graph, active: list[int]) -> list[str]:
    letter = {v: ascii_letters[j] for j, v in enumerate(active)}
    return [letter[a] + letter[b] for a, b in h.edges]


def hom_density(h: Graph, w: StepGraphon, cap: int = fc.DENSITY_MAP_CAP) -> float:
    active = _check_capacity(h, w.m, cap)
    if h.e == 0:
        return 1.0
    if w.m == 1:
        return float(w.values[0, 0]) ** h.e
    terms = _subscripts(h, active)
    total = np.einsum(",".join(terms) + "->", *([w.values] * h.e), optimize="greedy")
    return float(total) / w.m ** len(active)


def hom_density_exhaustive(h: Graph, w: StepGraphon, cap: int = fc.EXHAUSTIVE_MAP_CAP) -> float:
    """Reference density: every map V(H) -> [m] in lexicographic order, summed with math.fsum."""
    active = _check_capacity(h, w.m, cap)
    if w.m ** len(active) > cap:
        raise ForgeCapacityError("%d^%d vertex maps exceeds the exhaustive cap %d" % (w.m, len(active), cap),
                                 "hom_density_exhaustive")
    log.debug("enumerating %d^%d vertex maps", w.m, len(active))
    index = {v: j for j, v in enumerate(active)}
    edges = [(index[a], index[b]) for a, b in h.edges]
    values = w.values.tolist()

    def weight(assignment):
        product = 1.0
        for a, b in edges:
            factor = values[assignment[a]][assignment[b]]
            if factor == 0.0:
                return 0.0
            product *= factor
        return product

    maps = itertools.product(range(w.m), repeat=len(active))
    return math.fsum(map(weight, maps)) / w.m ** len(active)


@dataclass
class DensityReport:
    t_w: float
    t_comp: float
    deficit: float
    threshold: float

    def to_dict(self) -> dict:
        return {
            "t_w": self.t_w,
            "t_comp": self.t_comp,
            "deficit": self.deficit,
            "threshold": self.threshold,
        }


def commonality_threshold(h: Graph) -> float:
    """2^(1-e(H)), the value a common graph cannot go below."""
    if h.e > fc.MAX_DENSITY_EDGES:
        raise ForgeCapacityError("%d edges exceeds the threshold limit %d" % (h.e, fc.MAX_DENSITY_EDGES),
                                 "commonality_threshold")
    return math.ldexp(1.0, 1 - h.e)


def commonality_deficit(h: Graph, w: StepGraphon, exact: bool = False, cap: int | None = None) -> DensityReport:
    threshold = commonality_threshold(h)
    if exact:
        cap = fc.EXHAUSTIVE_MAP_CAP if cap is None else cap
        density = hom_density_exhaustive
    else:
        cap = fc.DENSITY_MAP_CAP if cap is None else cap
        density = hom_density
    t_w = density(h, w, cap)
    t_comp = density(h, w.complement(), cap)
    return DensityReport(t_w, t_comp, t_w + t_comp - threshold, threshold)


@dataclass
class JensenReport:
    lhs: float
    rhs: float
    ok: bool

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "ok": self.ok}


def jensen_check(h: Graph, i, q: int, w: StepGraphon, cap: int = fc.DENSITY_MAP_CAP) -> JensenReport:
    """t(q-book of h along i, W) >= t(h, W)^q."""
    lhs = hom_density(q_book(h, i, q), w, cap)
    rhs = hom_density(h, w, cap) ** q
    return JensenReport(lhs, rhs, lhs >= rhs - fc.JENSEN_TOLERANCE)


@dataclass
class BookChain:
    """The inequalities that take the commonality of H to its q-book, stage by stage."""
    book: float
    jensen: float
    convexity: float
    bound: float
    steps: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.steps.values())

    def to_dict(self) -> dict:
        return {
            "book": self.book,
            "jensen": self.jensen,
            "convexity": self.convexity,
            "bound": self.bound,
            "steps": dict(self.steps),
            "ok": self.ok,
        }


def book_commonality_chain(h: Graph, i, q: int, w: StepGraphon, cap: int = fc.DENSITY_MAP_CAP) -> BookChain:
    """t(B,W) + t(B,1-W) >= t(H,W)^q + t(H,1-W)^q >= 2((t(H,W) + t(H,1-W))/2)^q >= 2^(1-q e(H)).

    The first two steps hold for every W; the last one holds whenever H is common at W.
    """
    book_graph = q_book(h, i, q)
    comp = w.complement()
    t_w, t_comp = hom_density(h, w, cap), hom_density(h, comp, cap)
    book = hom_density(book_graph, w, cap) + hom_density(book_graph, comp, cap)
    jensen = t_w ** q + t_comp ** q
    convexity = 2.0 * ((t_w + t_comp) / 2.0) ** q
    bound = math.ldexp(1.0, 1 - q * h.e)
    tol = fc.JENSEN_TOLERANCE
    steps = {
        "jensen": book >= jensen - tol,
        "convexity": jensen >= convexity - tol,
        "bound": convexity >= bound - tol or t_w + t_comp < commonality_threshold(h) - tol,
    }
    return BookChain(book, jensen, convexity, bound, steps)


def density_gradient(h: Graph, w: StepGraphon, cap: int = fc.DENSITY_MAP_CAP) -> np.ndarray:
    """Gradient of t(h, W) with respect to the free entries of W.

    Entry (a, b) with a != b is the derivative along W[a, b] = W[b, a] moving together; entry (a, a)
    is the derivative along the diagonal value. The matrix is returned symmetric.
    """
    active = _check_capacity(h, w.m, cap)
    m = w.m
    if h.e == 0:
        return np.zeros((m, m))
    if m == 1:
        return np.array([[h.e * float(w.values[0, 0]) ** (h.e - 1)]])
    terms = _subscripts(h, active)
    ones = np.ones(m)
    per_entry = np.zeros((m, m))
    for j, term in enumerate(terms):
        others = terms[:j] + terms[j + 1:]
        subscripts = ",".join(others + [term[0], term[1]]) + "->" + term
        operands = [w.values] * len(others) + [ones, ones]
        per_entry += np.einsum(subscripts, *operands, optimize="greedy")
    per_entry /= m ** len(active)
    gradient = per_entry + per_entry.T
    np.fill_diagonal(gradient, np.diag(per_entry))
    return gradient


def finite_difference_error(h: Graph, w: StepGraphon, step: float = 1e-6, floor: float = 1e-3) -> float:
    """Largest relative error of density_gradient against central differences at w.

    Each entry is scaled by max(|analytic|, floor), so for gradient entries smaller than floor the
    result is the absolute error divided by floor. w must stay inside [0, 1] after moving any entry
    by step.
    """
    if floor <= 0:
        raise ForgeInputError("floor must be positive", "finite_difference_error")
    values = np.array(w.values)
    analytic = density_gradient(h, w)
    worst = 0.0
    for a in range(w.m):
        for b in range(a, w.m):
            plus, minus = values.copy(), values.copy()
            plus[a, b] += step
            minus[a, b] -= step
            if a != b:
                plus[b, a] += step
                minus[b, a] -= step
            numeric = (hom_density(h, StepGraphon(plus)) - hom_density(h, StepGraphon(minus))) / (2 * step)
            worst = max(worst, abs(numeric - analytic[a, b]) / max(abs(analytic[a, b]), floor))
    return float(worst)
