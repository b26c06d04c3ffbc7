"""Self test

Runs the package's acceptance checks end to end and reports each one as a named pass or fail.
Every random choice is drawn from a seeded generator, so two runs with the same seed produce the
same document.
"""

import json
import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from . import constants as fc
from .bookpile import bookpile, bookpile_size, verify_clone_coloring, verify_standard_copies
from .generators import complete_graph, cycle_graph, hypercube_graph, line_graph, path_graph, random_graph
from .graph import are_isomorphic, chromatic_number, girth, vertex_connectivity
from .graphon import StepGraphon, commonality_deficit, finite_difference_error, jensen_check
from .hypergraph import aux_hypergraph_of_copies, aux_product_graph, build_hqr
from .reporting import VerificationResult, capture_messages
from .search import SearchConfig, search_min_deficit
from .verify import sample_pairs, verify_connectivity, verify_hypergraph_connectivity

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SelftestOptions:
    seed: int = 0
    quick: bool = False
    workers: int = 1


CHECKS: list[tuple[str, Callable[[SelftestOptions], dict]]] = []


def check(name: str):
    def register(func):
        CHECKS.append((name, func))
        return func
    return register


@check("structural_counts")
def _structural_counts(options):
    cases = []
    for name, h in (("K2", complete_graph(2)), ("K3", complete_graph(3)), ("C5", cycle_graph(5)),
                    ("K4", complete_graph(4))):
        for q in (1, 2, 3):
            bp = bookpile(h, q)
            ok = (bp.graph.n == bookpile_size(h.n, q) and bp.graph.e == q ** h.n * h.e
                  and len(bp.copies) == q ** h.n and verify_standard_copies(h, bp))
            cases.append({"graph": name, "q": q, "ok": ok})
    return {"ok": all(c["ok"] for c in cases), "cases": cases}


@check("triangle_line_graph")
def _triangle_line_graph(options):
    ok = are_isomorphic(bookpile(complete_graph(3), 2).graph, line_graph(hypercube_graph(3)))
    return {"ok": ok}


@check("auxiliary_hypergraph")
def _auxiliary_hypergraph(options):
    cases = []
    for name, h, q in (("K3", complete_graph(3), 2), ("K3", complete_graph(3), 3), ("K2", complete_graph(2), 3),
                       ("K4", complete_graph(4), 2)):
        bp = bookpile(h, q)
        ok = aux_hypergraph_of_copies(bp.copies, bp.graph, q, h.n).isomorphic
        cases.append({"graph": name, "q": q, "ok": ok})
    return {"ok": all(c["ok"] for c in cases), "cases": cases}


@check("chromatic_number")
def _chromatic_number(options):
    cases = []
    for name, h in (("K3", complete_graph(3)), ("C5", cycle_graph(5)), ("K4", complete_graph(4))):
        bp = bookpile(h, 2)
        # bookpile(C5, 2) has 80 vertices, above the default exact limit
        chi_h, chi_hq = chromatic_number(h), chromatic_number(bp.graph, limit=bp.graph.n)
        ok = chi_h == chi_hq and verify_clone_coloring(h, bp.graph)
        cases.append({"graph": name, "chi": chi_h, "chi_bookpile": chi_hq, "ok": ok})
    return {"ok": all(c["ok"] for c in cases), "cases": cases}


@check("girth")
def _girth(options):
    cases = []
    graphs = (("K2", complete_graph(2)), ("K3", complete_graph(3)), ("C4", cycle_graph(4)),
              ("C5", cycle_graph(5)), ("P3", path_graph(3)), ("K4", complete_graph(4)))
    for name, h in graphs:
        for q in (2, 3):
            value = girth(bookpile(h, q).graph)
            cases.append({"graph": name, "q": q, "girth": value, "ok": value <= 4})
    return {"ok": all(c["ok"] for c in cases), "cases": cases}


@check("product_connectivity")
def _product_connectivity(options):
    cases = []
    for q, r in ((3, 3), (4, 3), (3, 4)):
        kappa = vertex_connectivity(aux_product_graph(q, r))
        cases.append({"q": q, "r": r, "kappa": kappa, "ok": kappa == (r - 1) * (q - 1)})
    return {"ok": all(c["ok"] for c in cases), "cases": cases}


@check("hypergraph_connectivity")
def _hypergraph_connectivity(options):
    pairs = None
    if options.quick:
        pairs = sample_pairs(build_hqr(9, 3).vertices, 500, options.seed)
    report = verify_hypergraph_connectivity(9, 3, 2, pairs=pairs, workers=options.workers)
    return {"ok": report["ok"], "pairs_checked": report["pairs_checked"], "pairs_failed": report["pairs_failed"]}


@check("bookpile_connectivity")
def _bookpile_connectivity(options):
    samples = 20 if options.quick else 100
    cases = []
    for name, h in (("K3", complete_graph(3)), ("P3", path_graph(3))):
        result = verify_connectivity(h, 9, 2, samples=samples, seed=options.seed, workers=options.workers)
        cases.append({"graph": name, "q": 9, "kappa": result.data["kappa"],
                      "pairs_checked": result.data["pairs_checked"], "ok": result.valid})
    return {"ok": all(c["ok"] for c in cases), "cases": cases}


@check("triangle_common")
def _triangle_common(options):
    rng = np.random.default_rng(options.seed)
    k3 = complete_graph(3)
    trials = 100 if options.quick else 1000
    worst = min(commonality_deficit(k3, StepGraphon.random(int(rng.integers(1, 9)), rng)).deficit
                for _ in range(trials))
    starts = 5 if options.quick else 20
    result = search_min_deficit(k3, SearchConfig(m=4, starts=starts, seed=options.seed, workers=options.workers))
    ok = worst >= -fc.WITNESS_TOLERANCE and -fc.WITNESS_TOLERANCE <= result.best_deficit <= 1e-6
    return {"ok": ok, "trials": trials, "worst_deficit": worst, "search_deficit": result.best_deficit,
            "verdict": result.verdict}


JENSEN_GRAPHS = (complete_graph(2), complete_graph(3), cycle_graph(4), cycle_graph(5))


@check("jensen")
def _jensen(options):
    rng = np.random.default_rng(options.seed)
    trials = 100 if options.quick else 500
    failures = 0
    for _ in range(trials):
        h = JENSEN_GRAPHS[int(rng.integers(len(JENSEN_GRAPHS)))]
        i = _random_independent_set(h, rng)
        q = int(rng.integers(2, 4))
        # the 3-book of C5 has up to 15 vertices, so m stays at most 3 under the map cap
        w = StepGraphon.random(int(rng.integers(1, 4)), rng)
        if not jensen_check(h, i, q, w).ok:
            failures += 1
    return {"ok": failures == 0, "trials": trials, "failures": failures}


def _random_independent_set(h, rng):
    i = set()
    for v in rng.permutation(h.n):
        v = int(v)
        if rng.random() < 0.5 and not any(h.has_edge(v, x) for x in i):
            i.add(v)
    return sorted(i)


@check("gradient")
def _gradient(options):
    rng = np.random.default_rng(options.seed)
    trials = 20 if options.quick else 100
    worst = 0.0
    for _ in range(trials):
        h = random_graph(int(rng.integers(2, 6)), 0.6, rng)
        interior = 0.05 + 0.9 * StepGraphon.random(int(rng.integers(2, 5)), rng).values
        worst = max(worst, finite_difference_error(h, StepGraphon(interior)))
    return {"ok": worst <= 1e-6, "trials": trials, "max_relative_error": worst}


@check("determinism")
def _determinism(options):
    k3 = complete_graph(3)
    config = SearchConfig(m=3, starts=3, max_iters=20, seed=options.seed)

    def snapshot():
        return json.dumps({
            "search": search_min_deficit(k3, config).to_dict(),
            "jensen": _jensen(options),
            "gradient": _gradient(options),
        }, sort_keys=True)

    return {"ok": snapshot() == snapshot()}


def run_selftest(seed: int = 0, quick: bool = False, workers: int = 1) -> VerificationResult:
    options = SelftestOptions(seed, quick, workers)
    results = []
    with capture_messages("forge.selftest") as handler:
        for name, func in CHECKS:
            outcome = func(options)
            outcome = {"name": name, **outcome}
            results.append(outcome)
            if outcome["ok"]:
                log.info("%s passed", name, extra={"messageCode": "selftest:" + name})
            else:
                log.error("%s failed", name, extra={"messageCode": "selftest:" + name})
    valid = all(r["ok"] for r in results)
    return VerificationResult(valid, handler.messages, {"checks": results, "seed": seed, "quick": quick})
