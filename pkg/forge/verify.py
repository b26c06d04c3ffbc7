"""Connectivity verification pipeline.

Builds H(q), checks its structure, measures its vertex connectivity by maximum flow and, for a
sample of vertex pairs (or all of them), produces k internally disjoint paths in H_q^r, lifts them
into H(q) and checks the result. Findings are logged and come back as one VerificationResult.
"""

import itertools
import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache

import numpy as np

from . import constants as fc
from .bookpile import Bookpile, bookpile, bookpile_size, format_label, verify_standard_copies
from .errors import ForgeContradictionError, ForgeInputError, ForgeStructuralError
from .graph import Graph, is_connected, vertex_connectivity
from .hypergraph import BookpileHypergraph, build_hqr, connect, threshold_q
from .lifting import lift_paths, validate_graph_paths
from .reporting import VerificationResult, capture_messages

log = logging.getLogger(__name__)

LabeledPair = tuple[tuple[int, ...], tuple[int, ...]]


def _chunks(items: Sequence, count: int) -> list[list]:
    size = max(1, -(-len(items) // count))
    return [list(items[start:start + size]) for start in range(0, len(items), size)]


def _run_chunks(worker, chunks: list, workers: int) -> list:
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(worker, chunks))
    return [worker(chunk) for chunk in chunks]


def _failure(pair: LabeledPair, reason: str) -> dict:
    return {"u": format_label(pair[0]), "v": format_label(pair[1]), "reason": reason}


def _check_hypergraph_pairs(args) -> list[dict]:
    q, r, k, pairs = args
    hg = BookpileHypergraph(q, r)
    failures = []
    for u, v in pairs:
        try:
            connect(hg, u, v, k)
        except (ForgeContradictionError, ForgeStructuralError) as err:
            failures.append(_failure((u, v), str(err)))
    return failures


def verify_hypergraph_connectivity(q: int, r: int, k: int, pairs: Iterable[LabeledPair] | None = None,
                                   workers: int = 1) -> dict:
    """Run connect on the given pairs of H_q^r, or on all of them."""
    hg = build_hqr(q, r)
    if q < threshold_q(k, r):
        raise ForgeInputError("q=%d is below threshold_q(%d, %d) = %d" % (q, k, r, threshold_q(k, r)),
                              "verify_hypergraph_connectivity")
    if pairs is None:
        pairs = list(itertools.combinations(hg.vertices, 2))
    else:
        pairs = [(hg.check_vertex(u), hg.check_vertex(v)) for u, v in pairs]
    chunks = [(q, r, k, chunk) for chunk in _chunks(pairs, workers * 4)]
    failures = [f for part in _run_chunks(_check_hypergraph_pairs, chunks, workers) for f in part]
    log.info("checked %d vertex pairs of H_%d^%d for %d disjoint paths: %d failed",
             len(pairs), q, r, k, len(failures))
    return {
        "q": q,
        "r": r,
        "k": k,
        "pairs_checked": len(pairs),
        "pairs_failed": len(failures),
        "failures": failures[:10],
        "ok": not failures,
    }


@lru_cache(maxsize=4)
def _cached_bookpile(h: Graph, q: int) -> Bookpile:
    return bookpile(h, q)


def _check_lifted_pairs(args) -> list[dict]:
    h, q, k, pairs = args
    bp = _cached_bookpile(h, q)
    hg = BookpileHypergraph(q, h.n)
    union = set()
    failures = []
    for u, v in pairs:
        try:
            paths = connect(hg, u, v, k)
            lifted = lift_paths(bp, paths)
        except (ForgeContradictionError, ForgeStructuralError) as err:
            failures.append(_failure((u, v), str(err)))
            continue
        if not validate_graph_paths(bp.graph, lifted, bp.vertex(u), bp.vertex(v)):
            failures.append(_failure((u, v), "lifted paths are not internally disjoint paths of H(q)"))
            continue
        union.clear()
        for path in paths:
            for edge in path.edges:
                union.update(bp.copy_for(edge).vertex_map)
        if any(x not in union for walk in lifted for x in walk):
            failures.append(_failure((u, v), "lifted paths leave the union of their standard copies"))
    return failures


def sample_pairs(vertices: Sequence, samples: int, seed: int) -> list[tuple]:
    """Distinct unordered pairs drawn with a seeded generator, in draw order."""
    total = len(vertices) * (len(vertices) - 1) // 2
    if samples >= total:
        return list(itertools.combinations(vertices, 2))
    rng = np.random.default_rng(seed)
    chosen = []
    seen = set()
    while len(chosen) < samples:
        a, b = sorted(int(x) for x in rng.choice(len(vertices), size=2, replace=False))
        if (a, b) not in seen:
            seen.add((a, b))
            chosen.append((vertices[a], vertices[b]))
    return chosen


def verify_connectivity(h: Graph, q: int, k: int, all_pairs: bool = False, samples: int = 100,
                        seed: int = 0, workers: int = 1, cap: int = fc.BOOKPILE_VERTEX_CAP) -> VerificationResult:
    """Check that H(q) is k-connected, by maximum flow and by explicit lifted certificates."""
    if not is_connected(h):
        raise ForgeInputError("lifted certificates need a connected graph", "verify_connectivity")
    if h.n < 2:
        raise ForgeInputError("the graph needs at least 2 vertices", "verify_connectivity")
    with capture_messages("forge") as handler:
        bp = bookpile(h, q, cap)
        r = h.n
        counts_ok = (bp.graph.n == bookpile_size(r, q) and bp.graph.e == q ** r * h.e
                     and len(bp.copies) == q ** r)
        if not counts_ok:
            log.error("H(%d) has %d vertices and %d edges, expected %d and %d", q, bp.graph.n, bp.graph.e,
                      bookpile_size(r, q), q ** r * h.e, extra={"messageCode": "forge:counts"})
        copies_ok = verify_standard_copies(h, bp)
        if not copies_ok:
            log.error("standard copies do not partition the edges of H(%d)", q,
                      extra={"messageCode": "forge:copies"})

        kappa = vertex_connectivity(bp.graph)
        kappa_ok = kappa >= k
        log.log(logging.INFO if kappa_ok else logging.ERROR, "maximum flow gives kappa(H(%d)) = %d, need %d",
                q, kappa, k, extra={"messageCode": "forge:kappa"})

        threshold = threshold_q(k, r)
        pairs = []
        failures = []
        if q < threshold:
            log.warning("q=%d is below threshold_q(%d, %d) = %d; skipping constructive certificates",
                        q, k, r, threshold, extra={"messageCode": "forge:threshold"})
        else:
            hg = build_hqr(q, r, cap)
            pairs = (list(itertools.combinations(hg.vertices, 2)) if all_pairs
                     else sample_pairs(hg.vertices, samples, seed))
            chunks = [(h, q, k, chunk) for chunk in _chunks(pairs, workers * 4)]
            failures = [f for part in _run_chunks(_check_lifted_pairs, chunks, workers) for f in part]
            for failure in failures[:10]:
                log.error("no certificate for %s, %s: %s", failure["u"], failure["v"], failure["reason"],
                          extra={"messageCode": "forge:certificate"})
            log.info("lifted certificates checked for %d pairs, %d failed", len(pairs), len(failures),
                     extra={"messageCode": "forge:certificates"})

    valid = counts_ok and copies_ok and kappa_ok and not failures
    data = {
        "bookpile": {"q": q, "r": r, "vertices": bp.graph.n, "edges": bp.graph.e, "copies": len(bp.copies)},
        "k": k,
        "kappa": kappa,
        "threshold_q": threshold,
        "pairs_checked": len(pairs),
        "pairs_failed": len(failures),
    }
    return VerificationResult(valid, handler.messages, data)


def connectivity_profile(h: Graph, qs: Iterable[int], cap: int = fc.BOOKPILE_VERTEX_CAP) -> list[dict]:
    """kappa(H(q)) for each q."""
    profile = []
    for q in qs:
        bp = bookpile(h, q, cap)
        profile.append({"q": q, "vertices": bp.graph.n, "kappa": vertex_connectivity(bp.graph)})
    return profile
