"""Command line front end.

    forge <subcommand> [options]

Each subcommand registers its own option group next to the general options. Results go to
--out (or standard output) as JSON, DOT or a short text summary; diagnostics go to standard
error. When no arguments are given they are read from the FORGE_ARGS environment variable.
"""

import json
import logging
import math
import optparse
import os
import shlex
import sys
from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from . import constants as fc
from .bookpile import bookpile, clone_coloring_certificate, parse_label
from .errors import ForgeException, ForgeInputError
from .generators import resolve_graph
from .graph import Graph, chromatic_number, find_coloring, girth, vertex_connectivity
from .graphon import (
    StepGraphon,
    book_commonality_chain,
    commonality_deficit,
    finite_difference_error,
    jensen_check,
    read_graphon,
)
from .hypergraph import build_hqr, check_r_extension, connect, is_linear, threshold_q, validate_disjoint
from .lifting import lift_paths, validate_graph_paths
from .search import SearchConfig, certify_witness, search_min_deficit
from .selftest import run_selftest
from .verify import connectivity_profile, verify_connectivity

log = logging.getLogger(__name__)

USAGE = "forge <subcommand> [options]"


@dataclass
class CommandOutput:
    document: dict
    ok: bool = True
    dot: str | None = None
    text: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Subcommand:
    summary: str
    options: Callable[[optparse.OptionGroup], None]
    run: Callable[[optparse.Values], CommandOutput]


def _general_options(parser: optparse.OptionParser) -> None:
    group = optparse.OptionGroup(parser, "General")
    parser.add_option_group(group)
    group.add_option("--seed", action="store", dest="seed", type="int", default=0,
                     help="Seed for every random choice.")
    group.add_option("--threads", action="store", dest="threads", type="int", default=1,
                     help="Worker processes for all-pairs verification and search restarts.")
    group.add_option("--format", action="store", dest="format", type="choice", choices=["json", "dot", "text"],
                     default="json", help="Output format: json, dot or text.")
    group.add_option("--out", action="store", dest="out",
                     help="Write the result to this file instead of standard output.")
    group.add_option("--verbose", action="store_true", dest="verbose", default=False,
                     help="Log progress to standard error.")
    group.add_option("--quiet", action="store_true", dest="quiet", default=False,
                     help="Only log errors.")
    group.add_option("--vertex-cap", action="store", dest="vertex_cap", type="int",
                     default=fc.BOOKPILE_VERTEX_CAP, help="Largest bookpile or hypergraph to build.")
    group.add_option("--chi-limit", action="store", dest="chi_limit", type="int",
                     default=fc.CHROMATIC_VERTEX_LIMIT, help="Largest graph for the exact chromatic number.")
    group.add_option("--density-cap", action="store", dest="density_cap", type="int",
                     default=fc.DENSITY_MAP_CAP, help="Largest number of vertex maps for a density.")


def _graph_option(group, required_help="Graph JSON file or gen:<name> (k3, c5, p4, k3,3, petersen, q3, lq3)."):
    group.add_option("--input", "--graph", action="store", dest="graph", help=required_help)


def _graphon_option(group):
    group.add_option("--graphon", action="store", dest="graphon", help="Step graphon JSON file.")


def _require(options, *names):
    for name in names:
        if getattr(options, name, None) is None:
            raise ForgeInputError("--%s is required" % name.replace("_", "-"), "cli")


def _graph(options) -> Graph:
    _require(options, "graph")
    return resolve_graph(options.graph)


def _graphon(options) -> StepGraphon:
    _require(options, "graphon")
    return read_graphon(options.graphon)


def _iset(options) -> list[int]:
    if not options.iset:
        return []
    try:
        return [int(part) for part in options.iset.split(",") if part.strip()]
    except ValueError:
        raise ForgeInputError("--iset takes comma separated vertex ids, found '%s'" % options.iset, "cli")


def _write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as out_file:
        out_file.write(text)


def _dump(document: dict) -> str:
    return json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


# bookpile

def _bookpile_options(group):
    _graph_option(group)
    group.add_option("--q", action="store", dest="q", type="int", help="Number of copies per booking.")
    group.add_option("--copies", action="store", dest="copies", help="Also write the standard copies here.")
    group.add_option("--dot", action="store", dest="dot", help="Also write the graph as DOT here.")
    group.add_option("--coloring", action="store_true", dest="coloring", default=False,
                     help="Attach the clone colouring lifted from an optimal colouring of the graph.")


def _run_bookpile(options) -> CommandOutput:
    _require(options, "q")
    h = _graph(options)
    bp = bookpile(h, options.q, options.vertex_cap)
    if options.copies:
        labels = bp.graph.labels
        _write_text(options.copies, _dump({"q": bp.q, "r": bp.r,
                                           "copies": [copy.to_dict(labels) for copy in bp.copies]}))
    if options.dot:
        _write_text(options.dot, bp.graph.to_dot("bookpile"))
    document = bp.graph.to_dict()
    document.update({"q": bp.q, "r": bp.r, "standard_copies": len(bp.copies)})
    if options.coloring:
        document["clone_coloring"] = clone_coloring_certificate(bp)
    text = ["H(%d): %d vertices, %d edges, %d standard copies" % (bp.q, bp.graph.n, bp.graph.e, len(bp.copies))]
    return CommandOutput(document, dot=bp.graph.to_dot("bookpile"), text=text)


# hqr

def _hqr_options(group):
    group.add_option("--q", action="store", dest="q", type="int", help="Coordinate range.")
    group.add_option("--r", action="store", dest="r", type="int", help="Uniformity.")
    group.add_option("--list", action="store_true", dest="list", default=False,
                     help="Include every vertex and edge.")


def _run_hqr(options) -> CommandOutput:
    _require(options, "q", "r")
    hg = build_hqr(options.q, options.r, options.vertex_cap)
    document = {
        "q": hg.q,
        "r": hg.r,
        "vertices": len(hg.vertices),
        "edges": len(hg.edges),
        "degree": hg.q,
        "linear": is_linear(hg),
    }
    if hg.r >= 3:
        document["slices_extend"] = all(check_r_extension(hg, i) for i in range(1, hg.q + 1))
    if options.list:
        document["listing"] = hg.to_dict()
    text = ["H_%d^%d: %d vertices, %d edges" % (hg.q, hg.r, len(hg.vertices), len(hg.edges))]
    return CommandOutput(document, ok=document["linear"] and document.get("slices_extend", True), text=text)


# connect

def _connect_options(group):
    group.add_option("--q", action="store", dest="q", type="int", help="Coordinate range.")
    group.add_option("--r", action="store", dest="r", type="int", help="Uniformity.")
    group.add_option("--u", action="store", dest="u", help='First vertex, e.g. "(1,1,α)".')
    group.add_option("--v", action="store", dest="v", help='Second vertex, e.g. "(9,9,α)".')
    group.add_option("--k", action="store", dest="k", type="int", help="Number of disjoint paths.")
    _graph_option(group, "Also lift the paths into the bookpile of this graph (it must have r vertices).")


def _run_connect(options) -> CommandOutput:
    _require(options, "q", "r", "u", "v", "k")
    hg = build_hqr(options.q, options.r, options.vertex_cap)
    u, v = parse_label(options.u), parse_label(options.v)
    paths = connect(hg, u, v, options.k)
    valid = validate_disjoint(paths, u, v)
    document = {
        "q": hg.q,
        "r": hg.r,
        "k": options.k,
        "u": options.u,
        "v": options.v,
        "threshold_q": threshold_q(options.k, hg.r),
        "paths": [path.to_dict() for path in paths],
        "valid": valid,
    }
    if options.graph is not None:
        h = _graph(options)
        if h.n != hg.r:
            raise ForgeInputError("the graph has %d vertices, r is %d" % (h.n, hg.r), "connect")
        bp = bookpile(h, hg.q, options.vertex_cap)
        lifted = lift_paths(bp, paths)
        lifted_valid = validate_graph_paths(bp.graph, lifted, bp.vertex(u), bp.vertex(v))
        document["lifted"] = {"paths": lifted, "valid": lifted_valid}
        valid = valid and lifted_valid
    text = [" ".join(path.to_dict()["alternation"]) for path in paths]
    return CommandOutput(document, ok=valid, text=text)


# verify-connectivity

def _verify_options(group):
    _graph_option(group)
    group.add_option("--q", action="store", dest="q", type="int", help="Number of copies per booking.")
    group.add_option("--k", action="store", dest="k", type="int", help="Required connectivity.")
    group.add_option("--all-pairs", action="store_true", dest="all_pairs", default=False,
                     help="Certify every vertex pair instead of a sample.")
    group.add_option("--samples", action="store", dest="samples", type="int", default=100,
                     help="Number of sampled vertex pairs.")


def _run_verify(options) -> CommandOutput:
    _require(options, "q", "k")
    h = _graph(options)
    result = verify_connectivity(h, options.q, options.k, all_pairs=options.all_pairs, samples=options.samples,
                                 seed=options.seed, workers=options.threads, cap=options.vertex_cap)
    document = result.to_dict()
    text = ["kappa(H(%d)) = %d, %d pairs certified, %d failed" % (
        options.q, document["kappa"], document["pairs_checked"], document["pairs_failed"])]
    return CommandOutput(document, ok=result.valid, text=text)


# chi, girth, kappa

def _single_graph_options(group):
    _graph_option(group)


def _run_chi(options) -> CommandOutput:
    g = _graph(options)
    chi = chromatic_number(g, options.chi_limit)
    document = {"n": g.n, "chi": chi, "coloring": find_coloring(g, chi, options.chi_limit)}
    return CommandOutput(document, text=["chi = %d" % chi])


def _run_girth(options) -> CommandOutput:
    g = _graph(options)
    value = girth(g)
    finite = not math.isinf(value)
    document = {"n": g.n, "girth": int(value) if finite else None}
    return CommandOutput(document, text=["girth = %s" % (int(value) if finite else "inf")])


def _kappa_options(group):
    _graph_option(group)
    group.add_option("--profile", action="store", dest="profile",
                     help="Comma separated q values: report kappa of the bookpile of the graph for each.")


def _run_kappa(options) -> CommandOutput:
    g = _graph(options)
    if options.profile:
        try:
            qs = [int(part) for part in options.profile.split(",") if part.strip()]
        except ValueError:
            raise ForgeInputError("--profile takes comma separated integers", "cli")
        profile = connectivity_profile(g, qs, options.vertex_cap)
        return CommandOutput({"profile": profile},
                             text=["q=%d: kappa = %d" % (row["q"], row["kappa"]) for row in profile])
    kappa = vertex_connectivity(g)
    return CommandOutput({"n": g.n, "kappa": kappa}, text=["kappa = %d" % kappa])


# deficit, jensen, chain, gradient-check, witness

def _density_options(group):
    _graph_option(group)
    _graphon_option(group)
    group.add_option("--exact", action="store_true", dest="exact", default=False,
                     help="Use exhaustive enumeration with compensated summation.")


def _run_deficit(options) -> CommandOutput:
    h, w = _graph(options), _graphon(options)
    report = commonality_deficit(h, w, exact=options.exact, cap=None if options.exact else options.density_cap)
    return CommandOutput(report.to_dict(), text=["deficit = %.17g" % report.deficit])


def _book_options(group):
    _graph_option(group)
    _graphon_option(group)
    group.add_option("--iset", action="store", dest="iset", default="",
                     help="Comma separated independent set to glue along.")
    group.add_option("--q", action="store", dest="q", type="int", help="Number of copies in the book.")


def _run_jensen(options) -> CommandOutput:
    _require(options, "q")
    h, w = _graph(options), _graphon(options)
    report = jensen_check(h, _iset(options), options.q, w, options.density_cap)
    return CommandOutput(report.to_dict(), ok=report.ok,
                         text=["t(book) = %.17g >= t(h)^q = %.17g: %s" % (report.lhs, report.rhs, report.ok)])


def _run_chain(options) -> CommandOutput:
    _require(options, "q")
    h, w = _graph(options), _graphon(options)
    chain = book_commonality_chain(h, _iset(options), options.q, w, options.density_cap)
    text = ["%s: %s" % (name, holds) for name, holds in sorted(chain.steps.items())]
    return CommandOutput(chain.to_dict(), ok=chain.ok, text=text)


def _gradient_options(group):
    _graph_option(group)
    _graphon_option(group)
    group.add_option("--m", action="store", dest="m", type="int", default=3,
                     help="Steps of the random graphons used when no --graphon is given.")
    group.add_option("--trials", action="store", dest="trials", type="int", default=10,
                     help="Number of random graphons used when no --graphon is given.")
    group.add_option("--step", action="store", dest="step", type="float", default=1e-6,
                     help="Finite difference step.")


def _run_gradient_check(options) -> CommandOutput:
    h = _graph(options)
    if options.graphon is not None:
        graphons = [_graphon(options)]
    else:
        rng = np.random.default_rng(options.seed)
        graphons = [StepGraphon(0.05 + 0.9 * StepGraphon.random(options.m, rng).values)
                    for _ in range(options.trials)]
    worst = max(finite_difference_error(h, w, options.step) for w in graphons)
    ok = worst <= 1e-6
    return CommandOutput({"graphons": len(graphons), "max_relative_error": worst, "ok": ok}, ok=ok,
                         text=["max relative error %.3e" % worst])


def _search_options(group):
    _graph_option(group)
    group.add_option("--m", action="store", dest="m", type="int", default=4, help="Number of steps.")
    group.add_option("--starts", action="store", dest="starts", type="int", default=20,
                     help="Random restarts besides the two canonical starts.")
    group.add_option("--iters", action="store", dest="iters", type="int", default=200,
                     help="Iteration limit per start.")
    group.add_option("--step", action="store", dest="step", type="float", default=4.0,
                     help="Initial step size of the line search.")
    group.add_option("--shrink", action="store", dest="shrink", type="float", default=0.5,
                     help="Backtracking factor in (0, 1).")
    group.add_option("--tol", action="store", dest="tol", type="float", default=1e-9,
                     help="Projected gradient norm at which a start stops.")


def _run_search(options) -> CommandOutput:
    h = _graph(options)
    config = SearchConfig(m=options.m, starts=options.starts, max_iters=options.iters, step=options.step,
                          shrink=options.shrink, tol=options.tol, seed=options.seed, workers=options.threads)
    result = search_min_deficit(h, config)
    return CommandOutput(result.to_dict(),
                         text=["best deficit %.17g (%s)" % (result.best_deficit, result.verdict)])


def _witness_options(group):
    _graph_option(group)
    _graphon_option(group)


def _run_witness(options) -> CommandOutput:
    h, w = _graph(options), _graphon(options)
    report = certify_witness(h, w)
    return CommandOutput(report.to_dict(), text=["deficit %.17g: %s" % (report.deficit, report.verdict)])


# selftest

def _selftest_options(group):
    group.add_option("--quick", action="store_true", dest="quick", default=False,
                     help="Sample pairs and trials instead of running the full suite.")


def _run_selftest(options) -> CommandOutput:
    result = run_selftest(seed=options.seed, quick=options.quick, workers=options.threads)
    text = ["%s: %s" % (check["name"], "ok" if check["ok"] else "FAILED") for check in result.data["checks"]]
    return CommandOutput(result.to_dict(), ok=result.valid, text=text)


SUBCOMMANDS: dict[str, Subcommand] = {
    "bookpile": Subcommand("Build the q-bookpile of a graph.", _bookpile_options, _run_bookpile),
    "hqr": Subcommand("Describe the hypergraph H_q^r.", _hqr_options, _run_hqr),
    "connect": Subcommand("Disjoint paths between two vertices of H_q^r.", _connect_options, _run_connect),
    "verify-connectivity": Subcommand("Check that a bookpile is k-connected.", _verify_options, _run_verify),
    "chi": Subcommand("Exact chromatic number.", _single_graph_options, _run_chi),
    "girth": Subcommand("Length of a shortest cycle.", _single_graph_options, _run_girth),
    "kappa": Subcommand("Vertex connectivity.", _kappa_options, _run_kappa),
    "deficit": Subcommand("Commonality deficit at a step graphon.", _density_options, _run_deficit),
    "jensen": Subcommand("Book inequality t(book) >= t(h)^q.", _book_options, _run_jensen),
    "chain": Subcommand("Every stage of the book commonality chain.", _book_options, _run_chain),
    "gradient-check": Subcommand("Compare the density gradient with finite differences.", _gradient_options,
                                 _run_gradient_check),
    "search": Subcommand("Search step graphons for a negative deficit.", _search_options, _run_search),
    "witness": Subcommand("Certify a graphon as an uncommonness witness.", _witness_options, _run_witness),
    "selftest": Subcommand("Run the acceptance checks.", _selftest_options, _run_selftest),
}


def build_parser(name: str) -> optparse.OptionParser:
    subcommand = SUBCOMMANDS[name]
    parser = optparse.OptionParser(usage="forge %s [options]" % name, prog="forge",
                                   description=subcommand.summary)
    _general_options(parser)
    group = optparse.OptionGroup(parser, name)
    parser.add_option_group(group)
    subcommand.options(group)
    return parser


def _usage() -> str:
    lines = ["usage: " + USAGE, "", "subcommands:"]
    lines.extend("  %-20s %s" % (name, sub.summary) for name, sub in SUBCOMMANDS.items())
    return "\n".join(lines) + "\n"


def _configure_logging(options) -> logging.Handler:
    """Attach a stderr handler for one run; the caller removes it again."""
    logger = logging.getLogger("forge")
    if options.quiet:
        level = logging.ERROR
    elif options.verbose:
        level = logging.INFO
    else:
        level = logging.WARNING
    logger.setLevel(level)
    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    logger.addHandler(handler)
    return handler


def _config(options) -> dict:
    return {key: value for key, value in sorted(vars(options).items())}


def _emit(options, output: CommandOutput) -> None:
    if options.format == "dot":
        if output.dot is None:
            raise ForgeInputError("this subcommand has no DOT output", "cli")
        rendered = output.dot
    elif options.format == "text":
        rendered = "\n".join(output.text) + "\n"
    else:
        document = dict(output.document)
        document["config"] = _config(options)
        rendered = _dump(document)
    if options.out:
        _write_text(options.out, rendered)
    else:
        sys.stdout.write(rendered)


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv and os.environ.get("FORGE_ARGS"):
        argv = shlex.split(os.environ["FORGE_ARGS"])
    if not argv or argv[0] in ("-h", "--help"):
        sys.stdout.write(_usage())
        return fc.EXIT_OK if argv else fc.EXIT_INPUT
    name = argv[0]
    if name not in SUBCOMMANDS:
        sys.stderr.write("forge: unknown subcommand '%s'\n%s" % (name, _usage()))
        return fc.EXIT_INPUT
    parser = build_parser(name)
    try:
        options, args = parser.parse_args(argv[1:])
        if args:
            parser.error("unexpected arguments: %s" % " ".join(args))
        if options.threads < 1:
            parser.error("--threads must be at least 1")
        if options.quiet and options.verbose:
            parser.error("--quiet and --verbose exclude each other")
    except SystemExit as exit:
        return exit.code if isinstance(exit.code, int) else fc.EXIT_INPUT
    handler = _configure_logging(options)
    try:
        output = SUBCOMMANDS[name].run(options)
        _emit(options, output)
    except ForgeException as err:
        sys.stderr.write("forge: %s\n" % err)
        return err.exit_code
    except OSError as err:
        sys.stderr.write("forge: %s\n" % err)
        return fc.EXIT_INPUT
    except Exception as err:
        log.debug("unexpected failure", exc_info=True)
        sys.stderr.write("forge: internal error in %s: %s: %s\n" % (name, type(err).__name__, err))
        return fc.EXIT_FAILURE
    finally:
        logging.getLogger("forge").removeHandler(handler)
    return fc.EXIT_OK if output.ok else fc.EXIT_FAILURE


def main() -> None:
    sys.exit(run())
