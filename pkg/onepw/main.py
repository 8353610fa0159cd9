from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Optional

from onepw import bounds, cache as ch, common, config, export, extension, search, textio, util
from onepw.drawing import OnePlanarDrawing, validate_drawing
from onepw.graph import Bipartition, SimpleGraph, bipartition_of

EXIT_PASS = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_HYPOTHESIS = 3
EXIT_BUDGET = 4


def _write(*lines: str) -> None:
    sys.stdout.write("".join(f"{line}\n" for line in lines))


def _budget_text(budget: search.SearchBudget) -> str:
    return (
        f"crossings={budget.max_crossings} nodes={budget.max_nodes} "
        f"time={budget.time_limit:g} symmetry={str(budget.use_symmetry).lower()}"
    )


def _load_drawing(path: Path) -> OnePlanarDrawing:
    try:
        return textio.load_drawing(path)
    except FileNotFoundError as e:
        raise common.ArgumentError(f"No such drawing file '{path}'") from e


def validate(args: argparse.Namespace, _: config.RunConfig) -> int:
    drawing = _load_drawing(args.path)
    report = validate_drawing(drawing)
    if report.valid:
        _write(
            f"VALID vertices={drawing.vertex_count} edges={len(drawing.recovered_edges)} "
            f"crossings={drawing.crossing_count}",
        )
        return EXIT_PASS
    _write("INVALID", *report.violations)
    return EXIT_FAILED


def certify(args: argparse.Namespace, _: config.RunConfig) -> int:
    drawing = _load_drawing(args.path)
    try:
        certificate = bounds.certify(drawing, name=args.path.name)
    except common.StructuralError as e:
        _write(f"INVALID {e}")
        return EXIT_FAILED
    sys.stdout.write(certificate.text())
    if certificate.failed_hypothesis is not None:
        logging.info("Hypothesis %s failed", certificate.failed_hypothesis)
        return EXIT_HYPOTHESIS
    return EXIT_PASS if certificate.status == "PASS" else EXIT_FAILED


def check(args: argparse.Namespace, _: config.RunConfig) -> int:
    drawing = _load_drawing(args.path)
    try:
        bundle = extension.extend(drawing)
    except common.StructuralError as e:
        _write(f"INVALID {e}")
        return EXIT_FAILED
    empty = [w for w in bundle.reds if not extension.check_empty_triangle(bundle, w)]
    reports = [
        extension.CheckReport(
            tuple(extension.CheckLine("FAIL", "proposition-1", f"w={w}") for w in empty)
            or (extension.CheckLine("PASS", "proposition-1"),),
        ),
        extension.check_proposition_2(bundle),
        extension.check_proposition_3(bundle),
        extension.check_proposition_4(bundle),
        extension.check_proposition_5(bundle),
    ]
    for report in reports:
        sys.stdout.write(report.text())
    if not all(report.passed for report in reports):
        return EXIT_FAILED
    if extension.find_separating_2cycles(bundle):
        return EXIT_HYPOTHESIS
    return EXIT_PASS


def _colored(graph: SimpleGraph, bipartition: Optional[Bipartition]) -> Optional[Bipartition]:
    return bipartition if bipartition is not None else bipartition_of(graph)


def _cache(cfg: config.RunConfig) -> Optional[ch.ResultCache]:
    return None if cfg.cache is None else ch.ResultCache(cfg.cache)


def _emit_witness(args: argparse.Namespace, drawing: Optional[OnePlanarDrawing]) -> None:
    if drawing is None or args.output is None:
        return
    args.output.write_text(textio.dump_drawing(drawing))
    _write(f"witness={args.output}")


def _outcome_line(question: str, outcome: search.SearchOutcome) -> str:
    if question == "1planar":
        return f"YES crossings={outcome.crossings}" if outcome.found else "NO"
    if question == "mincross":
        return f"crossings={outcome.crossings}" if outcome.found else "NOT-1-PLANAR"
    return f"crossings={outcome.crossings}" if outcome.found else "NO-DISC-DRAWING"


def _search_graph(args: argparse.Namespace, cfg: config.RunConfig, question: str) -> int:
    graph, bipartition = util.load_graph_spec(args.graph)
    bipartition = _colored(graph, bipartition)
    rim: Optional[tuple[int, ...]] = None
    if question == "disc":
        if bipartition is None:
            raise common.ArgumentError("Disc search requires a bipartite graph")
        rim = bipartition.xs if args.rim == "X" else bipartition.ys

    store = _cache(cfg)
    key = ch.question_key(graph, bipartition, rim)
    record = store.get(key, question) if store else None
    if store and record:
        logging.info("Cache hit for %s", key)
        _write(record.verdict)
        _emit_witness(args, store.witness(record, graph, bipartition))
        return EXIT_PASS if not record.verdict.startswith("NO") else EXIT_FAILED

    budget = cfg.budget
    if question == "disc":
        assert rim is not None
        outcome = search.disc_min_crossings(
            graph, rim, budget, bipartition, cfg.jobs, cfg.start_method,
        )
    else:
        outcome = search.min_crossings_one_planar(
            graph, budget, bipartition, cfg.jobs, cfg.start_method,
        )
    for line in outcome.provenance:
        logging.info("%s", line)
    if not outcome.exhausted:
        _write(f"UNKNOWN nodes={outcome.nodes}", *outcome.provenance[-1:])
        return EXIT_BUDGET

    verdict = _outcome_line(question, outcome)
    _write(verdict)
    _emit_witness(args, outcome.drawing)
    if store:
        store.put(key, question, verdict, _budget_text(budget), outcome.drawing)
    return EXIT_PASS if outcome.found else EXIT_FAILED


def search_1planar(args: argparse.Namespace, cfg: config.RunConfig) -> int:
    return _search_graph(args, cfg, "1planar")


def search_mincross(args: argparse.Namespace, cfg: config.RunConfig) -> int:
    return _search_graph(args, cfg, "mincross")


def search_disc(args: argparse.Namespace, cfg: config.RunConfig) -> int:
    return _search_graph(args, cfg, "disc")


def search_extremal(args: argparse.Namespace, cfg: config.RunConfig) -> int:
    store = _cache(cfg)
    key = f"ext:{args.x}:{args.y}"
    record = store.get(key, "extremal") if store else None
    if store and record:
        logging.info("Cache hit for %s", key)
        _write(record.verdict)
        _emit_witness(args, store.witness(record))
        return EXIT_PASS

    result = search.extremal_search(args.x, args.y, cfg.budget, cfg.jobs, cfg.start_method)
    for line in result.provenance:
        logging.info("%s", line)
    edges = "unknown" if result.max_edges is None else str(result.max_edges)
    verdict = f"max_edges={edges} exhausted={str(result.exhausted).lower()}"
    _write(verdict)
    _emit_witness(args, result.witness)
    if not result.exhausted:
        return EXIT_BUDGET
    if store:
        store.put(key, "extremal", verdict, _budget_text(cfg.budget), result.witness)
    return EXIT_PASS


def search_probe5(args: argparse.Namespace, cfg: config.RunConfig) -> int:
    samples = search.random_bipartite_samples(args.x, args.y_max, args.samples, args.seed)
    records = search.probe_problem5(samples, cfg.budget)
    _write(*(str(r) for r in records))
    feasible = [r for r in records if r.holds is not None]
    violated = [r for r in feasible if not r.holds]
    _write(f"samples={len(records)} feasible={len(feasible)} violated={len(violated)}")
    return EXIT_PASS


def bounds_table(args: argparse.Namespace, _: config.RunConfig) -> int:
    if args.n is not None:
        _write(f"karpov={bounds.karpov_bound(args.n)}")
        return EXIT_PASS
    x, y = args.parts
    n = x + y
    lines = []
    if n >= 4:
        lines.append(f"karpov={bounds.karpov_bound(n)}")
    lines.extend(
        [
            f"czap={bounds.czap_bound(n, x)}",
            f"main={bounds.main_bound(n, x)}",
            f"removal={bounds.removal_lower_bound(x, y)}",
        ],
    )
    _write(*lines)
    return EXIT_PASS


def export_drawing(args: argparse.Namespace, _: config.RunConfig) -> int:
    diagram = export.drawing_diagram(_load_drawing(args.path), bundle=args.bundle)
    text = export.export(diagram, args.format)
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text)
    return EXIT_PASS


def cache_list(_: argparse.Namespace, cfg: config.RunConfig) -> int:
    store = _cache(cfg)
    if store is None:
        raise common.ArgumentError("No cache file configured")
    for record in store.records:
        _write(f"{record.question} {record.key} {record.verdict} witness={record.witness or '-'}")
    return EXIT_PASS


def _budget_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-j",
        "--jobs",
        type=int,
        help="Number of parallel search workers (default: 1).",
    )
    parser.add_argument("--max-crossings", type=int, help="Largest crossing count tried.")
    parser.add_argument("--max-nodes", type=int, help="Largest number of search nodes.")
    parser.add_argument("--time-limit", type=float, help="Maximum number of seconds to search.")
    parser.add_argument(
        "--no-symmetry",
        dest="use_symmetry",
        action="store_const",
        const=False,
        help="Disable automorphism pruning.",
    )
    parser.add_argument(
        "--start-method",
        type=str,
        choices=config.START_METHODS,
        help="Start method to be used for multiprocessing (default: spawn).",
    )
    parser.add_argument(
        "-o",
        "--output",
        type=Path,
        help=(
            "File to write the witness drawing to; no witness file is written without it"
            " (a configured cache still stores one)."
        ),
    )


def _parser() -> argparse.ArgumentParser:  # noqa: PLR0915
    parser = argparse.ArgumentParser(description="Bipartite 1-planar graph workbench")
    parser.add_argument("--cache", type=Path, help="Result cache file.")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument(
        "-v",
        "--verbose",
        dest="verbosity",
        action="store_const",
        const="verbose",
        help="Log debug output.",
    )
    verbosity.add_argument(
        "-q",
        "--quiet",
        dest="verbosity",
        action="store_const",
        const="quiet",
        help="Log warnings only.",
    )

    subparsers = parser.add_subparsers(dest="subcommands")

    for name, func, help_text in (
        ("validate", validate, "Check a drawing file and report every violation."),
        ("certify", certify, "Compute the edge-bound certificate of a drawing."),
        ("check", check, "Run the structural checks of the extended planarization."),
    ):
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument("path", type=Path, help="Drawing file.")
        sub.set_defaults(func=func)

    parser_search = subparsers.add_parser("search", help="Search 1-planar drawings.")
    search_parsers = parser_search.add_subparsers(dest="kind")
    for name, func, help_text in (
        ("1planar", search_1planar, "Decide 1-planarity."),
        ("mincross", search_mincross, "Find the fewest crossings of a 1-planar drawing."),
        ("disc", search_disc, "Find the fewest crossings of a 1-disc drawing."),
    ):
        sub = search_parsers.add_parser(name, help=help_text)
        sub.add_argument("graph", type=str, help="Graph file or K<x>,<y>.")
        _budget_arguments(sub)
        sub.set_defaults(func=func)
        if name == "disc":
            sub.add_argument(
                "--rim",
                choices=["X", "Y"],
                default="X",
                help="Part drawn on the disc boundary (default: %(default)s).",
            )

    parser_extremal = search_parsers.add_parser(
        "extremal",
        help="Maximum edge count of a 1-planar graph with given part sizes.",
    )
    parser_extremal.add_argument("x", type=int, help="Size of the smaller part.")
    parser_extremal.add_argument("y", type=int, help="Size of the larger part.")
    _budget_arguments(parser_extremal)
    parser_extremal.set_defaults(func=search_extremal)

    parser_probe = search_parsers.add_parser(
        "probe5",
        help="Compare random 1-disc drawable graphs against |E| <= 2|Y| + 5|X|/3 - 2.",
    )
    parser_probe.add_argument("x", type=int, help="Size of the rim part.")
    parser_probe.add_argument("y_max", type=int, help="Largest size of the other part.")
    parser_probe.add_argument(
        "--samples",
        type=int,
        default=20,
        help="Number of random graphs (default: %(default)d).",
    )
    parser_probe.add_argument(
        "--seed",
        type=int,
        default=0,
        help="Random seed (default: %(default)d).",
    )
    _budget_arguments(parser_probe)
    parser_probe.set_defaults(func=search_probe5)

    parser_bounds = subparsers.add_parser("bounds", help="Evaluate closed-form edge bounds.")
    instance = parser_bounds.add_mutually_exclusive_group(required=True)
    instance.add_argument("--n", type=int, help="Vertex count.")
    instance.add_argument("--parts", type=int, nargs=2, metavar=("X", "Y"), help="Part sizes.")
    parser_bounds.set_defaults(func=bounds_table)

    parser_export = subparsers.add_parser("export", help="Export a schematic diagram.")
    parser_export.add_argument("path", type=Path, help="Drawing or embedding file.")
    parser_export.add_argument(
        "--format",
        choices=export.FORMATS,
        default="dot",
        help="Output format (default: %(default)s).",
    )
    parser_export.add_argument(
        "--bundle",
        action="store_true",
        help="Export the planarization extended by the e_w edges.",
    )
    parser_export.add_argument("-o", "--output", type=Path, help="Output file (default: stdout).")
    parser_export.set_defaults(func=export_drawing)

    parser_cache = subparsers.add_parser("cache", help="List result cache records.")
    parser_cache.set_defaults(func=cache_list)

    return parser


def main(argv: Optional[list[str]] = None) -> None:
    parser = _parser()
    args = parser.parse_args(argv)

    func: Optional[Callable[[argparse.Namespace, config.RunConfig], int]] = getattr(
        args,
        "func",
        None,
    )
    if func is None:
        parser.print_usage(sys.stderr)
        sys.exit(EXIT_USAGE)

    logging.basicConfig(format="[%(asctime)s] %(message)s")
    try:
        cfg = config.resolve(vars(args))
        logging.getLogger().setLevel(cfg.log_level)
        status = func(args, cfg)
    except common.ParseError as e:
        sys.stderr.write(f"{getattr(args, 'path', '')}: {e}\n")
        sys.exit(EXIT_USAGE)
    except (common.ArgumentError, common.LoadError, common.SizeError) as e:
        sys.stderr.write(f"error: {e}\n")
        sys.exit(EXIT_USAGE)
    except KeyboardInterrupt:
        sys.exit("\nUser cancellation. Exiting.\n")
    sys.exit(status)


if __name__ == "__main__":
    main()
