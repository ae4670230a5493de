# -*- coding: utf-8 -*-
"""
Command line interface.

Exit codes: 0 success, 1 a verification check failed, 2 usage error,
3 invalid input (bad lattice, formula, recipe or missing file).
"""

import argparse
import json
import logging
import sys
from typing import List, Optional

from . import __version__
from .catalog import build, catalog, dump, load_formula, parse_reference
from .evaluate import evaluator_for
from .exceptions import CatalogError, FormulaError, LatticeError, ModelError
from .lattice import FiniteLattice
from .logic import free_vars
from .suites import SUITE_ALIASES, SUITES, format_reports, run_suite
from .universe import UniverseSpec, build_universe
from .utils import write_json, write_text

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INPUT = 3

_INPUT_ERRORS = (LatticeError, FormulaError, CatalogError, ModelError, FileNotFoundError, ValueError)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="comdef", description="Definable sets in finite lattices of varieties")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for progress, -vv for detail")
    commands = parser.add_subparsers(dest="command", required=True)

    lattice = commands.add_parser("lattice", help="validate or draw a lattice file")
    lattice_commands = lattice.add_subparsers(dest="action", required=True)
    validate = lattice_commands.add_parser("validate", help="check that a file describes a lattice")
    validate.add_argument("file")
    dot = lattice_commands.add_parser("dot", help="write the Hasse diagram as Graphviz DOT")
    dot.add_argument("file")
    dot.add_argument("-o", "--output", required=True)

    universe = commands.add_parser("universe", help="build a fragment from a recipe")
    universe_commands = universe.add_subparsers(dest="action", required=True)
    build_cmd = universe_commands.add_parser("build", help="materialize a recipe such as builtin:F2")
    build_cmd.add_argument("spec")
    build_cmd.add_argument("-o", "--output", required=True)
    build_cmd.add_argument("--workers", type=int, default=None)

    evaluate = commands.add_parser("eval", help="print the set a formula defines")
    source = evaluate.add_mutually_exclusive_group(required=True)
    source.add_argument("--lattice", help="lattice JSON file")
    source.add_argument("--universe", help="recipe to build first, e.g. builtin:F2")
    evaluate.add_argument("--formula", required=True, help="formula file or builtin:Name[params]")

    verify = commands.add_parser("verify", help="run verification suites")
    verify.add_argument("--suite", choices=SUITES + ("all",) + tuple(SUITE_ALIASES), default="all")
    verify.add_argument("--json", action="store_true", help="write a JSON report")
    verify.add_argument("-o", "--output", help="report destination, default stdout")
    verify.add_argument("--workers", type=int, default=None)
    verify.add_argument("--seed", type=int, default=0)

    cat = commands.add_parser("catalog", help="inspect the formula catalog")
    cat_commands = cat.add_subparsers(dest="action", required=True)
    cat_commands.add_parser("list", help="list catalog entries")
    show = cat_commands.add_parser("show", help="print one built formula")
    show.add_argument("ref", help="Name[params], with or without the builtin: prefix")
    dump_cmd = cat_commands.add_parser("dump", help="write golden texts into a directory")
    dump_cmd.add_argument("directory")
    return parser


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s")


def _emit(text: str, output: Optional[str]):
    if output:
        write_text(output, text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _lattice_command(args) -> int:
    lattice = FiniteLattice.load(args.file)
    if args.action == "validate":
        bottom, top = lattice.labels[lattice.bottom], lattice.labels[lattice.top]
        print(f"ok: {len(lattice)} elements, bottom {bottom}, top {top}")
    else:
        lattice.save_dot(args.output)
        logger.info(f"wrote {args.output}")
    return EXIT_OK


def _universe_command(args) -> int:
    universe = build_universe(UniverseSpec.load(args.spec), workers=args.workers)
    universe.save(args.output)
    print(f"{universe.spec.name}: {len(universe)} elements written to {args.output}")
    return EXIT_OK


def _eval_command(args) -> int:
    if args.universe:
        lattice = build_universe(UniverseSpec.load(args.universe)).lattice
    else:
        lattice = FiniteLattice.load(args.lattice)
    formula = load_formula(args.formula)
    relation = evaluator_for(lattice).relation(formula)
    if not relation.variables:
        print("true" if relation.table.item() else "false")
        return EXIT_OK
    rows = sorted("\t".join(lattice.labels[i] for i in row) for row in relation.tuples())
    for row in rows:
        print(row)
    return EXIT_OK


def _verify_command(args) -> int:
    reports = run_suite(args.suite, workers=args.workers, seed=args.seed)
    passed = all(r.passed for r in reports)
    if args.json:
        document = {"suite": args.suite, "passed": passed, "reports": [r.to_json() for r in reports]}
        if args.output:
            write_json(args.output, document)
        else:
            print(json.dumps(document, indent=2, ensure_ascii=False))
    else:
        _emit(format_reports(reports), args.output)
    return EXIT_OK if passed else EXIT_FAILED


def _catalog_command(args) -> int:
    if args.action == "list":
        for entry in catalog():
            print(f"{entry.signature():24} arity {entry.arity}  {entry.reference}")
    elif args.action == "show":
        ref = args.ref if args.ref.startswith("builtin:") else f"builtin:{args.ref}"
        name, params = parse_reference(ref)
        formula = build(name, *params)
        print(formula)
        logger.info(f"free variables: {free_vars(formula)}")
    else:
        for path in dump(args.directory):
            print(path)
    return EXIT_OK


_COMMANDS = {
    "lattice": _lattice_command,
    "universe": _universe_command,
    "eval": _eval_command,
    "verify": _verify_command,
    "catalog": _catalog_command,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    _configure_logging(args.verbose)
    try:
        return _COMMANDS[args.command](args)
    except _INPUT_ERRORS as exc:
        print(f"comdef: error: {exc}", file=sys.stderr)
        logger.debug("input error", exc_info=True)
        return EXIT_INPUT


def run():
    sys.exit(main())
