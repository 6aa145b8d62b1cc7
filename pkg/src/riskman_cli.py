#!/usr/bin/env python3
"""
RISKMAN command line

    riskman validate INPUT... [options]
    riskman materialize INPUT... [options] -o FILE
    riskman ps-gen --pi N --sigma N -o FILE
    riskman distill INPUT.html -o FILE.nt
    riskman fixture -o DIR

Exit codes: 0 conforms, 1 violations, 2 usage/parse/limit error,
3 inconsistency.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from ingestion import InputFormat
from pipeline import (DEFAULT_WORKERS, ExitCode, PipelineConfig, ReportFormat, ValidationPipeline,
                      distill, ps_gen, run_materialize, write_fixture, exit_code_for)
from ps_ontology import DEFAULT_PI, DEFAULT_SIGMA, PsConfig
from reasoner import DEFAULT_MAX_ASSERTIONS, DEFAULT_MAX_SECONDS
from riskman_errors import ConfigError, ResourceLimitExceeded, RiskmanError
from vocabulary import DEFAULT_NAMESPACE

logger = logging.getLogger("riskman")


def _prefix(value: str) -> tuple:
    name, sep, namespace = value.partition("=")
    if not sep or not namespace:
        raise argparse.ArgumentTypeError(f"expected PFX=IRI, got '{value}'")
    return name, namespace


def _positive_int(value: str) -> int:
    number = int(value)
    if number < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return number


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for debug output")
    parser.add_argument("--namespace", default=DEFAULT_NAMESPACE,
                        help="RISKMAN vocabulary namespace")


def _add_ingestion(parser: argparse.ArgumentParser):
    parser.add_argument("inputs", nargs="+", type=Path, metavar="INPUT")
    parser.add_argument("--format", dest="input_format", default="auto",
                        choices=[f.value for f in InputFormat])
    parser.add_argument("--base", help="base IRI for relative IRIs")
    parser.add_argument("--pi", type=_positive_int, default=DEFAULT_PI)
    parser.add_argument("--sigma", type=_positive_int, default=DEFAULT_SIGMA)
    parser.add_argument("--no-ps", action="store_true",
                        help="do not merge the probability-severity ontology")
    parser.add_argument("--ontology-extra", action="append", default=[], type=Path, metavar="FILE")
    parser.add_argument("--prefix", action="append", default=[], type=_prefix, metavar="PFX=IRI")
    parser.add_argument("--assume-risk-sda", action="store_true",
                        help="label every SDA that is not an AssuranceSDA as RiskSDA")
    parser.add_argument("--max-assertions", type=_positive_int, default=DEFAULT_MAX_ASSERTIONS)
    parser.add_argument("--max-seconds", type=float, default=DEFAULT_MAX_SECONDS)
    parser.add_argument("--workers", type=_positive_int, default=DEFAULT_WORKERS)
    parser.add_argument("--provenance", type=Path, metavar="FILE",
                        help="write the rule that derived each assertion (tab separated)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskman",
        description="Materialize and validate RISKMAN risk-management submissions")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate submissions and print a report")
    _add_common(p)
    _add_ingestion(p)
    p.add_argument("--shapes-extra", action="append", default=[], type=Path, metavar="FILE")
    p.add_argument("--emit-materialized", type=Path, metavar="FILE")
    p.add_argument("--report", dest="report_format", default="text",
                   choices=[f.value for f in ReportFormat])
    p.add_argument("--timing", action="store_true", help="include elapsed time in the report")
    p.add_argument("--output", type=Path, metavar="FILE", help="write the report to FILE")

    p = sub.add_parser("materialize", help="write the saturated closure")
    _add_common(p)
    _add_ingestion(p)
    p.add_argument("-o", "--output", type=Path, required=True, metavar="FILE")

    p = sub.add_parser("ps-gen", help="generate the probability-severity ontology")
    _add_common(p)
    p.add_argument("--pi", type=_positive_int, default=DEFAULT_PI)
    p.add_argument("--sigma", type=_positive_int, default=DEFAULT_SIGMA)
    p.add_argument("-o", "--output", type=Path, required=True, metavar="FILE")

    p = sub.add_parser("distill", help="extract RDFa triples from HTML as N-Triples")
    _add_common(p)
    p.add_argument("input", type=Path, metavar="INPUT.html")
    p.add_argument("--base", help="base IRI (defaults to the file's own IRI)")
    p.add_argument("-o", "--output", type=Path, required=True, metavar="FILE")

    p = sub.add_parser("fixture", help="write the infusion-pump example files")
    _add_common(p)
    p.add_argument("-o", "--output", type=Path, required=True, metavar="DIR")
    return parser


def setup_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(format="%(levelname)s: %(message)s", level=level, stream=sys.stderr)


def config_from_args(args: argparse.Namespace) -> PipelineConfig:
    prefixes: Dict[str, str] = dict(args.prefix)
    return PipelineConfig(
        inputs=list(args.inputs),
        input_format=InputFormat(args.input_format),
        ps=None if args.no_ps else PsConfig(args.pi, args.sigma),
        extra_ontologies=list(args.ontology_extra),
        extra_shapes=list(getattr(args, "shapes_extra", [])),
        prefix_map=prefixes,
        namespace=args.namespace,
        base=args.base,
        emit_materialized=getattr(args, "emit_materialized", None),
        provenance_path=args.provenance,
        report_format=ReportFormat(getattr(args, "report_format", "text")),
        include_timing=getattr(args, "timing", False),
        assume_risk_sda=args.assume_risk_sda,
        max_assertions=args.max_assertions,
        max_seconds=args.max_seconds,
        workers=args.workers,
    )


def _validate(args) -> int:
    pipeline = ValidationPipeline(config_from_args(args))
    report = pipeline.run()
    text = pipeline.render(report)
    if args.output:
        args.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    logger.info(f"Pipeline stats: {pipeline.get_stats()}")
    return int(exit_code_for(report))


def _materialize(args) -> int:
    result = run_materialize(config_from_args(args), args.output)
    print(f"Wrote {len(result.closure)} assertions to {args.output} "
          f"({result.stats.derived_assertions} derived, {len(result.clashes)} clash(es))")
    return int(ExitCode.INCONSISTENT if result.clashes else ExitCode.CONFORMS)


def _ps_gen(args) -> int:
    dsl_path, nt_path = ps_gen(PsConfig(args.pi, args.sigma), args.output, args.namespace)
    print(f"Wrote {dsl_path} and {nt_path}")
    return int(ExitCode.CONFORMS)


def _distill(args) -> int:
    doc = distill(args.input, args.output, args.base)
    print(f"Wrote {len(doc.triples)} triples to {args.output}")
    for warning in doc.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return int(ExitCode.CONFORMS)


def _fixture(args) -> int:
    for path in write_fixture(args.output, args.namespace):
        print(path)
    return int(ExitCode.CONFORMS)


COMMANDS = {
    "validate": _validate,
    "materialize": _materialize,
    "ps-gen": _ps_gen,
    "distill": _distill,
    "fixture": _fixture,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors and 0 for --help
        return int(e.code or 0)
    setup_logging(args.verbose)

    try:
        return COMMANDS[args.command](args)
    except ResourceLimitExceeded as e:
        print(f"riskman: resource limit exceeded: {e.message}", file=sys.stderr)
    except ConfigError as e:
        print(f"riskman: invalid configuration: {e.message}", file=sys.stderr)
    except RiskmanError as e:
        print(f"riskman: {e}", file=sys.stderr)
    return int(ExitCode.ERROR)


if __name__ == "__main__":
    sys.exit(main())
