#!/usr/bin/env python3
"""
tpdilog CLI - Generates totally positive matrices, applies the involutions and
transformations, and verifies the dilogarithm identities.
"""

import argparse
import json
import logging
import os
import random
import sys
import time
from dataclasses import replace
from fractions import Fraction
from typing import List, Optional, Sequence, Union

from dotenv import load_dotenv

from .combiner import ReportCombiner
from .core import (
    JacobiCoords,
    SquareMatrix,
    TPDilogError,
    jacobi_to_matrix,
    matrix_to_jacobi,
    require_totally_positive,
    reverse_coords,
)
from .identities import IdentityReport, S3Word, merge_reports, s3_coords
from .involutions import bar, check_g, flag_relabel_mismatches, hat_g, jacobi_dprime, jacobi_prime
from .suites import RunConfig, SuiteFactory
from .suites.exact import sample_index_sets
from .tetra import TransformKind, apply_transform, lex_composition
from .utils.jsonio import (
    coords_to_document,
    document_to_object,
    matrix_to_document,
    read_document,
    write_document,
)
from .utils.sampling import random_coords

logger = logging.getLogger(__name__)

EXIT_PASS = 0
EXIT_FAILURE = 1
EXIT_INPUT_ERROR = 2

COORD_OPS = ("prime", "dprime", "bar", "l", "r", "lex-l", "lex-r", "s3", "reverse")
B_OPS = ("check-g", "hat-g")
RELATIONS = ("check-g", "hat-g", "prime", "dprime", "bar")


# ----------------------------
# Config
# ----------------------------
def get_config():
    load_dotenv()
    return {
        "THREADS": int(os.environ.get("TPDILOG_THREADS", "4")),
        "PRECISION_BITS": int(os.environ.get("TPDILOG_PRECISION_BITS", "128")),
        "COORD_MAX": int(os.environ.get("TPDILOG_COORD_MAX", "10")),
        "OUTPUT_DIR": os.environ.get("TPDILOG_OUTPUT_DIR", "reports"),
        "LOG_LEVEL": os.environ.get("TPDILOG_LOG_LEVEL", "INFO"),
    }


def setup_logging(level: Union[int, str] = logging.INFO) -> None:
    """Log to stderr so JSON on stdout stays byte-stable."""
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(levelname)s - %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
        stream=sys.stderr,
        force=True,
    )


def build_run_config(args: argparse.Namespace, config: dict) -> RunConfig:
    """Flags override the environment."""
    return RunConfig(
        command=args.command,
        n=getattr(args, "n", 4),
        trials=getattr(args, "trials", 1),
        seed=getattr(args, "seed", 0),
        precision_bits=args.precision_bits if getattr(args, "precision_bits", None) is not None else config["PRECISION_BITS"],
        tol=getattr(args, "tol", None),
        coord_max=args.coord_max if getattr(args, "coord_max", None) is not None else config["COORD_MAX"],
        output=getattr(args, "out", None),
        suite=getattr(args, "suite", "all"),
        threads=config["THREADS"],
        sabotage=getattr(args, "sabotage", False),
    )


# ----------------------------
# Argument parsing
# ----------------------------
def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _triple(text: str):
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"triple must look like 1,2,3, got {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"triple must have three entries, got {text!r}")
    return parts


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, default=4, help="matrix dimension")
    parser.add_argument("--seed", type=int, default=0, help="campaign seed")
    parser.add_argument("--coord-max", type=int, default=None, help="coordinates are p/q with 1 <= p, q <= K")
    parser.add_argument("--out", default=None, help="output path ('-' or omitted: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tpdilog", description="Totally positive matrices and dilogarithm identities")
    parser.add_argument("--verbose", "-v", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="random Jacobi coordinates and their matrix")
    _add_common(gen)

    verify = sub.add_parser("verify", help="run verification suites")
    _add_common(verify)
    verify.add_argument("--trials", type=int, default=1)
    verify.add_argument("--precision-bits", type=int, default=None)
    verify.add_argument("--tol", type=_rational, default=None, help="absolute tolerance (default 2^-(bits/2))")
    verify.add_argument("--suite", default="all", help=f"one of {', '.join(SuiteFactory().selectors)}")
    verify.add_argument("--with-timing", action="store_true", help="include elapsed seconds in the report")
    verify.add_argument("--markdown", default=None, help="also write a markdown digest")
    verify.add_argument("--sabotage", action="store_true", help=argparse.SUPPRESS)

    transform = sub.add_parser("transform", help="apply an involution or transformation")
    transform.add_argument("op", choices=COORD_OPS + B_OPS)
    transform.add_argument("--input", required=True, help="coords or matrix JSON ('-' for stdin)")
    transform.add_argument("--triple", type=_triple, default=None, help="a,b,c for l and r")
    transform.add_argument("--word", default=None, help="S3 word for s3, e.g. s1s2")
    transform.add_argument("--out", default=None)

    check = sub.add_parser("assert", help="check the relation between a transform's input and output")
    check.add_argument("--relation", required=True, choices=RELATIONS)
    check.add_argument("--input", required=True)
    check.add_argument("--output", required=True)
    check.add_argument("--seed", type=int, default=0, help="seed for sampled index sets when n > 5")

    merge = sub.add_parser("report-merge", help="merge report files")
    merge.add_argument("files", nargs="+")
    merge.add_argument("--out", default=None)
    merge.add_argument("--markdown", default=None)
    merge.add_argument("--html", default=None)
    return parser


# ----------------------------
# I/O helpers
# ----------------------------
def load_input(path: str) -> Union[JacobiCoords, SquareMatrix]:
    if path == "-":
        document = json.loads(sys.stdin.read())
    else:
        document = read_document(path)
    return document_to_object(document)


def emit(document: object, out: Optional[str]) -> None:
    text = write_document(document, out)
    if out is None or out == "-":
        sys.stdout.write(text)


def as_coords(value: Union[JacobiCoords, SquareMatrix]) -> JacobiCoords:
    if isinstance(value, JacobiCoords):
        return value
    require_totally_positive(value)
    return matrix_to_jacobi(value)


def as_matrix(value: Union[JacobiCoords, SquareMatrix]) -> SquareMatrix:
    return jacobi_to_matrix(value) if isinstance(value, JacobiCoords) else value


# ----------------------------
# Commands
# ----------------------------
def cmd_gen(config: RunConfig) -> int:
    coords = random_coords(config.n, random.Random(config.seed), config.coord_max)
    document = {
        "seed": config.seed,
        "coords": coords_to_document(coords),
        "matrix": matrix_to_document(jacobi_to_matrix(coords)),
    }
    emit(document, config.output)
    return EXIT_PASS


def run_verification(config: RunConfig) -> IdentityReport:
    suites = SuiteFactory().get_suites(config.suite, config.n)
    start = time.perf_counter()
    reports = [suite.run(config) for suite in suites]
    elapsed = time.perf_counter() - start
    report = replace(merge_reports(reports), trials=config.trials, seed=config.seed, elapsed=elapsed)
    logger.info(f"Verified {len(report.results)} identities in {elapsed:.1f}s: {len(report.failures)} failing")
    return report


def cmd_verify(config: RunConfig, with_timing: bool = False, markdown_path: Optional[str] = None, output_dir: str = "reports") -> int:
    report = run_verification(config)
    emit(report.to_document(with_timing=with_timing), config.output)
    if markdown_path:
        ReportCombiner(output_dir).write_markdown(report if with_timing else replace(report, elapsed=None), markdown_path)
    return EXIT_PASS if report.passed else EXIT_FAILURE


def apply_op(value: Union[JacobiCoords, SquareMatrix], op: str, triple=None, word: Optional[str] = None):
    """Result of a transform; coordinate ops keep the kind of document they were given."""
    if op in B_OPS:
        G = as_matrix(value)
        return check_g(G) if op == "check-g" else hat_g(G)

    coords = as_coords(value)
    if op == "prime":
        result = jacobi_prime(coords)
    elif op == "dprime":
        result = jacobi_dprime(coords)
    elif op == "bar":
        result = bar(coords)
    elif op == "reverse":
        result = reverse_coords(coords)
    elif op in ("l", "r"):
        if triple is None:
            raise ValueError(f"transform {op} needs --triple a,b,c")
        result = apply_transform(coords, TransformKind(op.upper()), triple)
    elif op in ("lex-l", "lex-r"):
        result = lex_composition(coords, TransformKind(op[-1].upper()))
    elif op == "s3":
        if word is None:
            raise ValueError("transform s3 needs --word, e.g. s1s2")
        result = s3_coords(coords, S3Word.parse(word))
    else:
        raise ValueError(f"unknown transform {op}")
    return result if isinstance(value, JacobiCoords) else jacobi_to_matrix(result)


def cmd_transform(op: str, input_path: str, out: Optional[str], triple=None, word: Optional[str] = None) -> int:
    result = apply_op(load_input(input_path), op, triple, word)
    document = coords_to_document(result) if isinstance(result, JacobiCoords) else matrix_to_document(result)
    emit(document, out)
    logger.info(f"Applied transform {op}")
    return EXIT_PASS


def relation_holds(relation: str, source, image, seed: int = 0) -> bool:
    """Exact check of `image = relation(source)` by its defining property."""
    if relation in B_OPS:
        G, H = as_matrix(source), as_matrix(image)
        if G.n != H.n:
            return False
        sets = sample_index_sets(G.n, random.Random(seed))
        side = "right" if relation == "check-g" else "upper"
        mismatches = flag_relabel_mismatches(G, H, side, sets)
        for I in mismatches[:5]:
            logger.warning(f"Flag minor relabeling fails at index set {I}")
        return not mismatches
    a, b = as_coords(source), as_coords(image)
    if relation == "prime":
        return jacobi_prime(a) == b
    if relation == "dprime":
        return jacobi_dprime(a) == b
    return bar(a) == b


def cmd_assert(relation: str, input_path: str, output_path: str, seed: int = 0) -> int:
    holds = relation_holds(relation, load_input(input_path), load_input(output_path), seed)
    emit({"relation": relation, "pass": holds}, None)
    if not holds:
        logger.warning(f"Relation {relation} does not hold between {input_path} and {output_path}")
    return EXIT_PASS if holds else EXIT_FAILURE


def cmd_report_merge(files: Sequence[str], out: Optional[str], markdown_path: Optional[str], html_path: Optional[str], output_dir: str = "reports") -> int:
    combiner = ReportCombiner(output_dir)
    report = combiner.combine(files)
    text = combiner.write_json(report, out)
    if out is None or out == "-":
        sys.stdout.write(text)
    if markdown_path:
        combiner.write_markdown(report, markdown_path)
    if html_path:
        combiner.write_html(report, html_path)
    return EXIT_PASS if report.passed else EXIT_FAILURE


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    try:
        config = get_config()
    except ValueError as e:
        setup_logging()
        logger.error(f"Bad environment setting: {e}")
        return EXIT_INPUT_ERROR
    setup_logging(logging.DEBUG if args.verbose else config["LOG_LEVEL"].upper())
    logger.info(f"Starting tpdilog {args.command}")

    try:
        if args.command == "gen":
            return cmd_gen(build_run_config(args, config))
        if args.command == "verify":
            return cmd_verify(build_run_config(args, config), args.with_timing, args.markdown, config["OUTPUT_DIR"])
        if args.command == "transform":
            return cmd_transform(args.op, args.input, args.out, args.triple, args.word)
        if args.command == "assert":
            return cmd_assert(args.relation, args.input, args.output, args.seed)
        return cmd_report_merge(args.files, args.out, args.markdown, args.html, config["OUTPUT_DIR"])
    except (TPDilogError, ValueError, OSError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
