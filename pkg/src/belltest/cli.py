"""Command line entry point.

    belltest vertices|facets|test --class A,B,I --pairs a:b,... [--data FILE]
             [--slack R] [--cap N] [--memory-bound BYTES]
             [--format json|text] [--out PATH]

Exit codes: 0 success (test: local), 1 nonlocal, 2 input error,
3 capacity exceeded, 4 verification failed (facet listing or an internal
certificate check).
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from fractions import Fraction

from .dd import DEFAULT_MEMORY_BOUND
from .errors import BellTestError, CapacityError, InternalError
from .formats import (
    DataFormatError,
    facets_artifact,
    load_data,
    render,
    verdict_artifact,
    vertices_artifact,
)
from .geometry import facet_enumeration, verify_h_representation
from .locality import test_locality
from .model import ExperimentClass, SettingsSelection, parse_rational
from .strategies import DEFAULT_ENUMERATION_CAP, enumerate_vertices

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_NONLOCAL = 1
EXIT_INPUT = 2
EXIT_CAPACITY = 3
EXIT_UNVERIFIED = 4

# facet counts published for particular setups, checked when they come up
REFERENCE_FACET_COUNTS = {
    ((2, 2, 2), ((0, 0), (0, 1), (1, 1))): 48,
}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    mode: str
    exp_class: ExperimentClass | None
    pairs: tuple[tuple[int, int], ...] | None
    data: str | None = None
    slack: Fraction = Fraction(0)
    cap: int = DEFAULT_ENUMERATION_CAP
    memory_bound: int = DEFAULT_MEMORY_BOUND
    out: str | None = None
    fmt: str = "text"

    def selection(self) -> SettingsSelection:
        return SettingsSelection(self.exp_class, self.pairs)


def parse_class(text: str) -> ExperimentClass:
    try:
        parts = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"--class expects three integers A,B,I, got {text!r}") from None
    if len(parts) != 3:
        raise UsageError(f"--class expects three integers A,B,I, got {text!r}")
    try:
        return ExperimentClass(*parts)
    except ValueError as exc:
        raise UsageError(f"--class {text}: {exc}") from None


def parse_pairs(text: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for item in text.split(","):
        try:
            alpha, beta = item.split(":")
            pairs.append((int(alpha), int(beta)))
        except ValueError:
            raise UsageError(f"--pairs expects a:b,... got {item!r}") from None
    return tuple(pairs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="belltest",
        description="Local polytopes and locality tests for two-party Bell experiments.",
    )
    parser.add_argument("mode", choices=["vertices", "facets", "test"])
    parser.add_argument("--class", dest="exp_class", metavar="A,B,I",
                        help="detectors in A, detectors in B, settings per side")
    parser.add_argument("--pairs", metavar="a:b,...", help="setting pairs run, in order")
    parser.add_argument("--data", metavar="FILE", help="counts or probabilities (test mode)")
    parser.add_argument("--slack", default="0", help="L-infinity tolerance, exact (e.g. 1/100)")
    parser.add_argument("--cap", type=int, default=DEFAULT_ENUMERATION_CAP,
                        help="maximum number of deterministic strategies to enumerate")
    parser.add_argument("--memory-bound", type=int, default=DEFAULT_MEMORY_BOUND,
                        help="working-set bound for facet enumeration, in bytes")
    parser.add_argument("--format", dest="fmt", choices=["json", "text"], default="text")
    parser.add_argument("--out", metavar="PATH", help="write the artifact here instead of stdout")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def config_from_args(args) -> RunConfig:
    exp_class = parse_class(args.exp_class) if args.exp_class else None
    pairs = parse_pairs(args.pairs) if args.pairs else None
    if args.mode != "test" and (exp_class is None or pairs is None):
        raise UsageError(f"{args.mode} needs --class and --pairs")
    if args.mode == "test" and not args.data:
        raise UsageError("test needs --data FILE")
    try:
        slack = parse_rational(args.slack)
    except ValueError as exc:
        raise UsageError(f"--slack: {exc}") from None
    if slack < 0:
        raise UsageError("--slack must be nonnegative")
    if args.cap < 1 or args.memory_bound < 1:
        raise UsageError("caps must be positive")
    if exp_class is not None and pairs is not None:
        try:
            SettingsSelection(exp_class, pairs)
        except ValueError as exc:
            raise UsageError(f"--pairs: {exc}") from None
    return RunConfig(args.mode, exp_class, pairs, args.data, slack, args.cap,
                     args.memory_bound, args.out, args.fmt)


def _emit(doc: dict, config: RunConfig, stdout):
    text = render(doc, config.fmt)
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        print(doc.get("summary") or doc.get("verdict"), file=stdout)
    else:
        stdout.write(text)


def cmd_vertices(config: RunConfig, stdout=sys.stdout) -> int:
    vs = enumerate_vertices(config.selection(), cap=config.cap)
    _emit(vertices_artifact(vs), config, stdout)
    return EXIT_OK


def cmd_facets(config: RunConfig, stdout=sys.stdout) -> int:
    sel = config.selection()
    vs = enumerate_vertices(sel, cap=config.cap)
    hrep = facet_enumeration(vs.vertices, memory_bound=config.memory_bound)
    report = verify_h_representation(vs.vertices, hrep, memory_bound=config.memory_bound)
    reference = REFERENCE_FACET_COUNTS.get((sel.exp_class.as_tuple(), sel.pairs))
    _emit(facets_artifact(sel, hrep, report, reference), config, stdout)
    return EXIT_OK if report.passed else EXIT_UNVERIFIED


def cmd_test(config: RunConfig, stdout=sys.stdout) -> int:
    data = load_data(config.data)
    if config.exp_class is not None and config.exp_class != data.exp_class:
        raise DataFormatError(f"data file is for class {data.exp_class}, --class says {config.exp_class}")
    selection = SettingsSelection(data.exp_class, config.pairs) if config.pairs else None
    table = data.table(selection)
    verdict = test_locality(table, config.slack, cap=config.cap)
    _emit(verdict_artifact(table, verdict, config.slack), config, stdout)
    return EXIT_OK if verdict.is_local else EXIT_NONLOCAL


COMMANDS = {"vertices": cmd_vertices, "facets": cmd_facets, "test": cmd_test}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        config = config_from_args(args)
        return COMMANDS[config.mode](config, stdout)
    except CapacityError as exc:
        print(f"belltest: capacity exceeded: {exc}", file=stderr)
        return EXIT_CAPACITY
    except (UsageError, DataFormatError, OSError) as exc:
        print(f"belltest: {exc}", file=stderr)
        return EXIT_INPUT
    except InternalError as exc:
        print(f"belltest: internal error, result withheld: {exc}", file=stderr)
        return EXIT_UNVERIFIED
    except BellTestError as exc:
        print(f"belltest: {exc}", file=stderr)
        return EXIT_INPUT


def main_exit():
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
