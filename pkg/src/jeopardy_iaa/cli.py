"""Command-line interface.

    jeopardy-iaa parse    FILE
    jeopardy-iaa desugar  FILE
    jeopardy-iaa label    FILE
    jeopardy-iaa analyze  FILE [--format text|json] [--show-labels]
    jeopardy-iaa run      FILE INPUT [--trace] [--max-calls N]

Exit codes: 0 success, 1 language-level diagnostics, 2 I/O errors,
3 runtime errors.  Every command validates the program before running
any later stage.  JSON output is deterministic: the same input file
always produces identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .analysis import CallConfiguration, Hint, configurations, symmetry_hints
from .desugar import DesugarError, desugar_program
from .evaluator import DEFAULT_MAX_CALLS, EvalError, run_main
from .labeler import LabeledProgram, annotate
from .parser import ParseError, line_col, parse, parse_value
from .printer import pretty_program, pretty_value
from .syntax import (
    Diagnostic,
    Program,
    constructor_table,
    invert_depth,
    label_sort_key,
    validate,
    validate_value,
)

EXIT_OK = 0
EXIT_DIAGNOSTICS = 1
EXIT_IO = 2
EXIT_RUNTIME = 3


class _CommandError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code
        self.message = message


def _read_source(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as error:
        raise _CommandError(EXIT_IO, f"cannot read {path}: {error.strerror or error}") from None


def _parse_and_validate(path: str) -> tuple[str, Program]:
    source = _read_source(path)
    try:
        program = parse(source)
    except ParseError as error:
        line, column = line_col(source, error.span.start)
        raise _CommandError(
            EXIT_DIAGNOSTICS, f"{path}:{line}:{column}: parse error: {error.message}"
        ) from None
    diagnostics = validate(program)
    if diagnostics:
        raise _CommandError(
            EXIT_DIAGNOSTICS, "\n".join(_format_diagnostic(path, source, d) for d in diagnostics)
        )
    return source, program


def _format_diagnostic(path: str, source: str, diagnostic: Diagnostic) -> str:
    if diagnostic.span is not None:
        line, column = line_col(source, diagnostic.span.start)
        return f"{path}:{line}:{column}: {diagnostic}"
    return f"{path}: {diagnostic}"


def _core(path: str) -> LabeledProgram:
    _, program = _parse_and_validate(path)
    try:
        core = desugar_program(program)
    except DesugarError as error:
        raise _CommandError(EXIT_DIAGNOSTICS, f"{path}: desugar error: {error}") from None
    return annotate(core)


def _cmd_parse(args: argparse.Namespace) -> int:
    _, program = _parse_and_validate(args.file)
    print(pretty_program(program), end="")
    return EXIT_OK


def _cmd_desugar(args: argparse.Namespace) -> int:
    labeled = _core(args.file)
    print(pretty_program(labeled.program), end="")
    return EXIT_OK


def _cmd_label(args: argparse.Namespace) -> int:
    labeled = _core(args.file)
    print(pretty_program(labeled.program, labels=True), end="")
    return EXIT_OK


def _labels_json(value) -> list:
    return sorted(value, key=label_sort_key)


def _configuration_row(config: CallConfiguration) -> dict:
    return {
        "caller": config.caller,
        "callee": config.callee_name,
        "inverted": invert_depth(config.callee) % 2 == 1,
        "direction": config.direction.value,
        "argument_labels": _labels_json(config.argument_labels),
        "implicit_labels": _labels_json(config.implicit_labels),
    }


def _hint_row(hint: Hint) -> dict:
    return {
        "function": hint.function,
        "call_label": hint.call_label,
        "witness_labels": list(hint.witness_labels),
    }


def analysis_report(labeled: LabeledProgram) -> dict:
    """The analyze command's payload: configurations, hints, label index."""
    configs = sorted(configurations(labeled), key=CallConfiguration.sort_key)
    hints = symmetry_hints(labeled, frozenset(configs))
    return {
        "configurations": [_configuration_row(c) for c in configs],
        "hints": [_hint_row(h) for h in hints],
        "labels": {
            str(label): {"function": info.function, "kind": info.kind}
            for label, info in sorted(labeled.index.items())
        },
    }


def _cmd_analyze(args: argparse.Namespace) -> int:
    labeled = _core(args.file)
    if args.show_labels:
        print(pretty_program(labeled.program, labels=True))
    report = analysis_report(labeled)
    if args.format == "json":
        print(json.dumps(report, ensure_ascii=False, sort_keys=True, indent=2))
        return EXIT_OK
    for row in report["configurations"]:
        callee = row["callee"] if not row["inverted"] else f"(invert {row['callee']})"
        arguments = ", ".join(str(l) for l in row["argument_labels"])
        implicits = ", ".join(str(l) for l in row["implicit_labels"])
        print(
            f"{row['caller']} -> {callee} [{row['direction']}] "
            f"A={{{arguments}}} I={{{implicits}}}"
        )
    if report["hints"]:
        print()
        print("hints:")
        for hint in report["hints"]:
            witnesses = ", ".join(str(l) for l in hint["witness_labels"])
            print(
                f"  {hint['function']} call@{hint['call_label']}: "
                f"branching argument available in both directions "
                f"(program points {{{witnesses}}})"
            )
    return EXIT_OK


def _cmd_run(args: argparse.Namespace) -> int:
    labeled = _core(args.file)
    try:
        value = parse_value(args.input)
    except ParseError as error:
        raise _CommandError(
            EXIT_DIAGNOSTICS, f"invalid input value: {error.message}"
        ) from None
    table, _ = constructor_table(labeled.program)
    diagnostics = validate_value(value, table)
    if diagnostics:
        raise _CommandError(
            EXIT_DIAGNOSTICS, "\n".join(f"input value: {d}" for d in diagnostics)
        )
    try:
        result, trace = run_main(labeled, value, max_calls=args.max_calls)
    except EvalError as error:
        raise _CommandError(
            EXIT_RUNTIME, f"runtime error: {error.kind} at {error.label}: {error.message}"
        ) from None
    if args.trace:
        for event in trace:
            print(
                f"call {event.caller} -> {event.callee} @ {event.application_label}: "
                f"{pretty_value(event.argument)}"
            )
    print(pretty_value(result))
    return EXIT_OK


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jeopardy-iaa",
        description="Front end and available-implicit-arguments analyzer for Jeopardy programs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_parse = sub.add_parser("parse", help="parse and validate, print the program back")
    p_parse.add_argument("file")
    p_parse.set_defaults(handler=_cmd_parse)

    p_desugar = sub.add_parser("desugar", help="print the core (sugar-free) program")
    p_desugar.add_argument("file")
    p_desugar.set_defaults(handler=_cmd_desugar)

    p_label = sub.add_parser("label", help="print the core program with {-n-} point markers")
    p_label.add_argument("file")
    p_label.set_defaults(handler=_cmd_label)

    p_analyze = sub.add_parser("analyze", help="compute reachable call configurations")
    p_analyze.add_argument("file")
    p_analyze.add_argument("--format", choices=("text", "json"), default="text")
    p_analyze.add_argument(
        "--show-labels",
        action="store_true",
        help="print the labeled program before the report",
    )
    p_analyze.set_defaults(handler=_cmd_analyze)

    p_run = sub.add_parser("run", help="run the main function on a value")
    p_run.add_argument("file")
    p_run.add_argument("input", help="argument value, e.g. '[successor [zero]]' or 3")
    p_run.add_argument("--trace", action="store_true", help="print every call")
    p_run.add_argument("--max-calls", type=int, default=DEFAULT_MAX_CALLS)
    p_run.set_defaults(handler=_cmd_run)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    try:
        return args.handler(args)
    except _CommandError as error:
        print(error.message, file=sys.stderr)
        return error.code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
