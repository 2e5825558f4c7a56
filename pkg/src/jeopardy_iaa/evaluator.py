"""Strict forward interpreter for labeled core programs.

Evaluation is call-by-value: an application instantiates its argument
pattern from the environment, records the call, and runs the callee's
body in a fresh environment.  Case branches are tried in source order
and the first match commits.  Backward execution is not implemented;
applying a reference whose direction is inverse is a runtime error.

Every run produces, besides its result, the ordered trace of calls it
performed (including the synthetic top-level call), which downstream
checks compare against the static analysis.  A configurable call budget
guards against divergence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import Direction, direction_of
from .labeler import LabeledProgram
from .syntax import (
    Apply,
    Case,
    INPUT,
    Label,
    Pattern,
    PatternTerm,
    TOP,
    Term,
    Value,
    Var,
    underlying_name,
)

DEFAULT_MAX_CALLS = 1_000_000


@dataclass(frozen=True)
class CallEvent:
    """One dynamic call: who called what, on which value, from where.

    The top-level call is recorded with the caller marker and the
    symbolic input label instead of an application program point.
    """

    caller: str
    callee: str
    argument: Value
    application_label: Label


class EvalError(Exception):
    """Runtime failure, carrying its kind and the offending program point."""

    def __init__(self, kind: str, label: Label | None, message: str):
        super().__init__(message)
        self.kind = kind
        self.label = label
        self.message = message


Environment = dict[str, Value]

_NO_MATCH = object()


def match_pattern(pattern: Pattern, value: Value) -> Environment | None:
    """Bind a left-linear pattern against a value, or report no match."""
    bindings: Environment = {}
    if _match(pattern, value, bindings):
        return bindings
    return None


def _match(pattern: Pattern, value: Value, bindings: Environment) -> bool:
    if isinstance(pattern, Var):
        bindings[pattern.name] = value
        return True
    if pattern.name != value.name or len(pattern.args) != len(value.args):
        return False
    return all(_match(p, v, bindings) for p, v in zip(pattern.args, value.args))


def instantiate(pattern: Pattern, env: Environment) -> Value:
    """Build the value a pattern denotes under an environment."""
    if isinstance(pattern, Var):
        try:
            return env[pattern.name]
        except KeyError:
            raise EvalError(
                "unbound-variable",
                pattern.label,
                f"variable '{pattern.name}' is not bound",
            ) from None
    return Value(pattern.name, tuple(instantiate(arg, env) for arg in pattern.args))


class _Evaluator:
    def __init__(self, program: LabeledProgram, max_calls: int):
        self.program = program
        self.max_calls = max_calls
        self.calls = 0
        self.trace: list[CallEvent] = []

    def apply(self, caller: str, term: Apply, env: Environment) -> Value:
        if direction_of(term.callee) is not Direction.DOWN:
            raise EvalError(
                "inverted-call",
                term.label,
                "backward execution is not supported",
            )
        argument = instantiate(term.argument, env)
        return self.call(caller, underlying_name(term.callee), argument, term.label)

    def call(self, caller: str, callee: str, argument: Value, label: Label | None) -> Value:
        self.calls += 1
        if self.calls > self.max_calls:
            raise EvalError(
                "call-budget-exceeded",
                label,
                f"more than {self.max_calls} calls; looping program?",
            )
        definition = self.program.functions[callee]
        self.trace.append(CallEvent(caller, callee, argument, label if label is not None else INPUT))
        bindings = match_pattern(definition.parameter, argument)
        if bindings is None:
            raise EvalError(
                "parameter-mismatch",
                label,
                f"argument does not match the parameter of '{callee}'",
            )
        return self.eval(callee, definition.body, bindings)

    def eval(self, function: str, term: Term, env: Environment) -> Value:
        if isinstance(term, PatternTerm):
            return instantiate(term.pattern, env)
        if isinstance(term, Apply):
            return self.apply(function, term, env)
        if isinstance(term, Case):
            scrutinee = self.eval(function, term.scrutinee, env)
            for pattern, body in term.branches:
                bindings = match_pattern(pattern, scrutinee)
                if bindings is not None:
                    return self.eval(function, body, env | bindings)
            raise EvalError(
                "no-branch-matched",
                term.label,
                f"no case branch matched value {scrutinee}",
            )
        raise EvalError("sugared-term", None, f"cannot evaluate sugared term {term!r}")


def eval_term(
    program: LabeledProgram,
    env: Environment,
    term: Term,
    function: str = TOP,
    max_calls: int = DEFAULT_MAX_CALLS,
) -> tuple[Value, list[CallEvent]]:
    """Evaluate one core term under an environment covering its free
    variables; returns the value and the calls performed."""
    evaluator = _Evaluator(program, max_calls)
    result = evaluator.eval(function, term, dict(env))
    return result, evaluator.trace


def run_main(
    program: LabeledProgram,
    argument: Value,
    max_calls: int = DEFAULT_MAX_CALLS,
) -> tuple[Value, list[CallEvent]]:
    """Call the declared main function on a value in the empty context.

    Returns the result and the complete ordered call trace.  Running an
    inverted main is refused, and runaway recursion is cut off by the
    call budget (or the host stack, surfaced as the same error kind).
    """
    main = program.program.main
    if direction_of(main) is not Direction.DOWN:
        raise EvalError("inverted-call", INPUT, "backward execution is not supported")
    evaluator = _Evaluator(program, max_calls)
    try:
        result = evaluator.call(TOP, underlying_name(main), argument, None)
    except RecursionError:
        raise EvalError(
            "call-budget-exceeded", INPUT, "evaluation exceeded the host stack"
        ) from None
    return result, evaluator.trace
