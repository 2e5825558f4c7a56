"""Abstract syntax for the Jeopardy invertible functional language.

Jeopardy is a first-order functional language with algebraic data types,
case discrimination, and explicit function inversion written
``(invert f)``.  This module defines the trees shared by every pipeline
stage:

* patterns and terms, in both sugared (as parsed) and core
  (post-desugaring) form,
* function references, wrapped in any number of inversion markers,
* data and function definitions, whole programs, and runtime values,
* ``validate``, the well-formedness check every downstream stage
  assumes has passed.

All nodes are frozen dataclasses, safe to share across threads once
built.  Source spans never participate in equality, so structural
comparison is layout-independent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

# Program points carry integer labels.  The two symbolic labels stand for
# the values supplied by whoever runs the program: its input when running
# forward, its output when running backward.  They appear only in
# analysis results, never on syntax nodes.
Label = Union[int, str]
INPUT: Label = "input"
OUTPUT: Label = "output"

# Reserved caller name for the top level (the entity that runs the
# program).  Not a parseable identifier, so it cannot clash with user
# function names.
TOP = "⊤"

# Constructors presumed by tuple and list sugar; injected into a program
# by the desugarer when used but not declared.
BUILTIN_CONSTRUCTORS: dict[str, int] = {"pair": 2, "cons": 2, "nil": 0}

KEYWORDS = frozenset({"data", "main", "case", "of", "invert", "let", "in"})

# Wildcards and other compiler-generated variables use names starting
# with an underscore, which the lexer refuses in user identifiers.
WILDCARD_PREFIX = "_"


def is_wildcard_name(name: str) -> bool:
    return name.startswith(WILDCARD_PREFIX)


def label_sort_key(label: Label) -> tuple[int, object]:
    """Total order over labels: integers first, then input/output."""
    if isinstance(label, int):
        return (0, label)
    return (1, label)


@dataclass(frozen=True)
class Span:
    """Byte-offset range into the source text."""

    start: int
    end: int


# ---------------------------------------------------------------------------
# Patterns


@dataclass(frozen=True)
class Var:
    """Pattern variable.  Wildcards are freshened to reserved ``_N`` names."""

    name: str
    label: int | None = None
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Con:
    """Constructor pattern ``[c p1 ... pn]``."""

    name: str
    args: tuple["Pattern", ...] = ()
    label: int | None = None
    span: Span | None = field(default=None, compare=False, repr=False)


Pattern = Union[Var, Con]


def pattern_nodes(pattern: Pattern) -> Iterator[Pattern]:
    """Pre-order traversal of a pattern tree."""
    yield pattern
    if isinstance(pattern, Con):
        for arg in pattern.args:
            yield from pattern_nodes(arg)


def pattern_variables(pattern: Pattern) -> Iterator[Var]:
    for node in pattern_nodes(pattern):
        if isinstance(node, Var):
            yield node


# ---------------------------------------------------------------------------
# Terms

# Core terms are the only forms that survive desugaring: a pattern used
# as a term, an application of a function reference to a plain pattern,
# and a case statement.


@dataclass(frozen=True)
class PatternTerm:
    """A pattern used as a term.

    Transparent for labeling: the term's program points are exactly the
    pattern's, so the wrapper itself carries no label.
    """

    pattern: Pattern
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Apply:
    """Core application ``g p`` of a function reference to a pattern."""

    callee: "FunctionRef"
    argument: Pattern
    label: int | None = None
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Case:
    """``case t : tau of ; p1 -> t1 ; ...`` with first-match semantics."""

    scrutinee: "Term"
    scrutinee_type: str | None
    branches: tuple[tuple[Pattern, "Term"], ...]
    label: int | None = None
    span: Span | None = field(default=None, compare=False, repr=False)


# Sugared terms, eliminated by the desugarer.


@dataclass(frozen=True)
class ConApp:
    """Constructor applied to at least one non-pattern argument."""

    name: str
    args: tuple["Term", ...]
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class TupleTerm:
    """Pair sugar ``(t1, t2)`` with a non-pattern component."""

    first: "Term"
    second: "Term"
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ConsTerm:
    """List sugar ``t1 : t2`` with a non-pattern component."""

    head: "Term"
    tail: "Term"
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class LetTerm:
    """``let p : tau = t in t'``."""

    pattern: Pattern
    type_name: str | None
    bound: "Term"
    body: "Term"
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class GeneralApply:
    """Application whose argument is an arbitrary term, not yet a pattern."""

    callee: "FunctionRef"
    argument: "Term"
    span: Span | None = field(default=None, compare=False, repr=False)


Term = Union[PatternTerm, Apply, Case, ConApp, TupleTerm, ConsTerm, LetTerm, GeneralApply]

CORE_TERM_TYPES = (PatternTerm, Apply, Case)
SUGAR_TERM_TYPES = (ConApp, TupleTerm, ConsTerm, LetTerm, GeneralApply)


def is_core_term(term: Term) -> bool:
    """True when no sugared node occurs anywhere in the term."""
    if isinstance(term, PatternTerm):
        return True
    if isinstance(term, Apply):
        return True
    if isinstance(term, Case):
        return is_core_term(term.scrutinee) and all(
            is_core_term(body) for _, body in term.branches
        )
    return False


# ---------------------------------------------------------------------------
# Function references


@dataclass(frozen=True)
class Direct:
    name: str


@dataclass(frozen=True)
class Inverted:
    inner: "FunctionRef"


FunctionRef = Union[Direct, Inverted]


def underlying_name(ref: FunctionRef) -> str:
    """Strip all inversion markers down to the defined function's name."""
    while isinstance(ref, Inverted):
        ref = ref.inner
    return ref.name


def invert_depth(ref: FunctionRef) -> int:
    depth = 0
    while isinstance(ref, Inverted):
        depth += 1
        ref = ref.inner
    return depth


def flip(ref: FunctionRef) -> FunctionRef:
    """The reference interpreted in the opposite direction.

    Unwraps one inversion marker when present, otherwise adds one.
    """
    if isinstance(ref, Inverted):
        return ref.inner
    return Inverted(ref)


# ---------------------------------------------------------------------------
# Values


@dataclass(frozen=True)
class Value:
    """Closed constructor tree ``[c v1 ... vn]``."""

    name: str
    args: tuple["Value", ...] = ()


# ---------------------------------------------------------------------------
# Definitions and programs


@dataclass(frozen=True)
class DataDef:
    """``data tau = [c1 tau...] ... [cn tau...].``"""

    type_name: str
    constructors: tuple[tuple[str, tuple[str, ...]], ...]
    span: Span | None = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class FunDef:
    """``f (p : tau_p) : tau_t = t.`` with both type ascriptions optional."""

    name: str
    parameter: Pattern
    parameter_type: str | None
    return_type: str | None
    body: Term
    span: Span | None = field(default=None, compare=False, repr=False)


Definition = Union[DataDef, FunDef]


@dataclass(frozen=True)
class Program:
    definitions: tuple[Definition, ...]
    main: FunctionRef


def fun_defs(program: Program) -> Iterator[FunDef]:
    for definition in program.definitions:
        if isinstance(definition, FunDef):
            yield definition


def data_defs(program: Program) -> Iterator[DataDef]:
    for definition in program.definitions:
        if isinstance(definition, DataDef):
            yield definition


# ---------------------------------------------------------------------------
# Validation


@dataclass(frozen=True)
class Diagnostic:
    """A single well-formedness violation with an optional location."""

    kind: str
    message: str
    span: Span | None = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class ConstructorInfo:
    """Declared shape of one constructor."""

    components: tuple[str | None, ...]
    data_type: str | None
    builtin: bool = False

    @property
    def arity(self) -> int:
        return len(self.components)


def constructor_table(program: Program) -> tuple[dict[str, ConstructorInfo], list[Diagnostic]]:
    """Constructor environment for a program.

    User declarations win over the built-in pair/cons/nil entries; a
    built-in entry is added only when the name is not declared at all.
    Duplicate declarations are reported, first declaration kept.
    """
    table: dict[str, ConstructorInfo] = {}
    diagnostics: list[Diagnostic] = []
    for definition in data_defs(program):
        for con_name, components in definition.constructors:
            if con_name in table:
                diagnostics.append(
                    Diagnostic(
                        "duplicate-constructor",
                        f"constructor '{con_name}' declared more than once",
                        definition.span,
                    )
                )
                continue
            table[con_name] = ConstructorInfo(tuple(components), definition.type_name)
    for con_name, arity in BUILTIN_CONSTRUCTORS.items():
        if con_name not in table:
            table[con_name] = ConstructorInfo((None,) * arity, None, builtin=True)
    return table, diagnostics


def _check_constructors(pattern: Pattern, table: dict[str, ConstructorInfo], out: list[Diagnostic]) -> None:
    if isinstance(pattern, Var):
        return
    info = table.get(pattern.name)
    if info is None:
        out.append(
            Diagnostic(
                "undefined-constructor",
                f"constructor '{pattern.name}' is not declared",
                pattern.span,
            )
        )
    elif info.arity != len(pattern.args):
        out.append(
            Diagnostic(
                "arity-mismatch",
                f"constructor '{pattern.name}' takes {info.arity} "
                f"argument(s), got {len(pattern.args)}",
                pattern.span,
            )
        )
    for arg in pattern.args:
        _check_constructors(arg, table, out)


def _check_binding_pattern(pattern: Pattern, table: dict[str, ConstructorInfo], out: list[Diagnostic]) -> None:
    """Checks for patterns that bind variables: linearity on top of shape."""
    _check_constructors(pattern, table, out)
    seen: set[str] = set()
    for var in pattern_variables(pattern):
        if var.name in seen:
            out.append(
                Diagnostic(
                    "nonlinear-pattern",
                    f"variable '{var.name}' bound twice in one pattern",
                    var.span,
                )
            )
        seen.add(var.name)


def _check_pattern_term(
    pattern: Pattern,
    table: dict[str, ConstructorInfo],
    bound: frozenset[str],
    out: list[Diagnostic],
) -> None:
    """A pattern in term position: constructors must exist, every
    variable must be in scope.  Repeated variables are fine here; a term
    may copy a binding."""
    _check_constructors(pattern, table, out)
    for var in pattern_variables(pattern):
        if var.name not in bound:
            out.append(
                Diagnostic(
                    "unbound-variable",
                    f"variable '{var.name}' is not in scope",
                    var.span,
                )
            )


def validate(program: Program) -> list[Diagnostic]:
    """All well-formedness violations of a (possibly sugared) program.

    Empty result means: function and constructor names are unique, every
    call target and constructor occurrence is declared with the right
    arity, binding patterns are left-linear, every term variable is in
    scope, and the main declaration names a defined function.  Type
    ascriptions are stored but never checked.
    """
    diagnostics: list[Diagnostic] = []
    table, table_diags = constructor_table(program)
    diagnostics.extend(table_diags)

    functions: dict[str, FunDef] = {}
    for definition in fun_defs(program):
        if definition.name in functions:
            diagnostics.append(
                Diagnostic(
                    "duplicate-function",
                    f"function '{definition.name}' defined more than once",
                    definition.span,
                )
            )
            continue
        functions[definition.name] = definition

    def check_ref(ref: FunctionRef, span: Span | None) -> None:
        name = underlying_name(ref)
        if name not in functions:
            diagnostics.append(
                Diagnostic(
                    "undefined-function",
                    f"function '{name}' is not defined",
                    span,
                )
            )

    def check_term(term: Term, bound: frozenset[str]) -> None:
        if isinstance(term, PatternTerm):
            _check_pattern_term(term.pattern, table, bound, diagnostics)
        elif isinstance(term, Apply):
            check_ref(term.callee, term.span)
            _check_pattern_term(term.argument, table, bound, diagnostics)
        elif isinstance(term, GeneralApply):
            check_ref(term.callee, term.span)
            check_term(term.argument, bound)
        elif isinstance(term, Case):
            check_term(term.scrutinee, bound)
            for pattern, body in term.branches:
                _check_binding_pattern(pattern, table, diagnostics)
                names = frozenset(v.name for v in pattern_variables(pattern))
                check_term(body, bound | names)
        elif isinstance(term, LetTerm):
            check_term(term.bound, bound)
            _check_binding_pattern(term.pattern, table, diagnostics)
            names = frozenset(v.name for v in pattern_variables(term.pattern))
            check_term(term.body, bound | names)
        elif isinstance(term, ConApp):
            info = table.get(term.name)
            if info is None:
                diagnostics.append(
                    Diagnostic(
                        "undefined-constructor",
                        f"constructor '{term.name}' is not declared",
                        term.span,
                    )
                )
            elif info.arity != len(term.args):
                diagnostics.append(
                    Diagnostic(
                        "arity-mismatch",
                        f"constructor '{term.name}' takes {info.arity} "
                        f"argument(s), got {len(term.args)}",
                        term.span,
                    )
                )
            for arg in term.args:
                check_term(arg, bound)
        elif isinstance(term, TupleTerm):
            check_term(term.first, bound)
            check_term(term.second, bound)
        elif isinstance(term, ConsTerm):
            check_term(term.head, bound)
            check_term(term.tail, bound)
        else:  # pragma: no cover - exhaustive over Term
            raise TypeError(f"unknown term node: {term!r}")

    for definition in fun_defs(program):
        if definition.name in functions and functions[definition.name] is not definition:
            continue  # duplicate, already reported
        _check_binding_pattern(definition.parameter, table, diagnostics)
        bound = frozenset(v.name for v in pattern_variables(definition.parameter))
        check_term(definition.body, bound)

    check_ref(program.main, None)
    return diagnostics


def validate_value(value: Value, table: dict[str, ConstructorInfo]) -> list[Diagnostic]:
    """Check a runtime value against a program's constructor table."""
    diagnostics: list[Diagnostic] = []

    def walk(v: Value) -> None:
        info = table.get(v.name)
        if info is None:
            diagnostics.append(
                Diagnostic(
                    "undefined-constructor",
                    f"constructor '{v.name}' is not declared",
                )
            )
        elif info.arity != len(v.args):
            diagnostics.append(
                Diagnostic(
                    "arity-mismatch",
                    f"constructor '{v.name}' takes {info.arity} "
                    f"argument(s), got {len(v.args)}",
                )
            )
        for arg in v.args:
            walk(arg)

    walk(value)
    return diagnostics
