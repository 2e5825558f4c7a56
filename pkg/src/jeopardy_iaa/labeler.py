"""Program-point labeling for core programs.

Every pattern and term node of a core program gets a unique integer
label, counting from 0 and never resetting: definitions in source
order, within a function the parameter pattern first and then the body,
each traversed pre-order with children left to right.  Labeling is a
pure function of the core tree, so two runs agree exactly.

A pattern used as a term contributes only its pattern's labels; the
wrapper is not a program point of its own.  Function references and
type ascriptions are not program points either.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .syntax import (
    Apply,
    Case,
    Con,
    FunDef,
    Pattern,
    PatternTerm,
    Program,
    Span,
    Term,
    Var,
)


@dataclass(frozen=True)
class LabelInfo:
    """What a label points at: enclosing function and node kind."""

    function: str
    kind: str  # 'variable' | 'constructor' | 'application' | 'case'
    span: Span | None = None


@dataclass(frozen=True)
class LabeledProgram:
    program: Program
    index: dict[int, LabelInfo]
    functions: dict[str, FunDef]

    @property
    def label_count(self) -> int:
        return len(self.index)


class _Labeler:
    def __init__(self) -> None:
        self.counter = 0
        self.index: dict[int, LabelInfo] = {}

    def _next(self, function: str, kind: str, span: Span | None) -> int:
        label = self.counter
        self.counter += 1
        self.index[label] = LabelInfo(function, kind, span)
        return label

    def pattern(self, p: Pattern, function: str) -> Pattern:
        if isinstance(p, Var):
            return replace(p, label=self._next(function, "variable", p.span))
        label = self._next(function, "constructor", p.span)
        args = tuple(self.pattern(arg, function) for arg in p.args)
        return replace(p, label=label, args=args)

    def term(self, t: Term, function: str) -> Term:
        if isinstance(t, PatternTerm):
            return replace(t, pattern=self.pattern(t.pattern, function))
        if isinstance(t, Apply):
            label = self._next(function, "application", t.span)
            return replace(t, label=label, argument=self.pattern(t.argument, function))
        if isinstance(t, Case):
            label = self._next(function, "case", t.span)
            scrutinee = self.term(t.scrutinee, function)
            branches = tuple(
                (self.pattern(p, function), self.term(b, function))
                for p, b in t.branches
            )
            return replace(t, label=label, scrutinee=scrutinee, branches=branches)
        raise ValueError(f"cannot label sugared term {t!r}; desugar first")


def annotate(program: Program) -> LabeledProgram:
    """Assign labels to every program point of a core program."""
    labeler = _Labeler()
    definitions = []
    functions: dict[str, FunDef] = {}
    for definition in program.definitions:
        if not isinstance(definition, FunDef):
            definitions.append(definition)
            continue
        parameter = labeler.pattern(definition.parameter, definition.name)
        body = labeler.term(definition.body, definition.name)
        labeled = replace(definition, parameter=parameter, body=body)
        definitions.append(labeled)
        functions[definition.name] = labeled
    labeled_program = Program(tuple(definitions), program.main)
    return LabeledProgram(labeled_program, labeler.index, functions)


def labels_of(node: Pattern | Term) -> frozenset[int]:
    """All labels on a node and its descendants.

    Requires a labeled tree; an unlabeled node is an error rather than
    silently contributing nothing.
    """
    out: set[int] = set()
    _collect(node, out)
    return frozenset(out)


def labels_of_many(*nodes: Pattern | Term) -> frozenset[int]:
    out: set[int] = set()
    for node in nodes:
        _collect(node, out)
    return frozenset(out)


def _collect(node: Pattern | Term, out: set[int]) -> None:
    if isinstance(node, PatternTerm):
        _collect(node.pattern, out)
        return
    if isinstance(node, (Var, Con)):
        if node.label is None:
            raise ValueError(f"unlabeled pattern node: {node!r}")
        out.add(node.label)
        if isinstance(node, Con):
            for arg in node.args:
                _collect(arg, out)
        return
    if isinstance(node, Apply):
        if node.label is None:
            raise ValueError(f"unlabeled application node: {node!r}")
        out.add(node.label)
        _collect(node.argument, out)
        return
    if isinstance(node, Case):
        if node.label is None:
            raise ValueError(f"unlabeled case node: {node!r}")
        out.add(node.label)
        _collect(node.scrutinee, out)
        for pattern, body in node.branches:
            _collect(pattern, out)
            _collect(body, out)
        return
    raise ValueError(f"cannot collect labels from sugared term {node!r}")


def body_root_label(term: Term) -> int:
    """The label of a term's root program point.

    For a pattern used as a term this is the pattern root's label, since
    the wrapper itself is transparent.
    """
    if isinstance(term, PatternTerm):
        root = term.pattern
        if root.label is None:
            raise ValueError(f"unlabeled pattern node: {root!r}")
        return root.label
    if isinstance(term, (Apply, Case)):
        if term.label is None:
            raise ValueError(f"unlabeled term node: {term!r}")
        return term.label
    raise ValueError(f"sugared term has no label: {term!r}")
