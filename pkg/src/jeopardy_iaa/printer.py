"""Pretty printer for Jeopardy programs, terms, patterns, and values.

Output re-parses to a structurally identical tree: pair constructors
print as ``(a, b)``, cons cells as ``(h : t)``, ``nil`` as ``[]``, and
compiler-generated wildcard variables as ``_``.  Cons cells and nested
case statements are always parenthesised, which keeps the printed form
unambiguous without tracking operator context.

With ``labels=True`` every labeled node is suffixed with a ``{-n-}``
marker.  That form is for human inspection of analysis reports and is
not meant to be parsed back.
"""

from __future__ import annotations

from .syntax import (
    Apply,
    Case,
    Con,
    ConApp,
    ConsTerm,
    DataDef,
    FunDef,
    FunctionRef,
    GeneralApply,
    Inverted,
    LetTerm,
    Pattern,
    PatternTerm,
    Program,
    Term,
    TupleTerm,
    Value,
    Var,
    is_wildcard_name,
)


def _lab(label: int | None, labels: bool) -> str:
    return f"{{-{label}-}}" if labels and label is not None else ""


def pretty_funref(ref: FunctionRef) -> str:
    if isinstance(ref, Inverted):
        return f"(invert {pretty_funref(ref.inner)})"
    return ref.name


def pretty_pattern(pattern: Pattern, labels: bool = False) -> str:
    if isinstance(pattern, Var):
        name = "_" if is_wildcard_name(pattern.name) and not labels else pattern.name
        return f"{name}{_lab(pattern.label, labels)}"
    suffix = _lab(pattern.label, labels)
    if pattern.name == "pair" and len(pattern.args) == 2:
        first = pretty_pattern(pattern.args[0], labels)
        second = pretty_pattern(pattern.args[1], labels)
        return f"({first}, {second}){suffix}"
    if pattern.name == "cons" and len(pattern.args) == 2:
        head = pretty_pattern(pattern.args[0], labels)
        tail = pretty_pattern(pattern.args[1], labels)
        return f"({head} : {tail}){suffix}"
    if pattern.name == "nil" and not pattern.args:
        return f"[]{suffix}"
    if not pattern.args:
        return f"[{pattern.name}]{suffix}"
    args = " ".join(pretty_pattern(arg, labels) for arg in pattern.args)
    return f"[{pattern.name} {args}]{suffix}"


def pretty_value(value: Value) -> str:
    if value.name == "pair" and len(value.args) == 2:
        return f"({pretty_value(value.args[0])}, {pretty_value(value.args[1])})"
    if value.name == "cons" and len(value.args) == 2:
        return f"({pretty_value(value.args[0])} : {pretty_value(value.args[1])})"
    if value.name == "nil" and not value.args:
        return "[]"
    if not value.args:
        return f"[{value.name}]"
    args = " ".join(pretty_value(arg) for arg in value.args)
    return f"[{value.name} {args}]"


def pretty_term(term: Term, labels: bool = False, indent: int = 0, atom: bool = False) -> str:
    if isinstance(term, PatternTerm):
        return pretty_pattern(term.pattern, labels)
    if isinstance(term, Apply):
        callee = f"{pretty_funref(term.callee)}{_lab(term.label, labels)}"
        text = f"{callee} {pretty_pattern(term.argument, labels)}"
        return f"({text})" if atom else text
    if isinstance(term, GeneralApply):
        argument = pretty_term(term.argument, labels, indent, atom=True)
        text = f"{pretty_funref(term.callee)} {argument}"
        return f"({text})" if atom else text
    if isinstance(term, Case):
        return _pretty_case(term, labels, indent, atom)
    if isinstance(term, LetTerm):
        ascription = f" : {term.type_name}" if term.type_name else ""
        bound = pretty_term(term.bound, labels, indent)
        body = pretty_term(term.body, labels, indent)
        text = f"let {pretty_pattern(term.pattern, labels)}{ascription} = {bound} in {body}"
        return f"({text})" if atom else text
    if isinstance(term, TupleTerm):
        first = pretty_term(term.first, labels, indent)
        second = pretty_term(term.second, labels, indent)
        return f"({first}, {second})"
    if isinstance(term, ConsTerm):
        head = pretty_term(term.head, labels, indent, atom=True)
        tail = pretty_term(term.tail, labels, indent, atom=True)
        return f"({head} : {tail})"
    if isinstance(term, ConApp):
        args = " ".join(pretty_term(arg, labels, indent, atom=True) for arg in term.args)
        return f"[{term.name} {args}]"
    raise TypeError(f"unknown term node: {term!r}")  # pragma: no cover


def _pretty_case(term: Case, labels: bool, indent: int, atom: bool) -> str:
    scrutinee = pretty_term(term.scrutinee, labels, indent, atom=isinstance(term.scrutinee, (Case, LetTerm)))
    ascription = f" : {term.scrutinee_type}" if term.scrutinee_type else ""
    pad = " " * (indent + 2)
    lines = [f"case{_lab(term.label, labels)} {scrutinee}{ascription} of"]
    for pattern, body in term.branches:
        rendered = pretty_term(body, labels, indent + 2, atom=isinstance(body, Case))
        lines.append(f"{pad}; {pretty_pattern(pattern, labels)} -> {rendered}")
    text = "\n".join(lines)
    if atom:
        return f"({text})"
    return text


def pretty_definition(definition: DataDef | FunDef, labels: bool = False) -> str:
    if isinstance(definition, DataDef):
        constructors = []
        for name, components in definition.constructors:
            inner = " ".join((name,) + components)
            constructors.append(f"[{inner}]")
        return f"data {definition.type_name} = {' '.join(constructors)}."
    parameter = pretty_pattern(definition.parameter, labels)
    if definition.parameter_type:
        parameter = f"({parameter} : {definition.parameter_type})"
    elif (
        isinstance(definition.parameter, Con)
        and definition.parameter.name == "cons"
        and len(definition.parameter.args) == 2
    ):
        # already printed as (h : t); the extra parens keep the colon
        # from reading as a parameter ascription
        parameter = f"({parameter})"
    header = f"{definition.name} {parameter}"
    if definition.return_type:
        header += f" : {definition.return_type}"
    if isinstance(definition.body, Case):
        body = pretty_term(definition.body, labels, indent=2)
        return f"{header} =\n  {body}."
    body = pretty_term(definition.body, labels)
    return f"{header} = {body}."


def pretty_program(program: Program, labels: bool = False) -> str:
    parts = [pretty_definition(d, labels) for d in program.definitions]
    parts.append(f"main {pretty_funref(program.main)}.")
    return "\n\n".join(parts) + "\n"
