"""Concrete-syntax parser for Jeopardy source files.

Definitions end with ``.``; case branches are introduced by ``;`` and use
``->``; constructor forms are bracketed ``[c t1 ... tn]``; pairs are
written ``(t1, t2)``, list cells ``t1 : t2`` and the empty list ``[]``;
comments run from ``--`` to end of line.  Natural-number literals stand
for their ``[zero]``/``[successor ...]`` encodings.  The wildcard ``_``
parses as a fresh reserved variable (printed back as ``_``).

Ascription ambiguities are resolved in favour of the type annotation: in
``case t : x of``, ``let p : x = ...`` and a parenthesised parameter
``f (p : x) = ...`` the name after ``:`` is a type; a cons pattern in
those positions needs its own parentheses.

Terms collapse to core pattern form whenever their parts are all
patterns, so ``(k, [successor n])`` parses as the pattern
``[pair k [successor n]]``.  Sugared nodes survive parsing only when a
non-pattern part forces them.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    Apply,
    Case,
    Con,
    ConApp,
    ConsTerm,
    DataDef,
    Direct,
    FunDef,
    FunctionRef,
    GeneralApply,
    Inverted,
    KEYWORDS,
    LetTerm,
    Pattern,
    PatternTerm,
    Program,
    Span,
    Term,
    TupleTerm,
    Value,
    Var,
)

_PUNCT = ("->", ".", ";", ",", "(", ")", "[", "]", "=", ":")
_MAX_DEPTH = 400


class ParseError(Exception):
    """Malformed input, with the offending span and what was expected."""

    def __init__(self, message: str, span: Span, expected: str | None = None):
        super().__init__(message)
        self.message = message
        self.span = span
        self.expected = expected


def line_col(source: str, offset: int) -> tuple[int, int]:
    """1-based line and column of a byte offset, for error display."""
    offset = max(0, min(offset, len(source)))
    line = source.count("\n", 0, offset) + 1
    column = offset - (source.rfind("\n", 0, offset) + 1) + 1
    return line, column


@dataclass(frozen=True)
class Token:
    kind: str  # 'name', 'number', 'wildcard', 'eof', a keyword, or a punct
    text: str
    start: int
    end: int

    @property
    def span(self) -> Span:
        return Span(self.start, self.end)


def _is_name_start(c: str) -> bool:
    return c.isalpha() and c.isascii()


def _is_name_char(c: str) -> bool:
    return (c.isalnum() and c.isascii()) or c == "_"


def tokenize(source: str) -> list[Token]:
    tokens: list[Token] = []
    i = 0
    n = len(source)
    while i < n:
        c = source[i]
        if c in " \t\r\n":
            i += 1
            continue
        if source.startswith("--", i):
            j = source.find("\n", i)
            i = n if j < 0 else j + 1
            continue
        if source.startswith("->", i):
            tokens.append(Token("->", "->", i, i + 2))
            i += 2
            continue
        if c in ".;,()[]=:":
            tokens.append(Token(c, c, i, i + 1))
            i += 1
            continue
        if c == "_":
            if i + 1 < n and _is_name_char(source[i + 1]):
                raise ParseError(
                    "identifiers must start with a letter",
                    Span(i, i + 1),
                )
            tokens.append(Token("wildcard", "_", i, i + 1))
            i += 1
            continue
        if c.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("number", source[i:j], i, j))
            i = j
            continue
        if _is_name_start(c):
            j = i
            while j < n and _is_name_char(source[j]):
                j += 1
            text = source[i:j]
            kind = text if text in KEYWORDS else "name"
            tokens.append(Token(kind, text, i, j))
            i = j
            continue
        raise ParseError(f"unexpected character {c!r}", Span(i, i + 1))
    tokens.append(Token("eof", "", n, n))
    return tokens


_ATOM_START = ("name", "number", "wildcard", "[", "(")


class _Parser:
    def __init__(self, source: str):
        self.source = source
        self.tokens = tokenize(source)
        self.pos = 0
        self.wildcards = 0
        self.depth = 0

    # -- token plumbing -----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        index = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[index]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def expect(self, kind: str, expected: str | None = None) -> Token:
        token = self.peek()
        if token.kind != kind:
            self.fail(f"expected {expected or kind!r}, found {token.text or 'end of input'!r}", token)
        return self.advance()

    def fail(self, message: str, token: Token | None = None) -> None:
        token = token or self.peek()
        raise ParseError(message, token.span)

    def fresh_wildcard(self, span: Span) -> Var:
        self.wildcards += 1
        return Var(f"_{self.wildcards}", span=span)

    def _enter(self) -> None:
        self.depth += 1
        if self.depth > _MAX_DEPTH:
            self.fail("nesting too deep")

    def _leave(self) -> None:
        self.depth -= 1

    # -- program ------------------------------------------------------------

    def parse_program(self) -> Program:
        definitions: list[DataDef | FunDef] = []
        main: FunctionRef | None = None
        while self.peek().kind != "eof":
            token = self.peek()
            if token.kind == "data":
                definitions.append(self.parse_data_def())
            elif token.kind == "main":
                if main is not None:
                    self.fail("duplicate main declaration", token)
                self.advance()
                main = self.parse_funref()
                self.expect(".", "'.' after main declaration")
            elif token.kind == "name":
                definitions.append(self.parse_fun_def())
            else:
                self.fail(
                    f"expected a definition, found {token.text or 'end of input'!r}",
                    token,
                )
        if main is None:
            self.fail("missing main declaration")
        return Program(tuple(definitions), main)

    def parse_data_def(self) -> DataDef:
        start = self.expect("data")
        type_name = self.expect("name", "a datatype name")
        self.expect("=")
        constructors: list[tuple[str, tuple[str, ...]]] = []
        while self.peek().kind == "[":
            self.advance()
            con_name = self.expect("name", "a constructor name")
            components: list[str] = []
            while self.peek().kind == "name":
                components.append(self.advance().text)
            self.expect("]")
            constructors.append((con_name.text, tuple(components)))
        if not constructors:
            self.fail("a data definition needs at least one constructor")
        end = self.expect(".", "'.' after data definition")
        return DataDef(type_name.text, tuple(constructors), Span(start.start, end.end))

    def parse_fun_def(self) -> FunDef:
        name = self.expect("name")
        parameter, parameter_type = self.parse_parameter()
        return_type: str | None = None
        if self.peek().kind == ":":
            self.advance()
            return_type = self.expect("name", "a type name").text
        self.expect("=", "'=' after function header")
        body = self.parse_term()
        end = self.expect(".", "'.' after function body")
        return FunDef(
            name.text,
            parameter,
            parameter_type,
            return_type,
            body,
            Span(name.start, end.end),
        )

    def parse_parameter(self) -> tuple[Pattern, str | None]:
        if self.peek().kind != "(":
            return self.parse_pattern_atom(), None
        start = self.advance()
        pattern = self.parse_pattern_atom()
        token = self.peek()
        if token.kind == ":":
            self.advance()
            type_name = self.expect("name", "a type name").text
            self.expect(")")
            return pattern, type_name
        if token.kind == ",":
            self.advance()
            second = self.parse_pattern()
            end = self.expect(")")
            return Con("pair", (pattern, second), span=Span(start.start, end.end)), None
        self.expect(")")
        return pattern, None

    def parse_funref(self) -> FunctionRef:
        token = self.peek()
        if token.kind == "name":
            self.advance()
            return Direct(token.text)
        if token.kind == "(":
            self.advance()
            self.expect("invert", "'invert'")
            inner = self.parse_funref()
            self.expect(")")
            return Inverted(inner)
        self.fail("expected a function reference", token)
        raise AssertionError  # unreachable

    # -- patterns -----------------------------------------------------------

    def parse_pattern(self) -> Pattern:
        # cons chains are right-associative: a : b : c = a : (b : c)
        self._enter()
        try:
            head = self.parse_pattern_atom()
            if self.peek().kind == ":":
                self.advance()
                tail = self.parse_pattern()
                span = Span(_pattern_start(head), _pattern_end(tail))
                return Con("cons", (head, tail), span=span)
            return head
        finally:
            self._leave()

    def parse_pattern_atom(self) -> Pattern:
        self._enter()
        try:
            token = self.peek()
            if token.kind == "name":
                self.advance()
                return Var(token.text, span=token.span)
            if token.kind == "wildcard":
                self.advance()
                return self.fresh_wildcard(token.span)
            if token.kind == "number":
                self.advance()
                return self._nat_pattern(int(token.text), token.span)
            if token.kind == "[":
                start = self.advance()
                if self.peek().kind == "]":
                    end = self.advance()
                    return Con("nil", (), span=Span(start.start, end.end))
                name = self.expect("name", "a constructor name")
                args: list[Pattern] = []
                while self.peek().kind != "]":
                    args.append(self.parse_pattern_atom())
                end = self.advance()
                return Con(name.text, tuple(args), span=Span(start.start, end.end))
            if token.kind == "(":
                start = self.advance()
                first = self.parse_pattern()
                if self.peek().kind == ",":
                    self.advance()
                    second = self.parse_pattern()
                    end = self.expect(")")
                    return Con("pair", (first, second), span=Span(start.start, end.end))
                self.expect(")")
                return first
            self.fail(f"expected a pattern, found {token.text or 'end of input'!r}", token)
            raise AssertionError  # unreachable
        finally:
            self._leave()

    def _nat_pattern(self, n: int, span: Span) -> Pattern:
        result: Pattern = Con("zero", (), span=span)
        for _ in range(n):
            result = Con("successor", (result,), span=span)
        return result

    # -- terms --------------------------------------------------------------

    def parse_term(self, scrutinee: bool = False) -> Term:
        self._enter()
        try:
            token = self.peek()
            if token.kind == "case":
                return self.parse_case()
            if token.kind == "let":
                return self.parse_let()
            items = [self.parse_app_or_atom()]
            while self.peek().kind == ":":
                if scrutinee and self.peek(1).kind == "name" and self.peek(2).kind == "of":
                    break  # the ':' belongs to the case ascription
                self.advance()
                items.append(self.parse_app_or_atom())
            return self._fold_cons(items)
        finally:
            self._leave()

    def _fold_cons(self, items: list[Term]) -> Term:
        result = items[-1]
        for item in reversed(items[:-1]):
            if isinstance(item, PatternTerm) and isinstance(result, PatternTerm):
                span = Span(
                    _pattern_start(item.pattern), _pattern_end(result.pattern)
                )
                result = PatternTerm(
                    Con("cons", (item.pattern, result.pattern), span=span), span=span
                )
            else:
                result = ConsTerm(item, result)
        return result

    def parse_case(self) -> Case:
        start = self.expect("case")
        scrutinee = self.parse_term(scrutinee=True)
        scrutinee_type: str | None = None
        if self.peek().kind == ":":
            self.advance()
            scrutinee_type = self.expect("name", "a type name").text
        self.expect("of", "'of'")
        branches: list[tuple[Pattern, Term]] = []
        if self.peek().kind == ";":
            self.advance()
        while True:
            pattern = self.parse_pattern()
            self.expect("->", "'->'")
            body = self.parse_term()
            branches.append((pattern, body))
            if self.peek().kind != ";":
                break
            self.advance()
        return Case(
            scrutinee,
            scrutinee_type,
            tuple(branches),
            span=Span(start.start, self.peek().start),
        )

    def parse_let(self) -> LetTerm:
        start = self.expect("let")
        pattern = self.parse_pattern_atom()
        type_name: str | None = None
        if self.peek().kind == ":":
            self.advance()
            type_name = self.expect("name", "a type name").text
        self.expect("=", "'=' in let binding")
        bound = self.parse_term()
        self.expect("in", "'in'")
        body = self.parse_term()
        return LetTerm(
            pattern, type_name, bound, body, span=Span(start.start, self.peek().start)
        )

    def parse_app_or_atom(self) -> Term:
        token = self.peek()
        if token.kind == "name" and self.peek(1).kind in _ATOM_START:
            self.advance()
            return self._application(Direct(token.text), token.span)
        if token.kind == "(" and self.peek(1).kind == "invert":
            self.advance()
            self.expect("invert")
            inner = self.parse_funref()
            self.expect(")")
            return self._application(Inverted(inner), token.span)
        return self.parse_atom_term()

    def _application(self, callee: FunctionRef, span: Span) -> Term:
        argument = self.parse_atom_term()
        if isinstance(argument, PatternTerm):
            return Apply(callee, argument.pattern, span=span)
        return GeneralApply(callee, argument, span=span)

    def parse_atom_term(self) -> Term:
        self._enter()
        try:
            token = self.peek()
            if token.kind == "name":
                self.advance()
                return PatternTerm(Var(token.text, span=token.span), span=token.span)
            if token.kind == "wildcard":
                self.advance()
                return PatternTerm(self.fresh_wildcard(token.span), span=token.span)
            if token.kind == "number":
                self.advance()
                pattern = self._nat_pattern(int(token.text), token.span)
                return PatternTerm(pattern, span=token.span)
            if token.kind == "[":
                return self.parse_bracket_term()
            if token.kind == "(":
                if self.peek(1).kind == "invert":
                    return self.parse_app_or_atom()
                start = self.advance()
                first = self.parse_term()
                if self.peek().kind == ",":
                    self.advance()
                    second = self.parse_term()
                    end = self.expect(")", "')' after pair")
                    return self._tuple(first, second, Span(start.start, end.end))
                self.expect(")")
                return first
            self.fail(f"expected a term, found {token.text or 'end of input'!r}", token)
            raise AssertionError  # unreachable
        finally:
            self._leave()

    def parse_bracket_term(self) -> Term:
        start = self.expect("[")
        if self.peek().kind == "]":
            end = self.advance()
            span = Span(start.start, end.end)
            return PatternTerm(Con("nil", (), span=span), span=span)
        name = self.expect("name", "a constructor name")
        args: list[Term] = []
        while self.peek().kind != "]":
            args.append(self.parse_atom_term())
        end = self.advance()
        span = Span(start.start, end.end)
        if all(isinstance(arg, PatternTerm) for arg in args):
            pattern = Con(name.text, tuple(arg.pattern for arg in args), span=span)
            return PatternTerm(pattern, span=span)
        return ConApp(name.text, tuple(args), span=span)

    def _tuple(self, first: Term, second: Term, span: Span) -> Term:
        if isinstance(first, PatternTerm) and isinstance(second, PatternTerm):
            pattern = Con("pair", (first.pattern, second.pattern), span=span)
            return PatternTerm(pattern, span=span)
        return TupleTerm(first, second, span=span)

    # -- values -------------------------------------------------------------

    def parse_value(self) -> Value:
        self._enter()
        try:
            token = self.peek()
            if token.kind == "number":
                self.advance()
                return self._nat_value(int(token.text))
            if token.kind == "[":
                self.advance()
                if self.peek().kind == "]":
                    self.advance()
                    return Value("nil")
                name = self.expect("name", "a constructor name")
                args: list[Value] = []
                while self.peek().kind != "]":
                    args.append(self.parse_value())
                self.advance()
                return Value(name.text, tuple(args))
            if token.kind == "(":
                self.advance()
                first = self.parse_value()
                self.expect(",", "',' in pair value")
                second = self.parse_value()
                self.expect(")")
                return Value("pair", (first, second))
            self.fail(f"expected a value, found {token.text or 'end of input'!r}", token)
            raise AssertionError  # unreachable
        finally:
            self._leave()

    def _nat_value(self, n: int) -> Value:
        result = Value("zero")
        for _ in range(n):
            result = Value("successor", (result,))
        return result


def _pattern_start(pattern: Pattern) -> int:
    return pattern.span.start if pattern.span else 0


def _pattern_end(pattern: Pattern) -> int:
    return pattern.span.end if pattern.span else 0


def parse(source: str) -> Program:
    """Parse a whole source file into a sugared program."""
    return _Parser(source).parse_program()


def parse_value(source: str) -> Value:
    """Parse a value literal: constructor syntax, a pair, or a numeral."""
    parser = _Parser(source)
    value = parser.parse_value()
    trailing = parser.peek()
    if trailing.kind != "eof":
        parser.fail(f"unexpected input after value: {trailing.text!r}", trailing)
    return value
