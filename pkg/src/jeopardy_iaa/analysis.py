"""Available implicit arguments analysis over labeled core programs.

The analysis computes every call configuration reachable from the two
top-level entry points: running main forward on its input, and running
its inverse backward from its output.  A call configuration records

* the caller (a function name, or the top-level marker),
* the callee reference, possibly inversion-wrapped,
* the labels of the argument handed to the callee, and
* the labels of everything implicitly available at the call: values
  already in hand on the path that reaches the call site.

Reachability is a least fixed point, computed with a FIFO worklist over
exact-equality deduplicated configurations.  Stepping through a callee
strips the callee's own labels from the incoming availability, which is
what bounds the treatment of recursion to a single unrolling: a
recursive call can see implicit arguments from the previous incarnation
but cannot tell incarnations apart beyond that.

Walking a body in the conventional direction is direct: a pattern calls
nothing, an application yields one configuration, and a case passes the
scrutinee's and branch pattern's labels as extra availability into each
branch.  Walking against the conventional direction starts from the
result instead, so the walk returns pairs of (configurations, labels
known "from the future"): a result pattern makes its labels available,
an application flips the callee and consumes the callee's body root as
its argument, and a case analyzes branch bodies before the scrutinee.

Configurations carry a complete-lattice order (same caller, callee, and
argument labels; inclusion on implicit labels), exposed for clients and
property checks.  The fixed point itself keeps configurations per path
rather than joining them, preserving path-sensitive availability.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

from .labeler import LabeledProgram, body_root_label, labels_of, labels_of_many
from .printer import pretty_funref
from .syntax import (
    Apply,
    Case,
    FunDef,
    FunctionRef,
    INPUT,
    Inverted,
    OUTPUT,
    Pattern,
    PatternTerm,
    TOP,
    Term,
    Var,
    flip,
    invert_depth,
    label_sort_key,
    underlying_name,
)


class Direction(enum.Enum):
    DOWN = "down"
    UP = "up"


def opposite(direction: Direction) -> Direction:
    return Direction.UP if direction is Direction.DOWN else Direction.DOWN


def direction_of(ref: FunctionRef) -> Direction:
    """Conventional for a direct reference, flipped once per inversion."""
    if isinstance(ref, Inverted):
        return opposite(direction_of(ref.inner))
    return Direction.DOWN


class UndefinedCalleeError(Exception):
    """A configuration's callee has no definition; validation prevents this."""


LabelSet = frozenset  # of Label


@dataclass(frozen=True)
class CallConfiguration:
    """One reachable call: caller, callee, argument labels, implicit labels."""

    caller: str
    callee: FunctionRef
    argument_labels: LabelSet
    implicit_labels: LabelSet

    @property
    def direction(self) -> Direction:
        return direction_of(self.callee)

    @property
    def callee_name(self) -> str:
        return underlying_name(self.callee)

    def sort_key(self):
        # labels are mapped through their total-order key so that mixed
        # integer/symbolic label sets stay comparable
        return (
            self.caller,
            self.callee_name,
            invert_depth(self.callee),
            sorted(map(label_sort_key, self.argument_labels)),
            sorted(map(label_sort_key, self.implicit_labels)),
        )

    def __str__(self) -> str:
        args = ", ".join(str(l) for l in sorted(self.argument_labels, key=label_sort_key))
        imps = ", ".join(str(l) for l in sorted(self.implicit_labels, key=label_sort_key))
        return (
            f"({self.caller}, {pretty_funref(self.callee)}, "
            f"{{{args}}}, {{{imps}}})"
        )


ConfigurationSet = frozenset  # of CallConfiguration

_EMPTY: frozenset = frozenset()


def term_down(caller: str, implicit: LabelSet, term: Term) -> ConfigurationSet:
    """Configurations reachable from a term in the conventional direction.

    A pattern contains no application.  An application yields the single
    configuration for its call site; its direction is not stored, being
    recomputable from the callee reference.  A case contributes its
    scrutinee's configurations unchanged and each branch body's with the
    scrutinee's and branch pattern's labels added to the availability.
    """
    if isinstance(term, PatternTerm):
        return _EMPTY
    if isinstance(term, Apply):
        config = CallConfiguration(
            caller, term.callee, labels_of(term.argument), frozenset(implicit)
        )
        return frozenset((config,))
    if isinstance(term, Case):
        result = set(term_down(caller, implicit, term.scrutinee))
        scrutinee_labels = labels_of(term.scrutinee)
        for pattern, body in term.branches:
            branch_implicit = frozenset(implicit) | scrutinee_labels | labels_of(pattern)
            result |= term_down(caller, branch_implicit, body)
        return frozenset(result)
    raise ValueError(f"cannot analyze sugared term {term!r}")


UpResult = frozenset  # of (ConfigurationSet, LabelSet) pairs


def term_up(
    caller: str, implicit: LabelSet, term: Term, program: LabeledProgram
) -> UpResult:
    """Configurations and future-available labels for the inverse direction.

    Each element pairs the configurations reached on one inverse path
    through the term with the labels whose values are known once the
    term's result is known.
    """
    if isinstance(term, PatternTerm):
        return frozenset(((_EMPTY, frozenset(implicit) | labels_of(term.pattern)),))
    if isinstance(term, Apply):
        callee_def = _definition(program, term.callee)
        config = CallConfiguration(
            caller,
            flip(term.callee),
            frozenset((body_root_label(callee_def.body),)),
            frozenset(implicit),
        )
        available = (
            frozenset(implicit) | labels_of(term.argument) | {_own_label(term)}
        )
        return frozenset(((frozenset((config,)), available),))
    if isinstance(term, Case):
        results: set[tuple[ConfigurationSet, LabelSet]] = set()
        own = {_own_label(term)}
        for pattern, body in term.branches:
            for body_configs, body_available in term_up(caller, implicit, body, program):
                scrutinee_implicit = body_available | labels_of(pattern)
                for head_configs, head_available in term_up(
                    caller, scrutinee_implicit, term.scrutinee, program
                ):
                    results.add(
                        (body_configs | head_configs, frozenset(own) | head_available)
                    )
        return frozenset(results)
    raise ValueError(f"cannot analyze sugared term {term!r}")


def _own_label(term: Term) -> int:
    if term.label is None:
        raise ValueError(f"unlabeled term node: {term!r}")
    return term.label


def _definition(program: LabeledProgram, ref: FunctionRef) -> FunDef:
    name = underlying_name(ref)
    definition = program.functions.get(name)
    if definition is None:
        raise UndefinedCalleeError(f"function '{name}' is not defined")
    return definition


def call(config: CallConfiguration, program: LabeledProgram) -> ConfigurationSet:
    """All configurations reachable by performing one configured call.

    The availability entering the callee is the caller-side argument and
    implicit labels minus every label belonging to the callee itself;
    whatever the callee contributes on the path to an inner call site is
    re-accumulated by the body walk.
    """
    definition = _definition(program, config.callee)
    own_labels = labels_of_many(definition.parameter, definition.body)
    entering = (config.implicit_labels | config.argument_labels) - own_labels
    name = definition.name
    if config.direction is Direction.DOWN:
        return term_down(name, entering, definition.body)
    configs: set[CallConfiguration] = set()
    for reached, _available in term_up(name, entering, definition.body, program):
        configs |= reached
    return frozenset(configs)


def seed_configurations(program: LabeledProgram) -> tuple[CallConfiguration, CallConfiguration]:
    """The two top-level entry configurations: forward and backward."""
    main = program.program.main
    forward = CallConfiguration(TOP, main, frozenset((INPUT,)), _EMPTY)
    backward = CallConfiguration(TOP, Inverted(main), frozenset((OUTPUT,)), _EMPTY)
    return forward, backward


def configurations(program: LabeledProgram) -> ConfigurationSet:
    """Least set of call configurations reachable from the entry points.

    FIFO worklist closure; termination follows from the finite label
    universe.  The result is a set, so it does not depend on pop order.
    """
    seeds = seed_configurations(program)
    seen: set[CallConfiguration] = set(seeds)
    queue = deque(seeds)
    while queue:
        config = queue.popleft()
        for reached in call(config, program):
            if reached not in seen:
                seen.add(reached)
                queue.append(reached)
    return frozenset(seen)


# ---------------------------------------------------------------------------
# The configuration lattice


def compare_configurations(a: CallConfiguration, b: CallConfiguration) -> str:
    """Order two configurations: 'less', 'equal', 'greater' or 'incomparable'.

    Configurations compare only when caller, callee, and argument labels
    agree; then inclusion of the implicit label sets decides.
    """
    if (a.caller, a.callee, a.argument_labels) != (b.caller, b.callee, b.argument_labels):
        return "incomparable"
    if a.implicit_labels == b.implicit_labels:
        return "equal"
    if a.implicit_labels < b.implicit_labels:
        return "less"
    if a.implicit_labels > b.implicit_labels:
        return "greater"
    return "incomparable"


def join_configurations(a: CallConfiguration, b: CallConfiguration) -> CallConfiguration:
    """Least upper bound: union of implicit labels; same key required."""
    _require_same_key(a, b)
    return CallConfiguration(
        a.caller, a.callee, a.argument_labels, a.implicit_labels | b.implicit_labels
    )


def meet_configurations(a: CallConfiguration, b: CallConfiguration) -> CallConfiguration:
    """Greatest lower bound: intersection of implicit labels; same key required."""
    _require_same_key(a, b)
    return CallConfiguration(
        a.caller, a.callee, a.argument_labels, a.implicit_labels & b.implicit_labels
    )


def _require_same_key(a: CallConfiguration, b: CallConfiguration) -> None:
    if (a.caller, a.callee, a.argument_labels) != (b.caller, b.callee, b.argument_labels):
        raise ValueError("configurations with different keys have no join or meet")


# ---------------------------------------------------------------------------
# Branching-symmetry hints


@dataclass(frozen=True)
class Hint:
    """A call site whose callee's branching is decidable both ways.

    ``witness_labels`` are program points in the calling function whose
    values carry the callee's scrutinized argument: at least one of them
    is available on a forward path to the call and at least one on a
    backward path, so the callee's branch choice can be recovered in
    either execution direction there.
    """

    function: str
    callee: str
    call_label: int
    witness_labels: tuple[int, ...]


def symmetry_hints(program: LabeledProgram, configs: ConfigurationSet) -> list[Hint]:
    """Call sites where the callee's branching scrutinee is available
    in both execution directions.

    Only callees that actually branch (a case with two or more branches)
    on a component of their own parameter are considered.  The forward
    side is matched per call site through its argument labels; the
    backward side is matched per caller and callee, since inverse-walk
    configurations do not record the site they were emitted from.
    """
    hints: list[Hint] = []
    paths_cache: dict[str, tuple[tuple[int, ...], ...]] = {}
    for fd in program.functions.values():
        paths_cache[fd.name] = _branching_parameter_paths(fd)

    for fd in program.functions.values():
        occurrences = _variable_occurrences(fd)
        for site in _call_sites(fd.body):
            callee_name = underlying_name(site.callee)
            paths = paths_cache.get(callee_name, ())
            if not paths:
                continue
            site_labels = labels_of(site.argument)
            down = [
                c
                for c in configs
                if c.caller == fd.name
                and c.callee_name == callee_name
                and c.direction is Direction.DOWN
                and c.argument_labels == site_labels
            ]
            up = [
                c
                for c in configs
                if c.caller == fd.name
                and c.callee_name == callee_name
                and c.direction is Direction.UP
            ]
            if not down or not up:
                continue
            witness = _site_witness(site.argument, paths, occurrences, down, up)
            if witness:
                hints.append(
                    Hint(fd.name, callee_name, _own_label(site), tuple(sorted(witness)))
                )
    hints.sort(key=lambda h: (h.function, h.call_label))
    return hints


def _site_witness(
    argument: Pattern,
    paths: tuple[tuple[int, ...], ...],
    occurrences: dict[str, frozenset[int]],
    down: list[CallConfiguration],
    up: list[CallConfiguration],
) -> set[int]:
    witness: set[int] = set()
    for path in paths:
        sub = _subpattern_at(argument, path)
        if sub is None:
            continue
        names = [v.name for v in _pattern_vars(sub)]
        if not names:
            continue  # a ground scrutinee component branches statically
        per_path: set[int] = set()
        for name in names:
            occs = occurrences.get(name, frozenset())
            down_hits = {
                l
                for c in down
                for l in occs & (c.argument_labels | c.implicit_labels)
                if isinstance(l, int)
            }
            up_hits = {
                l
                for c in up
                for l in occs & (c.argument_labels | c.implicit_labels)
                if isinstance(l, int)
            }
            if not down_hits or not up_hits:
                per_path.clear()
                break
            per_path |= down_hits | up_hits
        witness |= per_path
    return witness


def _pattern_vars(pattern: Pattern) -> list[Var]:
    if isinstance(pattern, Var):
        return [pattern]
    out: list[Var] = []
    for arg in pattern.args:
        out.extend(_pattern_vars(arg))
    return out


def _subpattern_at(pattern: Pattern, path: tuple[int, ...]) -> Pattern | None:
    """Descend a component path; a variable absorbs any remaining path."""
    node = pattern
    for index in path:
        if isinstance(node, Var):
            return node
        if index >= len(node.args):
            return None
        node = node.args[index]
    return node


def _branching_parameter_paths(fd: FunDef) -> tuple[tuple[int, ...], ...]:
    """Component paths of the parameter that the body's branching inspects.

    Walks the body's case spine, tracking which variables are bound to
    which component of the (single, variable) parameter; every case with
    two or more branches whose scrutinee is such a variable contributes
    that variable's component path.
    """
    if not isinstance(fd.parameter, Var):
        return ()
    found: list[tuple[int, ...]] = []

    def walk(term: Term, binding: dict[str, tuple[int, ...]]) -> None:
        if not isinstance(term, Case):
            return
        scrutinee_path: tuple[int, ...] | None = None
        scrutinee = term.scrutinee
        if isinstance(scrutinee, PatternTerm) and isinstance(scrutinee.pattern, Var):
            scrutinee_path = binding.get(scrutinee.pattern.name)
        if scrutinee_path is not None and len(term.branches) > 1:
            if scrutinee_path not in found:
                found.append(scrutinee_path)
        for pattern, body in term.branches:
            extended = dict(binding)
            if scrutinee_path is not None:
                for var, sub_path in _variable_paths(pattern):
                    extended[var.name] = scrutinee_path + sub_path
            walk(body, extended)

    walk(fd.body, {fd.parameter.name: ()})
    return tuple(found)


def _variable_paths(pattern: Pattern) -> list[tuple[Var, tuple[int, ...]]]:
    if isinstance(pattern, Var):
        return [(pattern, ())]
    out: list[tuple[Var, tuple[int, ...]]] = []
    for index, arg in enumerate(pattern.args):
        for var, sub in _variable_paths(arg):
            out.append((var, (index,) + sub))
    return out


def _variable_occurrences(fd: FunDef) -> dict[str, frozenset[int]]:
    """Labels of every occurrence of each variable name in a definition."""
    acc: dict[str, set[int]] = {}

    def pattern(p: Pattern) -> None:
        if isinstance(p, Var):
            if p.label is not None:
                acc.setdefault(p.name, set()).add(p.label)
            return
        for arg in p.args:
            pattern(arg)

    def term(t: Term) -> None:
        if isinstance(t, PatternTerm):
            pattern(t.pattern)
        elif isinstance(t, Apply):
            pattern(t.argument)
        elif isinstance(t, Case):
            term(t.scrutinee)
            for p, b in t.branches:
                pattern(p)
                term(b)

    pattern(fd.parameter)
    term(fd.body)
    return {name: frozenset(labels) for name, labels in acc.items()}


def _call_sites(term: Term) -> list[Apply]:
    if isinstance(term, PatternTerm):
        return []
    if isinstance(term, Apply):
        return [term]
    if isinstance(term, Case):
        sites = _call_sites(term.scrutinee)
        for _, body in term.branches:
            sites.extend(_call_sites(body))
        return sites
    return []
