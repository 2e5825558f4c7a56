"""Labeling: deterministic pre-order numbering of every program point."""

from __future__ import annotations

import pytest

from jeopardy_iaa import annotate, desugar_program, labels_of, parse
from jeopardy_iaa.labeler import body_root_label
from jeopardy_iaa.syntax import Apply, Case, Con, PatternTerm, fun_defs

from conftest import ALL_FIXTURES, load_core, load_labeled


def test_identity_program_labels():
    labeled = annotate(desugar_program(parse("f x = x. main f.")))
    definition = labeled.functions["f"]
    assert definition.parameter.label == 0
    assert definition.body.pattern.label == 1
    assert labeled.label_count == 2


@pytest.mark.parametrize("path", ALL_FIXTURES, ids=lambda p: p.name)
def test_labels_are_exactly_a_range(path):
    labeled = load_labeled(path.name)

    occurrences: list[int] = []

    def collect(node):
        if isinstance(node, PatternTerm):
            collect(node.pattern)
        elif isinstance(node, Con):
            occurrences.append(node.label)
            for arg in node.args:
                collect(arg)
        elif isinstance(node, Apply):
            occurrences.append(node.label)
            collect(node.argument)
        elif isinstance(node, Case):
            occurrences.append(node.label)
            collect(node.scrutinee)
            for p, b in node.branches:
                collect(p)
                collect(b)
        else:  # Var
            occurrences.append(node.label)

    for fd in labeled.functions.values():
        collect(fd.parameter)
        collect(fd.body)

    # each label used exactly once, and together they are 0..N-1
    assert sorted(occurrences) == list(range(labeled.label_count))
    assert set(labeled.index) == set(range(labeled.label_count))


@pytest.mark.parametrize("path", ALL_FIXTURES, ids=lambda p: p.name)
def test_annotation_is_deterministic(path):
    core = load_core(path.name)
    first = annotate(core)
    second = annotate(core)
    assert first.program == second.program
    assert first.index == second.index


def test_parent_labels_include_children(fib_labeled):
    def check(node):
        own = labels_of(node)
        children = []
        if isinstance(node, Con):
            children = list(node.args)
        elif isinstance(node, PatternTerm):
            children = [node.pattern]
        elif isinstance(node, Apply):
            children = [node.argument]
        elif isinstance(node, Case):
            children = [node.scrutinee]
            for p, b in node.branches:
                children += [p, b]
        for child in children:
            assert labels_of(child) <= own
            check(child)

    for fd in fib_labeled.functions.values():
        check(fd.parameter)
        check(fd.body)


def test_fib_label_table(fib_labeled):
    """Pin the numbering of the flagship fixture's interesting points."""
    functions = fib_labeled.functions
    assert functions["sum"].parameter.label == 0
    assert functions["sum"].body.label == 1
    recursive_sum = functions["sum"].body.branches[0][1].branches[1][1]
    assert recursive_sum.label == 12
    assert labels_of(recursive_sum.argument) == frozenset({13, 14, 15, 16})

    fibber_case = functions["fibber"].body
    assert fibber_case.label == 18
    sum_call = fibber_case.branches[0][1].scrutinee
    assert sum_call.label == 24
    assert labels_of(sum_call.argument) == frozenset({25, 26, 27})

    fib_call = functions["fibonacci"].body.scrutinee
    assert fib_call.label == 51
    assert labels_of(fib_call.argument) == frozenset({52})

    assert fib_labeled.label_count == 59


def test_index_records_function_and_kind(fib_labeled):
    assert fib_labeled.index[0].function == "sum"
    assert fib_labeled.index[0].kind == "variable"
    assert fib_labeled.index[1].kind == "case"
    assert fib_labeled.index[24].function == "fibber"
    assert fib_labeled.index[24].kind == "application"
    assert fib_labeled.index[53].kind == "constructor"


def test_body_root_label(fib_labeled):
    assert body_root_label(fib_labeled.functions["sum"].body) == 1
    labeled = annotate(desugar_program(parse("f x = x. main f.")))
    assert body_root_label(labeled.functions["f"].body) == 1


def test_labels_of_rejects_unlabeled_nodes():
    program = desugar_program(parse("f x = x. main f."))
    with pytest.raises(ValueError):
        labels_of(next(fun_defs(program)).body)


def test_labeling_ignores_formatting():
    dense = annotate(desugar_program(parse("f x = case x of ; y -> f y. main f.")))
    spaced = annotate(
        desugar_program(parse("-- comment\nf   x =\n  case x of\n  ; y -> f y.\n\nmain f.\n"))
    )
    assert dense.program == spaced.program
