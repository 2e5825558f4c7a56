"""Round-trip discipline: printed programs re-parse to identical trees."""

from __future__ import annotations

import pytest

from jeopardy_iaa import parse, pretty_program
from jeopardy_iaa.printer import pretty_funref, pretty_value
from jeopardy_iaa.syntax import Direct, Inverted, Value

from conftest import ALL_FIXTURES, load_core


@pytest.mark.parametrize("path", ALL_FIXTURES, ids=lambda p: p.name)
def test_round_trip_fixture(path):
    first = parse(path.read_text(encoding="utf-8"))
    second = parse(pretty_program(first))
    assert first == second


@pytest.mark.parametrize("path", ALL_FIXTURES, ids=lambda p: p.name)
def test_round_trip_core_program(path):
    core = load_core(path.name)
    assert parse(pretty_program(core)) == core


def test_nested_inversion_prints_with_parens():
    assert pretty_funref(Inverted(Inverted(Direct("f")))) == "(invert (invert f))"


def test_wildcards_print_back_as_underscore():
    source = "f p = case p of ; (_, _) -> []. main f."
    printed = pretty_program(parse(source))
    assert "_1" not in printed
    assert parse(printed) == parse(source)


def test_cons_parameter_round_trips():
    source = "data l = [nil] [cons l l]. f ((x : xs)) = x. main f."
    first = parse(source)
    assert parse(pretty_program(first)) == first


def test_value_printing():
    pair = Value("pair", (Value("zero"), Value("nil")))
    assert pretty_value(pair) == "([zero], [])"
    assert pretty_value(Value("cons", (Value("zero"), Value("nil")))) == "([zero] : [])"


def test_label_annotations_appear():
    from conftest import load_labeled

    printed = pretty_program(load_labeled("fib.jpd").program, labels=True)
    assert "{-0-}" in printed and "{-58-}" in printed


def test_random_core_programs_round_trip():
    import random

    from conftest import random_labeled_program

    rng = random.Random(97)
    for _ in range(300):
        program = random_labeled_program(rng).program
        unlabeled = parse(pretty_program(program))
        assert pretty_program(unlabeled) == pretty_program(program)


def test_mixed_sugar_round_trip():
    source = (
        "data n = [zero] [successor n]. "
        "f x = [successor (f x)]. "
        "g x = (f x, (f x : [])). "
        "main f."
    )
    first = parse(source)
    assert parse(pretty_program(first)) == first
