from __future__ import annotations

import json
from pathlib import Path

import pytest

from jeopardy_iaa import annotate, desugar_program, parse, validate

FIXTURES = Path(__file__).parent / "fixtures"

ALL_FIXTURES = sorted(FIXTURES.glob("*.jpd"))


def fixture_source(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def load_program(name: str):
    program = parse(fixture_source(name))
    assert validate(program) == []
    return program


def load_core(name: str):
    return desugar_program(load_program(name))


def load_labeled(name: str):
    return annotate(load_core(name))


@pytest.fixture(scope="session")
def fib_labeled():
    return load_labeled("fib.jpd")


@pytest.fixture(scope="session")
def fib_oracle():
    return json.loads((FIXTURES / "fib_oracle.json").read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# Random core programs for order-preservation (monotonicity) checks.

import random  # noqa: E402

from jeopardy_iaa.syntax import (  # noqa: E402
    Apply,
    Case,
    Con,
    DataDef,
    Direct,
    FunDef,
    Inverted,
    PatternTerm,
    Program,
    Var,
)

_CONSTRUCTORS = (("c0", 0), ("c1", 1), ("c2", 2))
_CALLEES = ("f", "g", "h")
_VARS = ("x", "y", "z")


def _random_pattern(rng: random.Random, budget: int):
    if budget <= 1 or rng.random() < 0.4:
        return Var(rng.choice(_VARS)), 1
    name, arity = rng.choice(_CONSTRUCTORS)
    used = 1
    args = []
    for _ in range(arity):
        arg, spent = _random_pattern(rng, max(1, (budget - used) // max(1, arity)))
        args.append(arg)
        used += spent
    return Con(name, tuple(args)), used


def _random_ref(rng: random.Random):
    ref = Direct(rng.choice(_CALLEES))
    for _ in range(rng.randint(0, 2)):
        if rng.random() < 0.3:
            ref = Inverted(ref)
    return ref


def _random_core_term(rng: random.Random, budget: int):
    roll = rng.random()
    if budget <= 2 or roll < 0.3:
        pattern, used = _random_pattern(rng, budget)
        return PatternTerm(pattern), used
    if roll < 0.6:
        pattern, used = _random_pattern(rng, max(1, budget - 1))
        return Apply(_random_ref(rng), pattern), used + 1
    branch_count = rng.randint(1, 2)
    used = 1
    scrutinee, spent = _random_core_term(rng, max(1, (budget - used) // (branch_count + 1)))
    used += spent
    branches = []
    for _ in range(branch_count):
        pattern, spent = _random_pattern(rng, max(1, (budget - used) // 2))
        used += spent
        body, spent = _random_core_term(rng, max(1, budget - used))
        used += spent
        branches.append((pattern, body))
    return Case(scrutinee, None, tuple(branches)), used


def random_labeled_program(rng: random.Random, budget: int = 12):
    """A labeled core program whose function ``h`` has a random body."""
    body, _ = _random_core_term(rng, budget)
    data = DataDef("d", (("c0", ()), ("c1", ("d",)), ("c2", ("d", "d"))))
    program = Program(
        (
            data,
            FunDef("f", Var("x"), None, None, PatternTerm(Var("x"))),
            FunDef("g", Var("y"), None, None, Apply(Direct("f"), Var("y"))),
            FunDef("h", Var("z"), None, None, body),
        ),
        Direct("h"),
    )
    return annotate(program)


def random_label_sets(rng: random.Random, universe: int):
    """A random pair (small, big) with small a subset of big."""
    pool = list(range(universe)) + ["input", "output"]
    big = frozenset(l for l in pool if rng.random() < 0.4)
    small = frozenset(l for l in big if rng.random() < 0.6)
    return small, big


def pointwise_below(lo, hi) -> bool:
    """Every configuration in ``lo`` is dominated by one in ``hi`` with
    the same caller, callee, and argument labels."""
    for config in lo:
        if not any(
            config.caller == other.caller
            and config.callee == other.callee
            and config.argument_labels == other.argument_labels
            and config.implicit_labels <= other.implicit_labels
            for other in hi
        ):
            return False
    return True
