from __future__ import annotations

import pytest

from eqsem.coretype import builtin_core
from eqsem.errors import NotGroundOperand, ReductionError
from eqsem.equations import parse_program
from eqsem.reducer import (
    FALSE,
    TRUE,
    DifferentialReport,
    OutOfFuel,
    ReduceConfig,
    Stuck,
    Value,
    differential,
    eval_intop,
    outcome_summary,
    phi_step,
    reduce,
)
from eqsem.terms import App, Ctor, lit, parse_term

from conftest import term_in

LIST_14 = parse_term("Cons 1 (Cons 4 Nil)")


@pytest.mark.parametrize(
    "op, a, b, expected",
    [
        ("add", 2, 3, lit(5)),
        ("sub", 0, 1, lit(-1)),
        ("mul", -3, 4, lit(-12)),
        ("eq", 1, 1, TRUE),
        ("neq", 1, 1, FALSE),
        ("le", 2, 1, FALSE),
        ("ge", 2, 1, TRUE),
    ],
)
def test_eval_intop(op, a, b, expected):
    assert eval_intop(op, lit(a), lit(b)) == expected


def test_eval_intop_needs_literals():
    with pytest.raises(NotGroundOperand):
        eval_intop("add", App("uint"), lit(1))


def test_step_rules(sqs, cores):
    lazy, eager = cores["lazy"], cores["eager"]
    step = lambda text, core: phi_step(term_in(sqs, text), sqs, core)
    # instantiation copies arguments
    assert step("sq (sub 2 1)", lazy) == term_in(sqs, "mul (sub 2 1) (sub 2 1)")
    # both operands step together
    assert step("mul (sub 2 1) (sub 3 1)", lazy) == term_in(sqs, "mul 1 2")
    # case fires only on support
    assert step("case (Cons (sq 2) Nil) of { Nil -> Nil, Cons -> shunx Nil }", lazy) == term_in(
        sqs, "shunx Nil (sq 2) Nil"
    )
    assert step("case (Cons (sq 2) Nil) of { Nil -> Nil, Cons -> shunx Nil }", eager) == term_in(
        sqs, "case (Cons (mul 2 2) Nil) of { Nil -> Nil, Cons -> shunx Nil }"
    )


def test_fixed_points_return_same_object(sqs, cores):
    t = LIST_14
    assert phi_step(t, sqs, cores["eager"]) is t


def test_partial_application_cannot_step(sqs, cores):
    with pytest.raises(ReductionError):
        phi_step(parse_term("revs sq"), sqs, cores["lazy"])


def test_reduce_value(sqs, cores):
    out = reduce(term_in(sqs, "sqs 2"), sqs, ReduceConfig(cores["lazy"], record_trace=True))
    assert out == Value(LIST_14, 24)
    assert len(out.trace) == 25 and out.trace[-1] == LIST_14
    assert reduce(term_in(sqs, "sqs 2"), sqs, ReduceConfig(cores["eager"])) == Value(LIST_14, 21)


def test_ground_input_takes_zero_steps(sqs, cores):
    assert reduce(LIST_14, sqs, ReduceConfig(cores["eager"])) == Value(LIST_14, 0)


def test_fuel_is_exact(sqs, cores):
    t = term_in(sqs, "sqs 2")
    assert reduce(t, sqs, ReduceConfig(cores["lazy"], fuel=24)) == Value(LIST_14, 24)
    out = reduce(t, sqs, ReduceConfig(cores["lazy"], fuel=23, record_trace=True))
    assert isinstance(out, OutOfFuel) and out.fuel == 23 and len(out.trace) == 24
    with pytest.raises(ValueError):
        ReduceConfig(cores["lazy"], fuel=0)


def test_stuck_and_cycles(fst, cores):
    out = reduce(term_in(fst, "fst (Pair 1 uint)"), fst, ReduceConfig(cores["eager"]))
    assert isinstance(out, Stuck) and out.steps == 1 and out.period == 1
    assert outcome_summary(out).startswith("stuck at step 1: case (Pair 1 uint)")


CYCLE = """
data list = Nil | Cons int list ;
sig ping : int ; sig pong : int ;
def ping = case (eq 1 1) of { True -> pong, False -> 0 } ;
def pong = ping ;
"""


def test_longer_cycles_detected_only_on_request():
    sig, system = parse_program(CYCLE)
    core = builtin_core("lazy", sig)
    assert isinstance(reduce(App("ping"), system, ReduceConfig(core, fuel=50)), OutOfFuel)
    out = reduce(App("ping"), system, ReduceConfig(core, fuel=50, detect_cycles=8))
    assert isinstance(out, Stuck) and out.period == 4 and out.steps == 0
    assert "cycle of period 4" in outcome_summary(out)


def test_outcome_summaries(sqs, cores):
    assert outcome_summary(Value(LIST_14, 3)) == "value Cons 1 (Cons 4 Nil) after 3 steps"
    assert outcome_summary(OutOfFuel(App("uint"), 9)) == "out of fuel after 9 steps: uint"


def test_differential_agreement(sqs, cores):
    report = differential(term_in(sqs, "sqs 3"), sqs, cores.values())
    assert isinstance(report, DifferentialReport)
    assert report.agreed and set(report.values) == {"eager", "lazy", "miranda"}


def test_differential_vacuous_when_one_side_diverges(ones, cores):
    report = differential(term_in(ones, "hd ones"), ones, cores.values(), fuel=50)
    assert report.agreed
    assert isinstance(report.outcomes["eager"], OutOfFuel)
    assert report.values == {"lazy": lit(1), "miranda": lit(1)}


def test_differential_flags_disagreement(sqs, cores):
    # a broken reducer is simulated by comparing different terms' outcomes
    from eqsem.reducer import Violation, _labels

    assert _labels([cores["lazy"], cores["lazy"]]) == ["lazy", "lazy#2"]
    with pytest.raises(ValueError):
        differential(LIST_14, sqs, [cores["lazy"]])
    v = Violation("a", "b", lit(1), lit(2))
    assert not DifferentialReport({}, (v,)).agreed
