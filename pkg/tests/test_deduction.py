from __future__ import annotations

import pytest

from eqsem.coretype import builtin_core
from eqsem.deduction import (
    Context,
    Equiv,
    Grounded,
    GroundedClaim,
    NotUndefined,
    NotUndefinedClaim,
    Prover,
    check_equiv_step,
    check_script,
    derive_grounded,
    derive_not_undefined,
)
from eqsem.errors import DeductionError, MissingSideCondition, RuleMismatch, SubstitutionMismatch
from eqsem.terms import App, lit, parse_term

from conftest import corpus_text

SCRIPTS = ("shunt_nil.eqp", "shunt_cons.eqp", "revs_zero.eqp", "revs_step.eqp")


def p(system, text):
    return parse_term(text, None, system.signature)


@pytest.mark.parametrize("script", SCRIPTS)
@pytest.mark.parametrize("mode", ["eager", "lazy", "miranda"])
def test_corpus_scripts_verify(sqs, script, mode):
    verdict = check_script(corpus_text(script), sqs, builtin_core(mode, sqs.signature))
    assert verdict.ok, str(verdict)
    assert str(verdict) == "verified"
    assert verdict.conclusions


def test_unjustified_case_step_depends_on_core(sqs):
    text = corpus_text("r4_unjustified.eqp")
    eager = check_script(text, sqs, builtin_core("eager", sqs.signature))
    assert not eager.ok and eager.line == 6 and eager.error is MissingSideCondition
    assert str(eager).startswith("failed at line 6:")
    assert check_script(text, sqs, builtin_core("lazy", sqs.signature)).ok


def _prover(sqs, mode="eager", **universals):
    prover = Prover(sqs, builtin_core(mode, sqs.signature))
    for name, t in universals.items():
        prover.declare(name, t)
    return prover


def test_r2_is_substitution_instance(sqs):
    prover = _prover(sqs, n="int")
    prover.check(Equiv(p(sqs, "sq n"), p(sqs, "mul n n"), "R2"))
    with pytest.raises(SubstitutionMismatch):
        prover.check(Equiv(p(sqs, "sq n"), p(sqs, "mul n 1"), "R2"))
    with pytest.raises(RuleMismatch):
        prover.check(Equiv(p(sqs, "revs sq"), p(sqs, "revs sq"), "R2"))


def test_r3_needs_grounded_operands(sqs):
    prover = _prover(sqs, n="int")
    with pytest.raises(MissingSideCondition):
        prover.check(Equiv(p(sqs, "sub n 1"), lit(1), "R3"))
    prover.assume_grounded("n", lit(2))
    prover.check(Equiv(p(sqs, "sub n 1"), lit(1), "R3"))
    with pytest.raises(RuleMismatch):
        prover.check(Equiv(p(sqs, "sub n 1"), lit(0), "R3"))


def test_r1_congruence_uses_established_pairs(sqs):
    prover = _prover(sqs, "lazy")
    lhs, rhs = p(sqs, "Cons (sq 2) Nil"), p(sqs, "Cons (mul 2 2) Nil")
    with pytest.raises(RuleMismatch):
        prover.check(Equiv(lhs, rhs, "R1"))
    prover.check(Equiv(p(sqs, "sq 2"), p(sqs, "mul 2 2"), "R2"))
    prover.check(Equiv(lhs, rhs, "R1"))
    prover.check(Equiv(rhs, lhs, "R1"))


def test_sym_trans_refl(sqs):
    prover = _prover(sqs)
    a, b, c = p(sqs, "sq 2"), p(sqs, "mul 2 2"), lit(4)
    prover.check(Equiv(a, a, "REFL"))
    with pytest.raises(RuleMismatch):
        prover.check(Equiv(b, a, "SYM"))
    prover.check(Equiv(a, b, "R2"))
    prover.check(Equiv(b, a, "SYM"))
    prover.check(Equiv(b, c, "R3"))
    prover.check(Equiv(a, c, "TRANS"))
    with pytest.raises(RuleMismatch):
        prover.check(Equiv(c, p(sqs, "sq 3"), "TRANS"))
    assert prover.connected(c, a)


def test_sides_must_share_a_type(sqs):
    with pytest.raises(RuleMismatch):
        _prover(sqs).check(Equiv(lit(1), p(sqs, "Nil"), "REFL"))


def test_r4_side_condition_eager_vs_lazy(sqs):
    lhs = p(sqs, "case (Cons n a) of { Nil -> b, Cons -> shunx b }")
    rhs = p(sqs, "shunx b n a")
    eager = _prover(sqs, "eager", n="int", a="list", b="list")
    with pytest.raises(MissingSideCondition):
        eager.check(Equiv(lhs, rhs, "R4"))
    eager.assume_defined("n")
    eager.assume_defined("a")
    eager.check(Equiv(lhs, rhs, "R4"))
    lazy = _prover(sqs, "lazy", n="int", a="list", b="list")
    b_ = p(sqs, "b")
    lazy.check(Equiv(lhs, rhs, "R4"))
    with pytest.raises(RuleMismatch):
        lazy.check(Equiv(p(sqs, "case (revs sq 2) of { Nil -> b, Cons -> shunx b }"), b_, "R4"))


def test_grounded_and_not_undefined_claims(sqs):
    prover = _prover(sqs, "eager", n="int", a="list")
    prover.assume_grounded("n", None)
    with pytest.raises(MissingSideCondition):
        prover.check(GroundedClaim(p(sqs, "Cons n a"), None, "G2"))
    prover.assume_grounded("a", p(sqs, "Nil"))
    assert prover.check_grounded(GroundedClaim(p(sqs, "Cons n a"), None, "G2")) == p(sqs, "Cons n Nil")
    assert prover.check_grounded(GroundedClaim(p(sqs, "add 2 3"), lit(5), "G3")) == lit(5)
    with pytest.raises(RuleMismatch):
        prover.check(GroundedClaim(p(sqs, "add 2 3"), lit(6), "G3"))
    with pytest.raises(RuleMismatch):
        prover.check(GroundedClaim(p(sqs, "Cons n a"), None, "G1"))
    prover.check(NotUndefinedClaim(p(sqs, "Cons n a"), "N1"))
    with pytest.raises(MissingSideCondition):
        prover.check(NotUndefinedClaim(p(sqs, "Cons (sq 2) Nil"), "N2"))


def test_n2_under_lazy(sqs):
    prover = _prover(sqs, "lazy")
    prover.check(NotUndefinedClaim(p(sqs, "Cons (sq 2) Nil"), "N2"))
    with pytest.raises(RuleMismatch):
        prover.check(NotUndefinedClaim(p(sqs, "sq 2"), "N2"))


def test_derivations():
    ctx = Context({"n": "int", "m": "int"}, {"n": Grounded(lit(3)), "m": NotUndefined()})
    assert derive_grounded(parse_term("add n 1"), ctx) == lit(4)
    assert derive_grounded(parse_term("add m 1"), ctx) is None
    assert derive_grounded(parse_term("sq n"), ctx, [(parse_term("sq n"), lit(9))]) == lit(9)


def test_derive_not_undefined_respects_core(sqs):
    ctx = Context({"m": "int"}, {"m": NotUndefined()})
    eager = builtin_core("eager", sqs.signature)
    assert derive_not_undefined(parse_term("Cons m Nil"), ctx, eager)
    assert not derive_not_undefined(parse_term("Cons (sq 1) Nil"), ctx, eager)


def test_check_equiv_step(sqs):
    core = builtin_core("eager", sqs.signature)
    assert check_equiv_step(Equiv(p(sqs, "sq 3"), p(sqs, "mul 3 3"), "R2"), Context(), sqs, core)


@pytest.mark.parametrize(
    "script, line",
    [
        ("universal n : int\nuniversal n : int", 2),
        ("assume grounded n", 1),
        ("universal sq : int", 1),
        ("universal n : int\nassume grounded n = Nil", 2),
        ("universal n : int\nassume grounded n = sq 2", 2),
        ("step R9: sq 2 == mul 2 2", 1),
        ("step R2: sq 2 == mul 2 2 extra", 1),
        ("frobnicate", 1),
        ("# header\n\nconclude sq 2 == 4", 3),
    ],
)
def test_script_failures_report_line(sqs, script, line):
    verdict = check_script(script, sqs, builtin_core("lazy", sqs.signature))
    assert not verdict.ok and verdict.line == line


def test_functional_universal_cannot_be_grounded(sqs):
    prover = _prover(sqs, f=parse_term_type("int -> int"))
    with pytest.raises(DeductionError):
        prover.assume_grounded("f", None)


def parse_term_type(text):
    from eqsem.lexer import TokenStream
    from eqsem.signature import parse_type

    return parse_type(TokenStream(text))
