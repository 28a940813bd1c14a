"""Checking equational-reasoning scripts against an equation system.

A script fixes some universally quantified locals, states assumptions
about them, and then proves equivalences ``s == s'`` one rule
application at a time.  Every verified equivalence becomes available to
later lines: congruence (R1) may replace any subterm by a term already
shown equivalent, and a term shown equivalent to a ground term counts as
grounded.

Script lines::

    universal n : int
    assume grounded n = 2      # or just ``assume grounded n``
    assume defined a
    step R2: sq n == mul n n
    step G2: Cons n a = Cons 2 Nil
    step N2: Cons (sq 2) Nil
    conclude sq n == mul n n

A local assumed grounded without a value stands for an unknown ground
value of its type; it is then its own (symbolic) value.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .coretype import NATURAL, CoreType
from .equations import EquationSystem
from .errors import (
    DeductionError,
    EqError,
    MissingSideCondition,
    RuleMismatch,
    SubstitutionMismatch,
)
from .lexer import TokenStream
from .reducer import INTOPS, eval_intop
from .signature import FnType, format_type, parse_type
from .terms import App, Case, Ctor, Term, TypeEnv, apply_flatten, infer_type, is_literal, parse_term_tokens, print_term

EQUIV_RULES = ("R1", "R2", "R3", "R4", "REFL", "SYM", "TRANS")
GROUNDED_RULES = ("G1", "G2", "G3")
NOT_UNDEFINED_RULES = ("N1", "N2")


# facts about universals

@dataclass(frozen=True)
class Grounded:
    value: Term | None = None  # None: grounded with an unspecified value


@dataclass(frozen=True)
class NotUndefined:
    pass


@dataclass(frozen=True)
class Unknown:
    pass


@dataclass
class Context:
    universals: dict = field(default_factory=dict)  # name -> Type
    facts: dict = field(default_factory=dict)  # name -> Grounded | NotUndefined | Unknown

    def fact(self, name: str):
        return self.facts.get(name, Unknown())

    def is_universal(self, t: Term) -> bool:
        return isinstance(t, App) and not t.args and t.head in self.universals


# claims

@dataclass(frozen=True)
class Equiv:
    lhs: Term
    rhs: Term
    rule: str


@dataclass(frozen=True)
class GroundedClaim:
    term: Term
    value: Term | None
    rule: str


@dataclass(frozen=True)
class NotUndefinedClaim:
    term: Term
    rule: str


# derived facts

def derive_grounded(term: Term, context: Context, equivalences=()) -> Term | None:
    """The value of ``term`` if some grounding rule applies, else None.

    Values are ground terms, except that a universal grounded without a
    stated value is its own value.
    """
    match term:
        case App(name, ()) if name in context.universals:
            fact = context.fact(name)
            if isinstance(fact, Grounded):
                return fact.value if fact.value is not None else term
        case Ctor(name, args):
            values = [derive_grounded(a, context, equivalences) for a in args]
            if all(v is not None for v in values):
                return Ctor(name, tuple(values))
        case App(op, (lhs, rhs)) if op in INTOPS:
            l = derive_grounded(lhs, context, equivalences)
            r = derive_grounded(rhs, context, equivalences)
            if is_literal(l) and is_literal(r):
                return eval_intop(op, l, r)
    for a, b in equivalences:
        if a == term and _is_value(b, context):
            return b
        if b == term and _is_value(a, context):
            return a
    return None


def _is_value(t: Term, context: Context) -> bool:
    match t:
        case Ctor(_, args):
            return all(_is_value(a, context) for a in args)
        case App(name, ()):
            fact = context.fact(name)
            return isinstance(fact, Grounded) and fact.value is None
    return False


def derive_not_undefined(term: Term, context: Context, core: CoreType, proven=frozenset(),
                         equivalences=()) -> bool:
    if derive_grounded(term, context, equivalences) is not None:
        return True
    if term in proven:
        return True
    match term:
        case App(name, ()) if name in context.universals:
            return isinstance(context.fact(name), (Grounded, NotUndefined))
        case Ctor(name, args):
            flags = [derive_not_undefined(a, context, core, proven, equivalences) for a in args]
            return core.apply(name, flags) == NATURAL
    return False


# the checker

class Prover:
    """Checks claims one at a time, accumulating what has been shown."""

    def __init__(self, system: EquationSystem, core: CoreType, context: Context | None = None):
        self.system = system
        self.core = core
        self.context = context or Context()
        self.established: set = set()  # (lhs, rhs) pairs, as proved
        self.not_undefined: set = set()

    # environment

    @property
    def env(self) -> TypeEnv:
        return self.system.env.with_locals(self.context.universals)

    def declare(self, name: str, t) -> None:
        if name in self.context.universals:
            raise DeductionError(f"universal {name!r} declared twice")
        self.context.universals[name] = t
        self.env  # raises if the name clashes with an equation or primitive

    def assume_grounded(self, name: str, value: Term | None) -> None:
        t = self._universal_type(name)
        if isinstance(t, FnType):
            raise DeductionError(f"{name} has functional type and cannot be grounded")
        if value is not None:
            if derive_grounded(value, Context()) != value:
                raise DeductionError(f"{print_term(value)} is not a ground term")
            vt = infer_type(value, self.env, self.system.signature)
            if vt != t:
                raise DeductionError(f"value {print_term(value)} has type {vt}, expected {t}")
            self.established.add((App(name), value))
        self.context.facts[name] = Grounded(value)

    def assume_defined(self, name: str) -> None:
        self._universal_type(name)
        if not isinstance(self.context.fact(name), Grounded):
            self.context.facts[name] = NotUndefined()

    def _universal_type(self, name: str):
        if name not in self.context.universals:
            raise DeductionError(f"{name!r} is not a declared universal")
        return self.context.universals[name]

    def type_of(self, t: Term):
        return infer_type(t, self.env, self.system.signature)

    # claims

    def check(self, claim) -> None:
        match claim:
            case Equiv():
                self.check_equiv(claim)
            case GroundedClaim():
                self.check_grounded(claim)
            case NotUndefinedClaim():
                self.check_not_undefined(claim)
            case _:
                raise TypeError(claim)

    def check_equiv(self, claim: Equiv) -> None:
        lhs, rhs = claim.lhs, claim.rhs
        lt, rt = self.type_of(lhs), self.type_of(rhs)
        if lt != rt:
            raise RuleMismatch(f"sides have different types: {format_type(lt)} and {format_type(rt)}")
        check = {
            "R1": self._r1, "R2": self._r2, "R3": self._r3, "R4": self._r4,
            "REFL": self._refl, "SYM": self._sym, "TRANS": self._trans,
        }.get(claim.rule)
        if check is None:
            raise RuleMismatch(f"unknown rule {claim.rule!r}")
        check(lhs, rhs)
        self.established.add((lhs, rhs))

    def _r1(self, lhs, rhs):
        if not self.congruent(lhs, rhs):
            raise RuleMismatch("sides differ at a position with no established equivalence")

    def congruent(self, a: Term, b: Term) -> bool:
        if a == b or (a, b) in self.established or (b, a) in self.established:
            return True
        match a, b:
            case (Ctor(n, xs), Ctor(m, ys)) | (App(n, xs), App(m, ys)) if type(a) is type(b):
                return n == m and len(xs) == len(ys) and all(
                    self.congruent(x, y) for x, y in zip(xs, ys)
                )
            case Case(s, bs), Case(s2, bs2):
                return (
                    [k for k, _ in bs] == [k for k, _ in bs2]
                    and self.congruent(s, s2)
                    and all(self.congruent(x, y) for (_, x), (_, y) in zip(bs, bs2))
                )
        return False

    def _r2(self, lhs, rhs):
        if not (isinstance(lhs, App) and lhs.head in self.system):
            raise RuleMismatch("left side is not an application of an equation name")
        d = self.system[lhs.head]
        if len(lhs.args) != len(d.params):
            raise RuleMismatch(f"{lhs.head} is not applied to all {len(d.params)} arguments")
        expected = self.system.instantiate(lhs.head, lhs.args)
        if expected != rhs:
            raise SubstitutionMismatch(f"instance of the equation is {print_term(expected)}")

    def _r3(self, lhs, rhs):
        if not (isinstance(lhs, App) and lhs.head in INTOPS and len(lhs.args) == 2):
            raise RuleMismatch("left side is not an integer operator applied to two operands")
        values = [derive_grounded(a, self.context, self.established) for a in lhs.args]
        for a, v in zip(lhs.args, values):
            if not is_literal(v):
                raise MissingSideCondition(f"operand {print_term(a)} is not known to be grounded")
        expected = eval_intop(lhs.head, *values)
        if expected != rhs:
            raise RuleMismatch(f"operator evaluates to {print_term(expected)}")

    def _r4(self, lhs, rhs):
        if not (isinstance(lhs, Case) and isinstance(lhs.scrutinee, Ctor)):
            raise RuleMismatch("left side is not a case on a constructor application")
        s = lhs.scrutinee
        if not derive_not_undefined(s, self.context, self.core, self.not_undefined, self.established):
            raise MissingSideCondition(f"scrutinee {print_term(s)} is not known to be defined")
        expected = apply_flatten(lhs.branch(s.name), s.args)
        if expected != rhs:
            raise RuleMismatch(f"selected branch gives {print_term(expected)}")

    def _refl(self, lhs, rhs):
        if lhs != rhs:
            raise RuleMismatch("sides are not identical")

    def _sym(self, lhs, rhs):
        if (rhs, lhs) not in self.established:
            raise RuleMismatch("the reversed equivalence has not been established")

    def _trans(self, lhs, rhs):
        middles = {b for a, b in self.established if a == lhs}
        if not any((m, rhs) in self.established for m in middles):
            raise RuleMismatch("no established middle term links the two sides")

    def check_grounded(self, claim: GroundedClaim) -> Term:
        t = claim.term
        match claim.rule:
            case "G1":
                ok = derive_grounded(t, Context()) == t
            case "G2":
                ok = isinstance(t, Ctor)
            case "G3":
                ok = isinstance(t, App) and t.head in INTOPS
            case _:
                raise RuleMismatch(f"unknown rule {claim.rule!r}")
        if not ok:
            raise RuleMismatch(f"{claim.rule} does not apply to {print_term(t)}")
        value = derive_grounded(t, self.context, self.established)
        if value is None:
            raise MissingSideCondition(f"{print_term(t)} is not known to be grounded")
        if claim.value is not None and claim.value != value:
            raise RuleMismatch(f"{print_term(t)} is grounded with value {print_term(value)}")
        if value != t:
            self.established.add((t, value))
        return value

    def check_not_undefined(self, claim: NotUndefinedClaim) -> None:
        t = claim.term
        self.type_of(t)
        match claim.rule:
            case "N1":
                ok = derive_grounded(t, self.context, self.established) is not None
                if not ok:
                    raise MissingSideCondition(f"{print_term(t)} is not known to be grounded")
            case "N2":
                if not isinstance(t, Ctor):
                    raise RuleMismatch(f"N2 needs a constructor application, got {print_term(t)}")
                flags = [
                    derive_not_undefined(a, self.context, self.core, self.not_undefined, self.established)
                    for a in t.args
                ]
                if self.core.apply(t.name, flags) != NATURAL:
                    raise MissingSideCondition(
                        f"the core type does not make {print_term(t)} defined from its arguments"
                    )
            case _:
                raise RuleMismatch(f"unknown rule {claim.rule!r}")
        self.not_undefined.add(t)

    def connected(self, lhs: Term, rhs: Term) -> bool:
        """Whether the established equivalences chain ``lhs`` to ``rhs``."""
        if lhs == rhs:
            return True
        neighbours = {}
        for a, b in self.established:
            neighbours.setdefault(a, set()).add(b)
            neighbours.setdefault(b, set()).add(a)
        seen, frontier = {lhs}, [lhs]
        while frontier:
            for n in neighbours.get(frontier.pop(), ()):
                if n == rhs:
                    return True
                if n not in seen:
                    seen.add(n)
                    frontier.append(n)
        return False


def check_equiv_step(claim, context: Context, system: EquationSystem, core: CoreType,
                     established=()) -> bool:
    """Check one claim in isolation; raises on failure."""
    prover = Prover(system, core, context)
    prover.established.update(established)
    prover.check(claim)
    return True


# scripts

@dataclass(frozen=True)
class ScriptVerdict:
    ok: bool
    line: int = 0  # first failing line, 1-based; 0 when verified
    message: str = ""
    error: type | None = None
    conclusions: tuple = ()

    def __str__(self):
        if self.ok:
            return "verified"
        return f"failed at line {self.line}: {self.message}"


def check_script(text: str, system: EquationSystem, core: CoreType) -> ScriptVerdict:
    prover = Prover(system, core)
    conclusions = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            conclusion = _run_line(prover, line)
        except EqError as e:
            return ScriptVerdict(False, lineno, str(e), type(e), tuple(conclusions))
        if conclusion is not None:
            conclusions.append(conclusion)
    return ScriptVerdict(True, conclusions=tuple(conclusions))


def _run_line(prover: Prover, line: str):
    ts = TokenStream(line)
    sig = prover.system.signature
    word = ts.expect_lname("a directive")
    if word == "universal":
        name = ts.expect_lname("universal name")
        ts.expect_sym(":")
        t = parse_type(ts)
        _end(ts)
        prover.declare(name, t)
        return None
    if word == "assume":
        kind = ts.expect_lname("'grounded' or 'defined'")
        name = ts.expect_lname("universal name")
        if kind == "grounded":
            value = parse_term_tokens(ts, sig) if ts.accept_sym("=") else None
            _end(ts)
            prover.assume_grounded(name, value)
        elif kind == "defined":
            _end(ts)
            prover.assume_defined(name)
        else:
            raise DeductionError(f"unknown assumption {kind!r}")
        return None
    if word == "step":
        rule = ts.expect_uname("rule name")
        ts.expect_sym(":")
        claim = _parse_claim(ts, rule, sig)
        prover.check(claim)
        return None
    if word == "conclude":
        lhs = parse_term_tokens(ts, sig)
        ts.expect_sym("==")
        rhs = parse_term_tokens(ts, sig)
        _end(ts)
        prover.type_of(lhs), prover.type_of(rhs)
        if not prover.connected(lhs, rhs):
            raise DeductionError("conclusion does not follow from the established steps")
        return Equiv(lhs, rhs, "TRANS")
    raise DeductionError(f"unknown directive {word!r}")


def _parse_claim(ts: TokenStream, rule: str, sig):
    term = parse_term_tokens(ts, sig)
    if rule in GROUNDED_RULES:
        value = parse_term_tokens(ts, sig) if ts.accept_sym("=") else None
        _end(ts)
        return GroundedClaim(term, value, rule)
    if rule in NOT_UNDEFINED_RULES:
        _end(ts)
        return NotUndefinedClaim(term, rule)
    ts.expect_sym("==")
    rhs = parse_term_tokens(ts, sig)
    _end(ts)
    return Equiv(term, rhs, rule)


def _end(ts: TokenStream):
    if not ts.at_eof():
        ts.fail("unexpected trailing input")
