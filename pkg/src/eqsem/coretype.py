"""Monotone core types, bottomed ground terms and support-system membership.

A core type assigns each constructor a flag function over {FLAT, NATURAL}
telling whether the constructor applied to possibly-undefined arguments is
itself defined.  Eager evaluation is the all-strict core, fully lazy
evaluation the constant-natural core.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

from .errors import CoreError
from .lexer import TokenStream
from .signature import Signature
from .terms import App, Case, Ctor, Term


class Flag(enum.IntEnum):
    FLAT = 0
    NATURAL = 1

    def __str__(self):
        return "natural" if self else "flat"


FLAT, NATURAL = Flag.FLAT, Flag.NATURAL


# flag specifications

@dataclass(frozen=True)
class StrictAll:
    def __call__(self, flags) -> Flag:
        return NATURAL if all(flags) else FLAT

    def __str__(self):
        return "strict(all)"


@dataclass(frozen=True)
class StrictNone:
    def __call__(self, flags) -> Flag:
        return NATURAL

    def __str__(self):
        return "none"


@dataclass(frozen=True)
class StrictIn:
    """Strict in the given argument positions (1-based)."""

    positions: frozenset

    def __call__(self, flags) -> Flag:
        return NATURAL if all(flags[p - 1] for p in self.positions) else FLAT

    def __str__(self):
        return "strict(" + ", ".join(str(p) for p in sorted(self.positions)) + ")"


@dataclass(frozen=True)
class AnyOf:
    def __call__(self, flags) -> Flag:
        return NATURAL if any(flags) else FLAT

    def __str__(self):
        return "anyof"


@dataclass(frozen=True)
class Table:
    """Explicit truth table, keyed by tuples of flags.  Only for testing
    the monotonicity check; core files cannot express it."""

    rows: tuple  # ((tuple of flags, flag), ...)

    def __call__(self, flags) -> Flag:
        return dict(self.rows)[tuple(Flag(f) for f in flags)]

    def __str__(self):
        return "table"


@dataclass(frozen=True)
class CoreType:
    mode: str
    specs: dict = field(default_factory=dict, hash=False)
    default: object = StrictNone()

    def spec(self, ctor):
        if type(ctor) is int:
            return StrictAll()
        return self.specs.get(ctor, self.default)

    def apply(self, ctor, flags) -> Flag:
        """The flag function of ``ctor``; nullary constructors are always natural."""
        if not flags:
            return NATURAL
        return Flag(self.spec(ctor)(tuple(flags)))


def is_product_type(sig: Signature, type_name: str) -> bool:
    ctors = sig.constructors_of(type_name)
    if len(ctors) != 1:
        return False
    (c,) = ctors
    return c.arity >= 2 and all(a != type_name for a in c.arg_types)


def builtin_core(mode: str, sig: Signature) -> CoreType:
    if mode == "eager":
        return CoreType("eager", {c.name: StrictAll() for c in sig.constructors}, StrictAll())
    if mode == "lazy":
        return CoreType("lazy", {c.name: StrictNone() for c in sig.constructors}, StrictNone())
    if mode == "miranda":
        specs = {}
        for c in sig.constructors:
            product = is_product_type(sig, c.result_type)
            specs[c.name] = AnyOf() if product else StrictNone()
        return CoreType("miranda", specs, StrictNone())
    raise CoreError(f"unknown semantics {mode!r}")


def check_monotone(core: CoreType, sig: Signature) -> bool:
    """Brute-force monotonicity and the all-natural axiom for every constructor."""
    for c in sig.constructors:
        n = c.arity
        if n == 0:
            continue
        fn = core.spec(c.name)
        points = list(itertools.product((FLAT, NATURAL), repeat=n))
        try:
            values = {p: Flag(fn(p)) for p in points}
        except (KeyError, IndexError):
            return False
        if values[(NATURAL,) * n] != NATURAL:
            return False
        for b, b2 in itertools.product(points, repeat=2):
            if all(x <= y for x, y in zip(b, b2)) and values[b] > values[b2]:
                return False
    return True


# bottomed ground terms

@dataclass(frozen=True, repr=False)
class Bottom:
    type: str

    def __repr__(self):
        return f"`⊥{self.type}`"


def print_bottomed(b) -> str:
    match b:
        case Bottom():
            return "⊥"
        case Ctor(name, ()):
            return str(name)
        case Ctor(name, args):
            parts = [str(name)]
            for a in args:
                text = print_bottomed(a)
                parts.append(f"({text})" if isinstance(a, Ctor) and a.args else text)
            return " ".join(parts)
    raise TypeError(b)


def omega(t: Term, sig: Signature | None = None, type_name: str = "?"):
    """Bottomed ground skeleton of a term: every subterm that is not
    constructor-rooted becomes bottom.  With a signature, each bottom is
    labelled with the type its position forces."""
    if isinstance(t, Ctor):
        if sig is None:
            return Ctor(t.name, tuple(omega(a) for a in t.args))
        decl = sig.constructor(t.name)
        return Ctor(t.name, tuple(omega(a, sig, ty) for a, ty in zip(t.args, decl.arg_types)))
    if isinstance(t, (App, Case)):
        return Bottom(type_name)
    raise TypeError(t)


def trace_member(b, core: CoreType) -> Flag:
    match b:
        case Bottom():
            return FLAT
        case Ctor(name, args):
            return core.apply(name, [trace_member(a, core) for a in args])
    raise TypeError(b)


def in_support(t: Term, core: CoreType) -> bool:
    return _support_flag(t, core) == NATURAL


def _support_flag(t: Term, core: CoreType) -> Flag:
    if isinstance(t, Ctor):
        return core.apply(t.name, [_support_flag(a, core) for a in t.args])
    return FLAT


def support_via_trace(t: Term, core: CoreType) -> bool:
    return trace_member(omega(t), core) == NATURAL


# core files

def parse_core(text: str, sig: Signature) -> CoreType:
    """Read ``core { Cons = strict(1) ; Pair = anyof ; Succ = strict(all) }``."""
    ts = TokenStream(text)
    ts.expect_keyword("core")
    ts.expect_sym("{")
    specs = {c.name: StrictNone() for c in sig.constructors}
    while not ts.at_sym("}"):
        tok = ts.peek()
        name = ts.expect_uname()
        if not sig.has_constructor(name):
            raise CoreError(f"line {tok.line}: unknown constructor {name!r}")
        ts.expect_sym("=")
        specs[name] = _parse_spec(ts, sig.constructor(name).arity)
        if not ts.accept_sym(";"):
            break
    ts.expect_sym("}")
    if not ts.at_eof():
        ts.fail("unexpected trailing input")
    core = CoreType("custom", specs, StrictNone())
    if not check_monotone(core, sig):
        raise CoreError("core type is not monotone")
    return core


def _parse_spec(ts: TokenStream, arity: int):
    word = ts.expect_lname("flag specification")
    if word == "anyof":
        return AnyOf()
    if word in ("none", "lazy"):
        return StrictNone()
    if word != "strict":
        raise CoreError(f"unknown flag specification {word!r}")
    ts.expect_sym("(")
    if ts.at_keyword("all"):
        ts.next()
        ts.expect_sym(")")
        return StrictAll()
    positions = set()
    while not ts.at_sym(")"):
        tok = ts.next()
        if tok.kind != "int" or not 1 <= int(tok.text) <= arity:
            raise CoreError(f"line {tok.line}: bad argument position {tok.text!r}")
        positions.add(int(tok.text))
        if not ts.accept_sym(","):
            break
    ts.expect_sym(")")
    return StrictIn(frozenset(positions))


def format_core(core: CoreType, sig: Signature) -> str:
    parts = [f"{c.name} = {core.spec(c.name)}" for c in sig.constructors if c.arity]
    return "core { " + " ; ".join(parts) + " }"


def describe_support(t: Term, core: CoreType) -> str:
    flag = NATURAL if in_support(t, core) else FLAT
    verdict = "in support" if flag else "not in support"
    return f"{flag} / {verdict}"

