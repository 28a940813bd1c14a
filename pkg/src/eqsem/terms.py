"""Terms of the basic term algebras: representation, typing, printing, parsing.

Three node kinds cover the concrete language:

* ``Ctor(name, args)``: a constructor applied to exactly its arguments.  An
  integer literal is ``Ctor(n)`` with ``n`` a Python ``int``.
* ``App(head, args)``: an equation name, primitive or local applied to an
  initial segment of its arguments.  A bare name is ``App(name)``.
* ``Case(scrutinee, branches)``: full application of a case primitive;
  ``branches`` pairs each constructor of the scrutinee type with a term of
  type ``argtypes -> result`` (or ``result`` for nullary constructors).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .errors import (
    ArgTypeMismatch,
    ArityExceeded,
    BranchTypeMismatch,
    CaseOnIneligibleType,
    ConstructorArity,
    ExtraBranch,
    MissingBranch,
    NameClash,
    NotApplicable,
    NotGroundTyped,
    ParseError,
    UnboundName,
)
from .lexer import KEYWORDS, TokenStream
from .signature import BOOL, INT, FnType, Signature, Type, arg_types, drop_args, format_type


@dataclass(frozen=True, repr=False)
class Ctor:
    name: Union[str, int]
    args: tuple = ()

    def __repr__(self):
        return f"`{print_term(self)}`"


@dataclass(frozen=True, repr=False)
class App:
    head: str
    args: tuple = ()

    def __repr__(self):
        return f"`{print_term(self)}`"


@dataclass(frozen=True, repr=False)
class Case:
    scrutinee: "Term"
    branches: tuple  # ((constructor name, Term), ...)

    def branch(self, ctor: str) -> "Term":
        for name, body in self.branches:
            if name == ctor:
                return body
        raise KeyError(ctor)

    def __repr__(self):
        return f"`{print_term(self)}`"


Term = Union[Ctor, App, Case]


def lit(n: int) -> Ctor:
    return Ctor(n)


def is_literal(t) -> bool:
    return isinstance(t, Ctor) and type(t.name) is int


# environments

PRIMITIVES = {
    "add": FnType((INT, INT), INT),
    "sub": FnType((INT, INT), INT),
    "mul": FnType((INT, INT), INT),
    "eq": FnType((INT, INT), BOOL),
    "neq": FnType((INT, INT), BOOL),
    "le": FnType((INT, INT), BOOL),
    "ge": FnType((INT, INT), BOOL),
}


class TypeEnv:
    """Types of equation names, primitives and in-scope locals.

    The three name sets must be pairwise disjoint.
    """

    def __init__(self, globals_=None, locals_=None):
        self.globals = dict(globals_ or {})
        self.locals = dict(locals_ or {})
        for name in self.globals:
            if name in PRIMITIVES:
                raise NameClash(f"{name!r} is a primitive and cannot be redefined")
        for name in self.locals:
            if name in PRIMITIVES or name in self.globals:
                raise NameClash(f"local {name!r} clashes with a global or primitive name")

    def lookup(self, name: str):
        if name in self.locals:
            return self.locals[name]
        if name in self.globals:
            return self.globals[name]
        return PRIMITIVES.get(name)

    def with_locals(self, bindings) -> "TypeEnv":
        merged = dict(self.locals)
        merged.update(bindings)
        return TypeEnv(self.globals, merged)

    def is_local(self, name: str) -> bool:
        return name in self.locals


# typing

def infer_type(t: Term, env: TypeEnv, sig: Signature) -> Type:
    match t:
        case Ctor(name, args) if type(name) is int:
            if args:
                raise ConstructorArity(f"integer literal {name} takes no arguments")
            return INT
        case Ctor(name, args):
            if not sig.has_constructor(name):
                raise UnboundName(f"unknown constructor {name!r}")
            decl = sig.constructor(name)
            if len(args) != decl.arity:
                raise ConstructorArity(
                    f"constructor {name} expects {decl.arity} arguments, got {len(args)}"
                )
            for a, expected in zip(args, decl.arg_types):
                _check(a, expected, env, sig, name)
            return decl.result_type
        case App(head, args):
            head_type = env.lookup(head)
            if head_type is None:
                raise UnboundName(f"unbound name {head!r}")
            params = arg_types(head_type)
            if len(args) > len(params):
                raise ArityExceeded(
                    f"{head} takes at most {len(params)} arguments, got {len(args)}"
                )
            for a, expected in zip(args, params):
                _check(a, expected, env, sig, head)
            return drop_args(head_type, len(args))
        case Case(scrutinee, branches):
            return _infer_case(scrutinee, branches, env, sig)
    raise TypeError(f"not a term: {t!r}")


def _check(arg, expected, env, sig, where):
    actual = infer_type(arg, env, sig)
    if actual != expected:
        raise ArgTypeMismatch(
            f"argument {print_term(arg)} of {where} has type {format_type(actual)},"
            f" expected {format_type(expected)}"
        )


def _infer_case(scrutinee, branches, env, sig) -> str:
    stype = infer_type(scrutinee, env, sig)
    if isinstance(stype, FnType) or stype == INT:
        raise CaseOnIneligibleType(f"cannot case on a value of type {format_type(stype)}")
    ctors = sig.constructors_of(stype)
    given = [name for name, _ in branches]
    if len(set(given)) != len(given):
        raise ExtraBranch("duplicate case branch")
    declared = {c.name for c in ctors}
    extra = [n for n in given if n not in declared]
    if extra:
        raise ExtraBranch(f"branch {extra[0]} is not a constructor of {stype}")
    missing = [c.name for c in ctors if c.name not in given]
    if missing:
        raise MissingBranch(f"no branch for constructor {missing[0]} of {stype}")
    body_of = dict(branches)
    result = None
    for c in ctors:
        btype = infer_type(body_of[c.name], env, sig)
        if c.arity == 0:
            if isinstance(btype, FnType):
                raise BranchTypeMismatch(
                    f"branch {c.name} must have a ground type, got {format_type(btype)}"
                )
            r = btype
        else:
            if not isinstance(btype, FnType) or btype.args != c.arg_types:
                want = " ".join(c.arg_types)
                raise BranchTypeMismatch(
                    f"branch {c.name} must have type {want} -> _, got {format_type(btype)}"
                )
            r = btype.result
        if result is None:
            result = r
        elif r != result:
            raise BranchTypeMismatch(f"case branches disagree: {result} vs {r}")
    return result


# structure

def is_ground(t: Term) -> bool:
    return isinstance(t, Ctor) and all(is_ground(a) for a in t.args)


@dataclass(frozen=True)
class KTerm:
    ctor: Union[str, int]
    args: tuple

    def rebuild(self) -> Term:
        return Ctor(self.ctor, self.args)


@dataclass(frozen=True)
class ATerm:
    head: str
    args: tuple

    def rebuild(self) -> Term:
        return App(self.head, self.args)


@dataclass(frozen=True)
class BareName:
    name: str

    def rebuild(self) -> Term:
        return App(self.name)


@dataclass(frozen=True)
class CaseTerm:
    scrutinee: Term
    branches: tuple

    def rebuild(self) -> Term:
        return Case(self.scrutinee, self.branches)


def decompose(t: Term, env: TypeEnv | None = None):
    """Classify a ground-typed term as constructor-, application- or name-rooted.

    With an environment, partial applications are rejected.
    """
    match t:
        case Ctor(name, args):
            return KTerm(name, args)
        case Case(scrutinee, branches):
            return CaseTerm(scrutinee, branches)
        case App(head, args):
            if env is not None:
                head_type = env.lookup(head)
                if head_type is None:
                    raise UnboundName(f"unbound name {head!r}")
                if len(args) < len(arg_types(head_type)):
                    raise NotGroundTyped(f"{print_term(t)} is a partial application")
            return ATerm(head, args) if args else BareName(head)
    raise TypeError(f"not a term: {t!r}")


def apply_flatten(f: Term, extra, env: TypeEnv | None = None) -> Term:
    """Apply a (partial) application to further arguments by appending them."""
    extra = tuple(extra)
    if not extra:
        return f
    if not isinstance(f, App):
        raise NotApplicable(f"{print_term(f)} cannot be applied to arguments")
    if env is not None:
        head_type = env.lookup(f.head)
        if head_type is None:
            raise UnboundName(f"unbound name {f.head!r}")
        if len(f.args) + len(extra) > len(arg_types(head_type)):
            raise ArityExceeded(f"too many arguments for {f.head}")
    return App(f.head, f.args + extra)


def size(t: Term) -> int:
    match t:
        case Ctor(_, args) | App(_, args):
            return 1 + sum(size(a) for a in args)
        case Case(s, branches):
            return 1 + size(s) + sum(size(b) for _, b in branches)
    raise TypeError(t)


# printing

def print_term(t: Term) -> str:
    match t:
        case Ctor(name, ()) | App(name, ()):
            return str(name)
        case Ctor(name, args) | App(name, args):
            return " ".join([str(name)] + [_atom(a) for a in args])
        case Case(scrutinee, branches):
            arms = ", ".join(f"{k} -> {print_term(b)}" for k, b in branches)
            return f"case {_atom(scrutinee)} of {{ {arms} }}"
    raise TypeError(f"not a term: {t!r}")


def _atom(t: Term) -> str:
    text = print_term(t)
    if isinstance(t, Case) or (isinstance(t, (Ctor, App)) and t.args):
        return f"({text})"
    return text


# parsing

def parse_term(text: str, env: TypeEnv | None = None, sig: Signature | None = None) -> Term:
    """Parse a term; with ``sig`` branches are put in declaration order,
    and with both ``env`` and ``sig`` the term is also type-checked."""
    ts = TokenStream(text)
    t = parse_term_tokens(ts, sig)
    if not ts.at_eof():
        ts.fail("unexpected trailing input")
    if env is not None and sig is not None:
        infer_type(t, env, sig)
    return t


def parse_term_tokens(ts: TokenStream, sig: Signature | None = None) -> Term:
    head_tok = ts.peek()
    head = _parse_atom(ts, sig)
    args = []
    while _starts_atom(ts):
        args.append(_parse_atom(ts, sig))
    if not args:
        return head
    match head:
        case Ctor(name, hargs) if type(name) is not int:
            return Ctor(name, hargs + tuple(args))
        case App(name, hargs):
            return App(name, hargs + tuple(args))
    raise ParseError("only names can be applied to arguments", head_tok.line, head_tok.col)


def _starts_atom(ts: TokenStream) -> bool:
    tok = ts.peek()
    if tok.kind in ("int", "uname"):
        return True
    if tok.kind == "lname":
        return tok.text not in KEYWORDS or tok.text == "case"
    return tok.kind == "sym" and tok.text == "("


def _parse_atom(ts: TokenStream, sig) -> Term:
    tok = ts.peek()
    if tok.kind == "int":
        ts.next()
        return Ctor(int(tok.text))
    if tok.kind == "uname":
        ts.next()
        return Ctor(tok.text)
    if tok.kind == "lname" and tok.text == "case":
        return _parse_case(ts, sig)
    if tok.kind == "lname" and tok.text not in KEYWORDS:
        ts.next()
        return App(tok.text)
    if ts.accept_sym("("):
        t = parse_term_tokens(ts, sig)
        ts.expect_sym(")")
        return t
    ts.fail("expected a term")


def _parse_case(ts: TokenStream, sig) -> Case:
    ts.expect_keyword("case")
    scrutinee = parse_term_tokens(ts, sig)
    ts.expect_keyword("of")
    ts.expect_sym("{")
    branches = []
    while True:
        name = ts.expect_uname()
        ts.expect_sym("->")
        branches.append((name, parse_term_tokens(ts, sig)))
        if not ts.accept_sym(","):
            break
    ts.expect_sym("}")
    return Case(scrutinee, canonical_branches(branches, sig))


def canonical_branches(branches, sig: Signature | None) -> tuple:
    """Order branches by constructor declaration order when all are known."""
    branches = tuple(branches)
    if sig is None or not all(sig.has_constructor(n) for n, _ in branches):
        return branches
    order = {c.name: i for i, c in enumerate(sig.constructors)}
    return tuple(sorted(branches, key=lambda b: order[b[0]]))
