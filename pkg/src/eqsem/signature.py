"""Ground signatures: ground types, typed constructors and the builtins.

Ground types are plain strings.  Functional types are :class:`FnType`
values whose result is always ground; a zero-argument functional type is
never built, the ground type is used instead.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

from .errors import (
    BadName,
    DuplicateConstructor,
    DuplicateType,
    NonPervasive,
    UnknownType,
)
from .lexer import TokenStream

INT = "int"
BOOL = "bool"
BUILTIN_TYPES = (BOOL, INT)
BOOL_CONSTRUCTORS = ("True", "False")


@dataclass(frozen=True)
class FnType:
    args: tuple
    result: str

    def __post_init__(self):
        if not self.args:
            raise ValueError("a functional type needs at least one argument")

    def __str__(self):
        return format_type(self)


Type = Union[str, FnType]


def format_type(t: Type) -> str:
    if isinstance(t, str):
        return t
    parts = [f"({format_type(a)})" if isinstance(a, FnType) else a for a in t.args]
    return " ".join(parts) + " -> " + t.result


def arg_types(t: Type) -> tuple:
    return t.args if isinstance(t, FnType) else ()


def result_type(t: Type) -> str:
    return t.result if isinstance(t, FnType) else t


def drop_args(t: Type, k: int) -> Type:
    """Type of a term of type ``t`` applied to its first ``k`` arguments."""
    if k == 0:
        return t
    rest = t.args[k:]
    return FnType(rest, t.result) if rest else t.result


@dataclass(frozen=True)
class ConstructorDecl:
    name: str
    arg_types: tuple
    result_type: str

    @property
    def arity(self) -> int:
        return len(self.arg_types)


def literal_decl(value: int) -> ConstructorDecl:
    return ConstructorDecl(str(value), (), INT)


@dataclass(frozen=True)
class DataDecl:
    """A raw ``data`` declaration, before validation."""

    name: str
    alternatives: tuple  # of (constructor name, tuple of arg type names)
    line: int = 0


@dataclass(frozen=True)
class Signature:
    ground_types: tuple
    constructors: tuple = field(default=())

    @cached_property
    def _by_name(self) -> dict:
        return {c.name: c for c in self.constructors}

    @cached_property
    def _by_type(self) -> dict:
        table = {t: [] for t in self.ground_types}
        for c in self.constructors:
            table[c.result_type].append(c)
        return {t: tuple(cs) for t, cs in table.items()}

    def has_type(self, name: str) -> bool:
        return name in self._by_type

    def has_constructor(self, name) -> bool:
        return type(name) is int or name in self._by_name

    def constructor(self, name) -> ConstructorDecl:
        """Look up a constructor; integer literals are synthesized on demand."""
        if type(name) is int:
            return literal_decl(name)
        return self._by_name[name]

    def constructors_of(self, type_name: str) -> tuple:
        """Constructors of a case-eligible type, in declaration order."""
        if type_name == INT:
            raise ValueError("int has infinitely many constructors")
        return self._by_type[type_name]

    def user_types(self) -> tuple:
        return tuple(t for t in self.ground_types if t not in BUILTIN_TYPES)


def builtin_signature() -> Signature:
    return Signature(
        BUILTIN_TYPES,
        tuple(ConstructorDecl(name, (), BOOL) for name in BOOL_CONSTRUCTORS),
    )


def inhabited_closure(ground_types, constructors) -> set:
    """Least closed subset of the ground types, starting from the empty set."""
    closed = {INT} if INT in ground_types else set()
    changed = True
    while changed:
        changed = False
        for c in constructors:
            if c.result_type not in closed and all(a in closed for a in c.arg_types):
                closed.add(c.result_type)
                changed = True
    return closed


def validate_signature(decls) -> Signature:
    """Check raw data declarations and combine them with the builtins."""
    builtins = builtin_signature()
    types = list(builtins.ground_types)
    ctors = list(builtins.constructors)
    for d in decls:
        if not d.name[:1].islower():
            raise BadName(f"type name {d.name!r} must start with a lowercase letter")
        if d.name in types:
            raise DuplicateType(f"type {d.name!r} is declared more than once")
        types.append(d.name)
    seen = {c.name for c in ctors}
    for d in decls:
        for name, args in d.alternatives:
            if not name[:1].isupper():
                raise BadName(f"constructor name {name!r} must start with an uppercase letter")
            if name in seen:
                raise DuplicateConstructor(f"constructor {name!r} is declared more than once")
            seen.add(name)
            for a in args:
                if a not in types:
                    raise UnknownType(f"constructor {name!r} refers to undeclared type {a!r}")
            ctors.append(ConstructorDecl(name, tuple(args), d.name))
    inhabited = inhabited_closure(types, ctors)
    if len(inhabited) != len(types):
        raise NonPervasive(set(types) - inhabited)
    return Signature(tuple(types), tuple(ctors))


def case_eligible_types(sig: Signature) -> frozenset:
    return frozenset(t for t in sig.ground_types if t != INT)


# concrete syntax

def parse_type(ts: TokenStream) -> Type:
    """``atype+ ('->' ground)?`` where an atype is a name or a parenthesized type."""
    parts = [_parse_atype(ts)]
    while ts.at("lname") or ts.at_sym("("):
        parts.append(_parse_atype(ts))
    if ts.accept_sym("->"):
        return FnType(tuple(parts), ts.expect_lname("result type"))
    if len(parts) != 1:
        ts.fail("expected '->' in functional type")
    return parts[0]


def _parse_atype(ts: TokenStream) -> Type:
    if ts.accept_sym("("):
        t = parse_type(ts)
        ts.expect_sym(")")
        return t
    return ts.expect_lname("type name")


def parse_data_decl(ts: TokenStream) -> DataDecl:
    """Parse ``data <name> = <Ctor> <type>* (| <Ctor> <type>*)* ;``."""
    line = ts.expect_keyword("data").line
    name = ts.expect_lname("type name")
    ts.expect_sym("=")
    alts = []
    while True:
        ctor = ts.expect_uname()
        args = []
        while ts.at("lname") and not ts.at_keyword("data"):
            args.append(ts.expect_lname("argument type"))
        alts.append((ctor, tuple(args)))
        if not ts.accept_sym("|"):
            break
    ts.expect_sym(";")
    return DataDecl(name, tuple(alts), line)


def parse_signature(text: str) -> Signature:
    ts = TokenStream(text)
    decls = []
    while not ts.at_eof():
        decls.append(parse_data_decl(ts))
    return validate_signature(decls)


def format_signature(sig: Signature) -> list[str]:
    """One ``data`` line per type; the builtins are shown as comments so
    the output still reads back as a signature."""
    lines = []
    for t in sig.ground_types:
        if t == INT:
            lines.append("# data int = ... | -1 | 0 | 1 | ... ;")
            continue
        alts = " | ".join(
            " ".join((c.name,) + c.arg_types) for c in sig.constructors_of(t)
        )
        prefix = "# " if t in BUILTIN_TYPES else ""
        lines.append(f"{prefix}data {t} = {alts} ;")
    return lines
