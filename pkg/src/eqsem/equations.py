"""Equation systems: one defining right-hand side per declared name."""
from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DuplicateDefinition,
    MissingDefinition,
    NameClash,
    ProgramError,
    TypeMismatch,
    UnboundLocal,
    UnknownEquationName,
    UnknownType,
)
from .lexer import KEYWORDS, TokenStream
from .signature import (
    FnType,
    Signature,
    Type,
    arg_types,
    format_signature,
    format_type,
    parse_data_decl,
    parse_type,
    result_type,
    validate_signature,
)
from .terms import (
    PRIMITIVES,
    App,
    Case,
    Ctor,
    Term,
    TypeEnv,
    apply_flatten,
    canonical_branches,
    infer_type,
    parse_term_tokens,
    print_term,
)


@dataclass(frozen=True)
class EquationDef:
    name: str
    type: Type
    params: tuple  # ((local name, Type), ...)
    body: Term

    @property
    def param_names(self) -> tuple:
        return tuple(p for p, _ in self.params)

    def abstractor(self) -> Term:
        return App(self.name, tuple(App(p) for p in self.param_names))


class EquationSystem:
    def __init__(self, signature: Signature, defs):
        self.signature = signature
        self.defs = dict(defs)
        if not self.defs:
            raise ProgramError("a program needs at least one equation")
        self.env = TypeEnv({name: d.type for name, d in self.defs.items()})

    def __getitem__(self, name: str) -> EquationDef:
        try:
            return self.defs[name]
        except KeyError:
            raise UnknownEquationName(f"no equation named {name!r}") from None

    def __contains__(self, name) -> bool:
        return name in self.defs

    def names(self) -> list:
        return list(self.defs)

    def instantiate(self, name: str, args) -> Term:
        """Right-hand side of ``name`` with its parameters replaced by ``args``."""
        d = self.defs[name]
        return substitute(d.body, dict(zip(d.param_names, args)))

    def local_env(self, name: str) -> TypeEnv:
        return self.env.with_locals(dict(self[name].params))

    def describe(self) -> list[str]:
        lines = format_signature(self.signature)
        for d in self.defs.values():
            lines.append(f"sig {d.name} : {format_type(d.type)} ;")
        for d in self.defs.values():
            lhs = print_term(d.abstractor())
            lines.append(f"def {lhs} = {print_term(d.body)} ;")
        return lines


def abstractor(name: str, system: EquationSystem) -> Term:
    return system[name].abstractor()


def substitute(body: Term, bindings, locals_=None) -> Term:
    """Replace every occurrence of a bound local by its binding.

    A local in head position is replaced by appending the substituted
    arguments to its binding.  With ``locals_``, any local left without a
    binding is an error.
    """
    def walk(t):
        match t:
            case Ctor(name, args):
                return Ctor(name, tuple(walk(a) for a in args)) if args else t
            case App(head, args):
                new_args = tuple(walk(a) for a in args)
                if head in bindings:
                    return apply_flatten(bindings[head], new_args)
                if locals_ is not None and head in locals_:
                    raise UnboundLocal(f"no binding for local {head!r}")
                return App(head, new_args)
            case Case(scrutinee, branches):
                return Case(walk(scrutinee), tuple((k, walk(b)) for k, b in branches))
        raise TypeError(f"not a term: {t!r}")

    return walk(body)


def substitute_checked(body: Term, bindings, env: TypeEnv, sig: Signature) -> Term:
    """``substitute`` after checking each binding against the local's type."""
    for name, value in bindings.items():
        expected = env.lookup(name)
        if expected is None or not env.is_local(name):
            raise UnboundLocal(f"{name!r} is not a local")
        actual = infer_type(value, env, sig)
        if actual != expected:
            raise TypeMismatch(
                f"binding for {name} has type {format_type(actual)}, expected {format_type(expected)}"
            )
    return substitute(body, bindings, set(env.locals))


# program text

@dataclass
class _RawDef:
    name: str
    params: list
    body: Term
    line: int


def parse_program(source: str) -> tuple[Signature, EquationSystem]:
    ts = TokenStream(source)
    data_decls, sigs, raw_defs = [], {}, {}
    sig_order = []
    while not ts.at_eof():
        if ts.at_keyword("data"):
            data_decls.append(parse_data_decl(ts))
        elif ts.at_keyword("sig"):
            line = ts.next().line
            name = ts.expect_lname("equation name")
            ts.expect_sym(":")
            t = parse_type(ts)
            ts.expect_sym(";")
            if name in sigs:
                raise DuplicateDefinition(f"line {line}: {name!r} has two type signatures")
            sigs[name] = t
            sig_order.append(name)
        elif ts.at_keyword("def"):
            line = ts.next().line
            name = ts.expect_lname("equation name")
            params = []
            while not ts.at_sym("="):
                params.append(ts.expect_lname("parameter name"))
            ts.expect_sym("=")
            body = parse_term_tokens(ts)
            ts.expect_sym(";")
            if name in raw_defs:
                raise DuplicateDefinition(f"line {line}: {name!r} is defined twice")
            raw_defs[name] = _RawDef(name, params, body, line)
        else:
            ts.fail("expected 'data', 'sig' or 'def'")

    signature = validate_signature(data_decls)
    for name, t in sigs.items():
        _check_type_names(name, t, signature)
        if name in PRIMITIVES or name in KEYWORDS:
            raise NameClash(f"{name!r} is reserved")
    for name, raw in raw_defs.items():
        if name not in sigs:
            raise UnknownEquationName(f"line {raw.line}: {name!r} has no type signature")
    for name in sig_order:
        if name not in raw_defs:
            raise MissingDefinition(f"{name!r} is declared but never defined")

    globals_ = TypeEnv(sigs)
    defs = {}
    for name in sig_order:
        raw, t = raw_defs[name], sigs[name]
        expected = arg_types(t)
        if len(raw.params) != len(expected):
            raise TypeMismatch(
                f"line {raw.line}: {name} declares {len(expected)} parameters,"
                f" its definition binds {len(raw.params)}"
            )
        if len(set(raw.params)) != len(raw.params):
            raise NameClash(f"line {raw.line}: repeated parameter in {name}")
        params = tuple(zip(raw.params, expected))
        env = globals_.with_locals(dict(params))
        body = canonicalize(raw.body, signature)
        body_type = infer_type(body, env, signature)
        if body_type != result_type(t):
            raise TypeMismatch(
                f"line {raw.line}: body of {name} has type {format_type(body_type)},"
                f" expected {result_type(t)}"
            )
        defs[name] = EquationDef(name, t, params, body)
    return signature, EquationSystem(signature, defs)


def _check_type_names(name: str, t: Type, sig: Signature):
    if isinstance(t, FnType):
        for a in t.args:
            _check_type_names(name, a, sig)
        _check_type_names(name, t.result, sig)
    elif not sig.has_type(t):
        raise UnknownType(f"type of {name!r} mentions undeclared type {t!r}")


def canonicalize(t: Term, sig: Signature) -> Term:
    """Put every case's branches in constructor declaration order."""
    match t:
        case Ctor(name, args):
            return Ctor(name, tuple(canonicalize(a, sig) for a in args))
        case App(head, args):
            return App(head, tuple(canonicalize(a, sig) for a in args))
        case Case(scrutinee, branches):
            return Case(
                canonicalize(scrutinee, sig),
                canonical_branches(((k, canonicalize(b, sig)) for k, b in branches), sig),
            )
    raise TypeError(t)


def load_program(path) -> tuple[Signature, EquationSystem]:
    with open(path, encoding="utf-8") as f:
        return parse_program(f.read())
