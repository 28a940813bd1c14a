"""Seeded random generation of well-typed terms and equation systems.

Generated programs are terminating by construction: an equation may only
call equations defined before it, except for countdown equations, whose
single recursive call decrements an integer argument that the equation
tests first.  An optional ``bottom = bottom`` equation lets lazy and
eager evaluation part ways without making any program ill-typed.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .equations import EquationDef, EquationSystem, canonicalize
from .signature import BOOL, INT, FnType, Signature, Type, arg_types, parse_signature, result_type
from .terms import PRIMITIVES, App, Case, Ctor, Term, TypeEnv, lit

DEFAULT_DATA = """
data nat = Zero | Succ nat ;
data pair = Pair int int ;
data list = Nil | Cons int list ;
"""


def default_signature() -> Signature:
    return parse_signature(DEFAULT_DATA)


def min_heights(sig: Signature) -> dict:
    """Least constructor-nesting depth of a ground term of each type."""
    height = {INT: 0}
    changed = True
    while changed:
        changed = False
        for c in sig.constructors:
            if all(a in height for a in c.arg_types):
                h = 1 + max((height[a] for a in c.arg_types), default=-1)
                if h < height.get(c.result_type, h + 1):
                    height[c.result_type] = h
                    changed = True
    return height


class TermGen:
    """Random terms over a signature and a typing environment.

    ``callable`` restricts which global names may head an application;
    ``self_call`` is ``(name, counter)`` for a countdown equation that may
    call itself with its counter decremented.
    """

    def __init__(self, rng: random.Random, sig: Signature, env: TypeEnv, *,
                 callable=None, self_call=None, int_range=(-2, 4), case_weight=2):
        self.rng = rng
        self.sig = sig
        self.env = env
        self.callable = set(env.globals) if callable is None else set(callable)
        self.self_call = self_call
        self.self_calls_left = 1 if self_call else 0
        self.int_range = int_range
        self.case_weight = case_weight
        self.heights = min_heights(sig)

    # ground types

    def ground(self, ty: str, depth: int) -> Term:
        if depth <= 0:
            return self._leaf(ty)
        options = [(3, self._ctor), (1, self._leaf)]
        if ty in (INT, BOOL):
            options.append((2, self._intop))
        if self._calls_with_result(ty) or self._self_call_ok(ty):
            options.append((3, self._call))
        if self.case_weight:
            options.append((self.case_weight, self._case))
        while options:
            weights = [w for w, _ in options]
            i = self.rng.choices(range(len(options)), weights)[0]
            t = options[i][1](ty, depth)
            if t is not None:
                return t
            options.pop(i)
        return self._leaf(ty)

    def _leaf(self, ty, depth=0):
        locals_ = [n for n, t in self.env.locals.items() if t == ty]
        nullary = [n for n in self.callable if self.env.globals.get(n) == ty]
        r = self.rng.random()
        if locals_ and r < 0.5:
            return App(self.rng.choice(sorted(locals_)))
        if nullary and r < 0.6:
            return App(self.rng.choice(sorted(nullary)))
        return self._smallest(ty)

    def _smallest(self, ty):
        if ty == INT:
            return lit(self.rng.randint(*self.int_range))
        ctors = [c for c in self.sig.constructors_of(ty)
                 if all(self.heights[a] < self.heights[ty] for a in c.arg_types)]
        c = self.rng.choice(ctors)
        return Ctor(c.name, tuple(self._smallest(a) for a in c.arg_types))

    def _ctor(self, ty, depth):
        if ty == INT:
            return lit(self.rng.randint(*self.int_range))
        c = self.rng.choice(self.sig.constructors_of(ty))
        return Ctor(c.name, tuple(self.ground(a, depth - 1) for a in c.arg_types))

    def _intop(self, ty, depth):
        ops = sorted(n for n, t in PRIMITIVES.items() if t.result == ty)
        op = self.rng.choice(ops)
        return App(op, (self.ground(INT, depth - 1), self.ground(INT, depth - 1)))

    def _calls_with_result(self, ty):
        return sorted(
            n for n in self.callable
            if isinstance(self.env.globals[n], FnType) and self.env.globals[n].result == ty
        )

    def _self_call_ok(self, ty):
        return self.self_calls_left > 0 and result_type(self.env.globals[self.self_call[0]]) == ty

    def _call(self, ty, depth):
        names = self._calls_with_result(ty)
        if self._self_call_ok(ty) and (not names or self.rng.random() < 0.4):
            name, counter = self.self_call
            args = self._args(arg_types(self.env.globals[name])[1:], depth)
            if args is None:
                return None
            self.self_calls_left -= 1
            return App(name, (App("sub", (App(counter), lit(1))),) + args)
        if not names:
            return None
        name = self.rng.choice(names)
        args = self._args(self.env.globals[name].args, depth)
        return None if args is None else App(name, args)

    def _args(self, types, depth):
        out = []
        for t in types:
            a = self.ground(t, depth - 1) if isinstance(t, str) else self.functional(t, depth - 1)
            if a is None:
                return None
            out.append(a)
        return tuple(out)

    def _case(self, ty, depth):
        thetas = [t for t in self.sig.ground_types if t != INT]
        theta = self.rng.choice(thetas)
        branches = []
        for c in self.sig.constructors_of(theta):
            if c.arity == 0:
                branches.append((c.name, self.ground(ty, depth - 1)))
            else:
                b = self.functional(FnType(c.arg_types, ty), depth - 1)
                if b is None:
                    return None
                branches.append((c.name, b))
        return Case(self.ground(theta, depth - 1), tuple(branches))

    # functional types

    def functional(self, fty: FnType, depth: int) -> Term | None:
        """A name, possibly applied to some leading arguments, of type ``fty``."""
        candidates = []
        heads = [(n, t) for n, t in self.env.locals.items()]
        heads += [(n, self.env.globals[n]) for n in sorted(self.callable)]
        heads += sorted(PRIMITIVES.items())
        for name, t in heads:
            if not isinstance(t, FnType) or t.result != fty.result:
                continue
            k = len(t.args) - len(fty.args)
            if k >= 0 and t.args[k:] == fty.args:
                candidates.append((name, t.args[:k]))
        if not candidates:
            return None
        name, prefix = self.rng.choice(candidates)
        args = self._args(prefix, max(depth, 1))
        return None if args is None else App(name, args)


# programs

GROUND_POOL = (INT, INT, BOOL, "list", "list", "nat", "pair")


@dataclass(frozen=True)
class GeneratedProgram:
    system: EquationSystem
    terms: tuple  # closed ground-typed terms to evaluate

    @property
    def signature(self) -> Signature:
        return self.system.signature


def random_program(seed: int, sig: Signature | None = None, *, n_equations=(2, 6),
                   n_terms: int = 3, depth: int = 3, with_bottom=None,
                   with_countdown=None) -> GeneratedProgram:
    rng = random.Random(seed)
    sig = sig or default_signature()
    pool = [t for t in GROUND_POOL if sig.has_type(t)]
    shapes = [c.arg_types for c in sig.constructors if c.arity]

    names, types = [], {}
    for i in range(rng.randint(*n_equations)):
        result = rng.choice(pool)
        r = rng.random()
        if r < 0.5 and shapes:
            # shaped to serve as a case branch, maybe after a leading argument
            args = rng.choice(shapes)
            if rng.random() < 0.4:
                args = (rng.choice(pool),) + args
        elif r < 0.85:
            args = tuple(rng.choice(pool) for _ in range(rng.randint(1, 2)))
        else:
            args = ()
        name = f"f{i}"
        names.append(name)
        types[name] = FnType(tuple(args), result) if args else result

    if with_bottom is None:
        with_bottom = rng.random() < 0.5
    if with_countdown is None:
        with_countdown = rng.random() < 0.5
    countdown = None
    if with_countdown:
        extra = tuple(rng.choice(pool) for _ in range(rng.randint(0, 1)))
        countdown = "cd"
        types[countdown] = FnType((INT,) + extra, rng.choice(pool))
        names.insert(rng.randint(0, len(names)), countdown)
    if with_bottom:
        types["bottom"] = INT
        names.insert(0, "bottom")

    globals_env = TypeEnv(types)
    defs = {}
    for i, name in enumerate(names):
        t = types[name]
        params = tuple((f"x{j}", a) for j, a in enumerate(arg_types(t)))
        env = globals_env.with_locals(dict(params))
        earlier = [n for n in names[:i] if n != "bottom" or rng.random() < 0.5]
        if name == "bottom":
            body = App("bottom")
        elif name == countdown:
            body = _countdown_body(rng, sig, env, earlier, name, params, t, depth)
        else:
            gen = TermGen(rng, sig, env, callable=earlier)
            body = gen.ground(result_type(t), depth)
        defs[name] = EquationDef(name, t, params, canonicalize(body, sig))
    system = EquationSystem(sig, defs)

    gen = TermGen(rng, sig, system.env)
    terms = tuple(canonicalize(gen.ground(rng.choice(pool), depth), sig) for _ in range(n_terms))
    return GeneratedProgram(system, terms)


def _countdown_body(rng, sig, env, earlier, name, params, t, depth):
    counter = params[0][0]
    result = result_type(t)
    base = TermGen(rng, sig, env, callable=earlier).ground(result, depth - 1)
    step = TermGen(rng, sig, env, callable=earlier, self_call=(name, counter)).ground(result, depth - 1)
    test = App("le", (App(counter), lit(0)))
    return Case(test, (("True", base), ("False", step)))


def random_closed_term(seed: int, system: EquationSystem, ty: Type | None = None,
                       depth: int = 3) -> tuple[Term, str]:
    """A closed term of ground type over ``system``, with its type."""
    rng = random.Random(seed)
    sig = system.signature
    ty = ty or rng.choice([t for t in GROUND_POOL if sig.has_type(t)])
    gen = TermGen(rng, sig, system.env)
    return canonicalize(gen.ground(ty, depth), sig), ty


def random_ground_term(rng: random.Random, sig: Signature, ty: str, depth: int,
                       int_range=(-2, 4)) -> Term:
    """A constructor-only term of type ``ty`` nested at most ``depth`` deep
    (deeper only where the type forces it)."""
    if ty == INT:
        return lit(rng.randint(*int_range))
    if depth <= 0:
        gen = TermGen(rng, sig, TypeEnv(), int_range=int_range)
        return gen._smallest(ty)
    c = rng.choice(sig.constructors_of(ty))
    return Ctor(c.name, tuple(random_ground_term(rng, sig, a, depth - 1, int_range) for a in c.arg_types))
