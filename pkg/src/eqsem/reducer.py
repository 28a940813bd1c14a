"""One-step parallel reduction, iteration to a value, and cross-core comparison.

``phi_step`` rewrites every redex it can see at once:

* a constructor application steps each argument;
* a saturated equation-name application becomes the instantiated body
  (its arguments are copied, never reduced first);
* a case fires only when its scrutinee is in the support system of the
  core type, otherwise the scrutinee steps;
* an integer operator evaluates once both operands are literals,
  otherwise both operands step.

When nothing changes, the very same object is returned, so fixed points
are cheap to spot.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .coretype import CoreType, in_support
from .equations import EquationSystem
from .errors import NotGroundOperand, ReductionError
from .terms import App, Case, Ctor, Term, apply_flatten, is_ground, is_literal, print_term

ARITHMETIC = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
}
RELATIONS = {
    "eq": lambda a, b: a == b,
    "neq": lambda a, b: a != b,
    "le": lambda a, b: a <= b,
    "ge": lambda a, b: a >= b,
}
INTOPS = ARITHMETIC.keys() | RELATIONS.keys()

TRUE, FALSE = Ctor("True"), Ctor("False")


def eval_intop(op: str, lhs: Term, rhs: Term) -> Ctor:
    if not (is_literal(lhs) and is_literal(rhs)):
        raise NotGroundOperand(f"{op} needs two integer literals, got {lhs!r} and {rhs!r}")
    if op in ARITHMETIC:
        return Ctor(ARITHMETIC[op](lhs.name, rhs.name))
    if op in RELATIONS:
        return TRUE if RELATIONS[op](lhs.name, rhs.name) else FALSE
    raise NotGroundOperand(f"{op!r} is not an integer operator")


def phi_step(t: Term, system: EquationSystem, core: CoreType) -> Term:
    match t:
        case Ctor(name, args):
            if not args:
                return t
            stepped = tuple(phi_step(a, system, core) for a in args)
            if all(new is old for new, old in zip(stepped, args)):
                return t
            return Ctor(name, stepped)
        case App(head, args) if head in system.defs:
            d = system.defs[head]
            if len(args) != len(d.params):
                raise ReductionError(f"partial application {print_term(t)} in ground position")
            return system.instantiate(head, args)
        case App(head, (lhs, rhs)) if head in INTOPS:
            if is_literal(lhs) and is_literal(rhs):
                return eval_intop(head, lhs, rhs)
            l2, r2 = phi_step(lhs, system, core), phi_step(rhs, system, core)
            if l2 is lhs and r2 is rhs:
                return t
            return App(head, (l2, r2))
        case Case(scrutinee, branches):
            if in_support(scrutinee, core):
                return apply_flatten(t.branch(scrutinee.name), scrutinee.args)
            stepped = phi_step(scrutinee, system, core)
            return t if stepped is scrutinee else Case(stepped, branches)
    raise ReductionError(f"cannot step {print_term(t)}")


# iteration

@dataclass(frozen=True)
class ReduceConfig:
    core: CoreType
    fuel: int = 100_000
    record_trace: bool = False
    detect_cycles: int = 0  # window of recent iterates to remember; 0 disables

    def __post_init__(self):
        if self.fuel < 1:
            raise ValueError("fuel must be at least 1")


@dataclass(frozen=True)
class Value:
    result: Term
    steps: int
    trace: tuple = field(default=(), repr=False, compare=False)


@dataclass(frozen=True)
class Stuck:
    """No ground iterate is ever reached: iterate ``steps`` recurs after
    ``period`` further steps (period 1 is a fixed point)."""

    term: Term
    steps: int
    trace: tuple = field(default=(), repr=False, compare=False)
    period: int = 1


@dataclass(frozen=True)
class OutOfFuel:
    last_term: Term
    fuel: int
    trace: tuple = field(default=(), repr=False, compare=False)


Outcome = Value | Stuck | OutOfFuel


def reduce(t: Term, system: EquationSystem, config: ReduceConfig) -> Outcome:
    trace = [t] if config.record_trace else None
    recent = {}  # iterate -> index, oldest first
    current = t
    for n in range(config.fuel + 1):
        if is_ground(current):
            return Value(current, n, _freeze(trace))
        if n == config.fuel:
            return OutOfFuel(current, config.fuel, _freeze(trace))
        successor = phi_step(current, system, config.core)
        if successor is current or successor == current:
            return Stuck(current, n, _freeze(trace))
        if config.detect_cycles:
            recent[current] = n
            if len(recent) > config.detect_cycles:
                del recent[next(iter(recent))]
            first = recent.get(successor)
            if first is not None:
                if trace is not None:
                    trace.append(successor)
                return Stuck(successor, first, _freeze(trace), period=n + 1 - first)
        if trace is not None:
            trace.append(successor)
        current = successor
    raise AssertionError("unreachable")


def _freeze(trace):
    return tuple(trace) if trace is not None else ()


def outcome_summary(outcome: Outcome) -> str:
    match outcome:
        case Value(result, steps):
            return f"value {print_term(result)} after {steps} steps"
        case Stuck(term, steps, _, 1):
            return f"stuck at step {steps}: {print_term(term)}"
        case Stuck(term, steps, _, period):
            return f"stuck at step {steps} (cycle of period {period}): {print_term(term)}"
        case OutOfFuel(last, fuel):
            return f"out of fuel after {fuel} steps: {print_term(last)}"
    raise TypeError(outcome)


# differential checking

@dataclass(frozen=True)
class Violation:
    first: str
    second: str
    first_value: Term
    second_value: Term


@dataclass(frozen=True)
class DifferentialReport:
    outcomes: dict  # core label -> Outcome
    violations: tuple

    @property
    def agreed(self) -> bool:
        return not self.violations

    @property
    def values(self) -> dict:
        return {k: o.result for k, o in self.outcomes.items() if isinstance(o, Value)}


def differential(t: Term, system: EquationSystem, cores, fuel: int = 100_000) -> DifferentialReport:
    """Reduce ``t`` under each core; two cores that both produce a value must agree."""
    cores = list(cores)
    if len(cores) < 2:
        raise ValueError("differential checking needs at least two cores")
    labels = _labels(cores)
    outcomes = {
        label: reduce(t, system, ReduceConfig(core, fuel)) for label, core in zip(labels, cores)
    }
    violations = []
    valued = [(k, o.result) for k, o in outcomes.items() if isinstance(o, Value)]
    for i, (a, va) in enumerate(valued):
        for b, vb in valued[i + 1:]:
            if va != vb:
                violations.append(Violation(a, b, va, vb))
    return DifferentialReport(outcomes, tuple(violations))


def _labels(cores) -> list[str]:
    labels, counts = [], {}
    for core in cores:
        counts[core.mode] = counts.get(core.mode, 0) + 1
        n = counts[core.mode]
        labels.append(core.mode if n == 1 else f"{core.mode}#{n}")
    return labels
