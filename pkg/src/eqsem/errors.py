"""Exception hierarchy shared by every stage of the interpreter."""
from __future__ import annotations


class EqError(Exception):
    """Base class for all errors raised while loading or checking a program."""


class ParseError(EqError):
    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        if line:
            message = f"{line}:{col}: {message}"
        super().__init__(message)


# signature validation

class SignatureError(EqError):
    pass


class DuplicateType(SignatureError):
    pass


class DuplicateConstructor(SignatureError):
    pass


class UnknownType(SignatureError):
    pass


class NonPervasive(SignatureError):
    def __init__(self, empty_types):
        self.empty_types = frozenset(empty_types)
        names = ", ".join(sorted(self.empty_types))
        super().__init__(f"signature is not pervasive; uninhabited types: {names}")


class BadName(SignatureError):
    pass


# typing of terms

class TypeCheckError(EqError):
    pass


class UnboundName(TypeCheckError):
    pass


class ArityExceeded(TypeCheckError):
    pass


class ConstructorArity(TypeCheckError):
    pass


class ArgTypeMismatch(TypeCheckError):
    pass


class CaseOnIneligibleType(TypeCheckError):
    pass


class MissingBranch(TypeCheckError):
    pass


class ExtraBranch(TypeCheckError):
    pass


class BranchTypeMismatch(TypeCheckError):
    pass


class NotGroundTyped(TypeCheckError):
    pass


class NotApplicable(TypeCheckError):
    pass


# equation systems

class ProgramError(EqError):
    pass


class MissingDefinition(ProgramError):
    pass


class DuplicateDefinition(ProgramError):
    pass


class UnknownEquationName(ProgramError):
    pass


class UnboundLocal(ProgramError):
    pass


class TypeMismatch(ProgramError):
    pass


class NameClash(ProgramError):
    pass


# evaluation

class NotGroundOperand(EqError):
    pass


# core types

class CoreError(EqError):
    pass


# deduction

class DeductionError(EqError):
    pass


class RuleMismatch(DeductionError):
    pass


class MissingSideCondition(DeductionError):
    pass


class SubstitutionMismatch(DeductionError):
    pass


class ReductionError(EqError):
    """A term reached a shape one step of reduction cannot handle;
    only possible for input that skipped validation."""
