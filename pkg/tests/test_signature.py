from __future__ import annotations

import pytest

from eqsem.errors import BadName, DuplicateConstructor, DuplicateType, NonPervasive, ParseError, UnknownType
from eqsem.lexer import TokenStream
from eqsem.signature import (
    BOOL,
    INT,
    FnType,
    arg_types,
    case_eligible_types,
    drop_args,
    format_signature,
    format_type,
    parse_signature,
    parse_type,
    result_type,
)

LISTS = "data nat = Zero | Succ nat ; data list = Nil | Cons int list ;"


def test_builtins_always_present():
    sig = parse_signature("")
    assert sig.ground_types == (BOOL, INT)
    assert [c.name for c in sig.constructors_of(BOOL)] == ["True", "False"]


def test_constructors_in_declaration_order():
    sig = parse_signature(LISTS)
    assert [c.name for c in sig.constructors_of("list")] == ["Nil", "Cons"]
    assert sig.constructor("Cons").arg_types == ("int", "list")
    assert sig.constructor("Cons").arity == 2


def test_integer_literals_are_constructors():
    sig = parse_signature("")
    assert sig.has_constructor(-7)
    assert sig.constructor(3).result_type == INT
    with pytest.raises(ValueError):
        sig.constructors_of(INT)


def test_case_eligible_excludes_int():
    sig = parse_signature(LISTS)
    assert case_eligible_types(sig) == {"bool", "nat", "list"}


@pytest.mark.parametrize(
    "text, error",
    [
        ("data nat = Zero ; data nat = One ;", DuplicateType),
        ("data a = X ; data b = X ;", DuplicateConstructor),
        ("data a = X b ;", UnknownType),
        ("data stream = S int stream ;", NonPervasive),
        ("data a = x ;", ParseError),
        ("data bool = Yes ;", DuplicateType),
    ],
)
def test_rejects_bad_signatures(text, error):
    with pytest.raises(error):
        parse_signature(text)


def test_mutual_recursion_is_pervasive_when_grounded():
    sig = parse_signature("data even = EZ | ES odd ; data odd = OS even ;")
    assert sig.has_type("odd")


def test_bad_name_raised_for_programmatic_decls():
    from eqsem.signature import DataDecl, validate_signature

    with pytest.raises(BadName):
        validate_signature([DataDecl("Nat", (("Z", ()),))])


@pytest.mark.parametrize(
    "text, expected",
    [
        ("int", INT),
        ("int int -> bool", FnType((INT, INT), BOOL)),
        ("(int -> int) list -> list", FnType((FnType((INT,), INT), "list"), "list")),
    ],
)
def test_parse_and_format_types(text, expected):
    assert parse_type(TokenStream(text)) == expected
    assert format_type(expected) == text


def test_type_helpers():
    t = FnType((INT, "list"), "list")
    assert arg_types(t) == (INT, "list")
    assert arg_types(INT) == ()
    assert result_type(t) == "list"
    assert drop_args(t, 1) == FnType(("list",), "list")
    assert drop_args(t, 2) == "list"


def test_formatted_signature_reads_back():
    sig = parse_signature(LISTS)
    again = parse_signature("\n".join(format_signature(sig)))
    assert again == sig
