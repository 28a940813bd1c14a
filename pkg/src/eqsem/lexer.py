"""Tokenizer shared by the program, core-file and proof-script readers."""
from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError

KEYWORDS = frozenset({"data", "sig", "def", "case", "of"})

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>\#[^\n]*)
  | (?P<int>-?[0-9]+)
  | (?P<uname>[A-Z][A-Za-z0-9_']*)
  | (?P<lname>[a-z_][A-Za-z0-9_']*)
  | (?P<sym>->|==|[(){},;:=|])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # int | uname | lname | sym | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        chunk = m.group()
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = pos + chunk.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def at(self, kind: str, text: str | None = None) -> bool:
        tok = self.peek()
        return tok.kind == kind and (text is None or tok.text == text)

    def at_sym(self, text: str) -> bool:
        return self.at("sym", text)

    def at_keyword(self, word: str) -> bool:
        return self.at("lname", word)

    def accept_sym(self, text: str) -> bool:
        if self.at_sym(text):
            self.pos += 1
            return True
        return False

    def expect_sym(self, text: str) -> Token:
        if not self.at_sym(text):
            self.fail(f"expected {text!r}")
        return self.next()

    def expect_keyword(self, word: str) -> Token:
        if not self.at_keyword(word):
            self.fail(f"expected {word!r}")
        return self.next()

    def expect_lname(self, what: str = "name") -> str:
        tok = self.peek()
        if tok.kind != "lname" or tok.text in KEYWORDS:
            self.fail(f"expected {what}")
        self.pos += 1
        return tok.text

    def expect_uname(self, what: str = "constructor name") -> str:
        if not self.at("uname"):
            self.fail(f"expected {what}")
        return self.next().text

    def at_eof(self) -> bool:
        return self.peek().kind == "eof"

    def fail(self, message: str):
        tok = self.peek()
        found = tok.text if tok.kind != "eof" else "end of input"
        raise ParseError(f"{message}, found {found!r}", tok.line, tok.col)
