"""Tokenizer for EPDDL sources.

Comments run from ``;`` to the end of the line. ``Kw.`` and ``C.`` are
lexed as single modality-name tokens so that the dot never leaks into a
name.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from .errors import LexError, Pos, fail


class Kind(str, Enum):
    LPAREN = "lparen"
    RPAREN = "rparen"
    NAME = "name"
    VARIABLE = "variable"
    KEYWORD = "keyword"
    BRACKET = "modality-bracket"
    MODALITY_NAME = "modality-name"
    PIPE = "pipe"
    DASH = "dash"
    EQ = "equality-op"
    EOF = "eof"


@dataclass(frozen=True)
class Token:
    kind: Kind
    text: str
    pos: Pos

    def is_(self, kind: Kind, text: str | None = None) -> bool:
        return self.kind is kind and (text is None or self.text == text)

    def __repr__(self) -> str:
        return f"{self.kind.value}({self.text})@{self.pos}"


NAME_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_\-]*")
_SINGLE = {"(": Kind.LPAREN, ")": Kind.RPAREN, "[": Kind.BRACKET, "]": Kind.BRACKET,
           "<": Kind.BRACKET, ">": Kind.BRACKET, "|": Kind.PIPE, "-": Kind.DASH, "=": Kind.EQ}


def lex(text: str, file: str = "<input>") -> list[Token]:
    toks: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if c.isspace():
            i, col = i + 1, col + 1
            continue
        if c == ";":
            while i < n and text[i] != "\n":
                i += 1
            continue
        pos = Pos(line, col)
        if c == "/" and text.startswith("/=", i):
            toks.append(Token(Kind.EQ, "/=", pos))
            i, col = i + 2, col + 2
            continue
        if c in _SINGLE:
            toks.append(Token(_SINGLE[c], c, pos))
            i, col = i + 1, col + 1
            continue
        if c in "?:":
            m = NAME_RE.match(text, i + 1)
            if not m:
                what = "variable" if c == "?" else "keyword"
                fail(LexError, pos, "lex", f"malformed {what}: '{c}' must be directly followed by a letter", file)
            kind = Kind.VARIABLE if c == "?" else Kind.KEYWORD
            toks.append(Token(kind, c + m.group(), pos))
            col += m.end() - i
            i = m.end()
            continue
        m = NAME_RE.match(text, i)
        if m:
            word = m.group()
            end = m.end()
            if word in ("Kw", "C") and text.startswith(".", end):
                toks.append(Token(Kind.MODALITY_NAME, word + ".", pos))
                end += 1
            else:
                toks.append(Token(Kind.NAME, word, pos))
            col += end - i
            i = end
            continue
        fail(LexError, pos, "lex", f"illegal character {c!r}", file)
    toks.append(Token(Kind.EOF, "", Pos(line, col)))
    return toks
