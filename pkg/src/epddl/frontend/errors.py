"""Diagnostics shared by the lexer, parser and type checker."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Pos:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


NOPOS = Pos(0, 0)


@dataclass(frozen=True)
class Diagnostic:
    pos: Pos
    rule: str
    message: str
    file: str = "<input>"

    def __str__(self) -> str:
        return f"{self.file}:{self.pos}: [{self.rule}] {self.message}"


class EpddlError(Exception):
    """Base class for user-facing errors in EPDDL sources."""

    def __init__(self, diagnostics: list[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class LexError(EpddlError):
    pass


class ParseError(EpddlError):
    pass


class RequirementError(EpddlError):
    pass


class TypeCheckError(EpddlError):
    pass


def fail(cls: type[EpddlError], pos: Pos, rule: str, message: str, file: str = "<input>"):
    raise cls([Diagnostic(pos, rule, message, file)])
