"""EPDDL front end: lexer, parser, requirements, type checker and printer."""

from .errors import Diagnostic, EpddlError, LexError, ParseError, RequirementError, TypeCheckError
from .lexer import Kind, Token, lex
from .parser import parse, parse_action_type, parse_any, parse_formula
from .printer import pretty
from .requirements import IMPLIES, REQUIREMENTS, close, resolve_requirements
from .typecheck import BASIC, BASIC_SOURCE, TypedSpec, type_check


def load(path: str):
    """Parse a source file of any kind."""
    with open(path, encoding="utf-8") as fh:
        return parse_any(fh.read(), path)


__all__ = [
    "Diagnostic", "EpddlError", "LexError", "ParseError", "RequirementError", "TypeCheckError",
    "Kind", "Token", "lex", "parse", "parse_action_type", "parse_any", "parse_formula", "pretty",
    "IMPLIES", "REQUIREMENTS", "close", "resolve_requirements", "BASIC", "BASIC_SOURCE",
    "TypedSpec", "type_check", "load",
]
