"""Syntax tree for problems, domains and action type libraries.

Every node records its source position; positions never take part in
equality, so a re-parsed pretty print compares equal to the original.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

from .errors import NOPOS, Pos


def _pos():
    return field(default=NOPOS, compare=False, repr=False)


@dataclass(frozen=True)
class Term:
    text: str
    pos: Pos = _pos()

    @property
    def is_var(self) -> bool:
        return self.text.startswith("?")

    def __str__(self) -> str:
        return self.text


@dataclass(frozen=True)
class TypeExpr:
    """A primitive type or ``(either t1 ... tk)``."""

    names: tuple[str, ...]
    either: bool = False
    pos: Pos = _pos()

    def __str__(self) -> str:
        return f"(either {' '.join(self.names)})" if self.either else self.names[0]


@dataclass(frozen=True)
class TypedItem:
    term: Term
    type: TypeExpr | None = None


@dataclass(frozen=True)
class FormalParams:
    items: tuple[TypedItem, ...]
    cond: "Formula | None" = None
    pos: Pos = _pos()


# formulas


@dataclass(frozen=True)
class FTrue:
    pos: Pos = _pos()


@dataclass(frozen=True)
class FFalse:
    pos: Pos = _pos()


@dataclass(frozen=True)
class FPred:
    name: str
    args: tuple[Term, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class FEq:
    op: str  # "=" or "/="
    left: Term
    right: Term
    pos: Pos = _pos()


@dataclass(frozen=True)
class FNot:
    arg: "Formula"
    pos: Pos = _pos()


@dataclass(frozen=True)
class FAnd:
    args: tuple["Formula", ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class FOr:
    args: tuple["Formula", ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class FImply:
    left: "Formula"
    right: "Formula"
    pos: Pos = _pos()


@dataclass(frozen=True)
class FQuant:
    kind: str  # "forall" or "exists"
    params: FormalParams
    body: "Formula"
    pos: Pos = _pos()


@dataclass(frozen=True)
class FModal:
    bracket: str  # "[" or "<"
    name: str | None  # None, "Kw." or "C."
    index: "Term | ListExpr"
    body: "Formula"
    pos: Pos = _pos()


Formula = Union[FTrue, FFalse, FPred, FEq, FNot, FAnd, FOr, FImply, FQuant, FModal]


# lists


@dataclass(frozen=True)
class LItem:
    item: object
    pos: Pos = _pos()


@dataclass(frozen=True)
class LAnd:
    parts: tuple["ListExpr", ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class LForall:
    params: FormalParams
    body: "ListExpr"
    pos: Pos = _pos()


ListExpr = Union[LItem, LAnd, LForall]


@dataclass(frozen=True)
class TermTuple:
    """``(t1 ... tk)``: a relation pair or an agent-group element."""

    terms: tuple[Term, ...]
    pos: Pos = _pos()


# effects and observability conditions


@dataclass(frozen=True)
class Literal:
    pred: FPred
    positive: bool = True
    pos: Pos = _pos()


@dataclass(frozen=True)
class CondEffect:
    kind: str  # "when" or "iff"
    cond: Formula
    literals: ListExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class ObsStatic:
    agent: Term
    obs_type: str
    pos: Pos = _pos()


@dataclass(frozen=True)
class ObsIte:
    agent: Term
    branches: tuple[tuple[Formula, str], ...]
    else_type: str | None = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class ObsDefault:
    obs_type: str
    pos: Pos = _pos()


# declarations


@dataclass(frozen=True)
class Requirements:
    keys: tuple[str, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class GroupDecl:
    name: str
    type: TypeExpr | None
    members: ListExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class ExplicitInit:
    worlds: tuple[Term, ...]
    relations: tuple[tuple[Term, ListExpr], ...]
    labels: tuple[tuple[Term, ListExpr], ...]
    designated: tuple[Term, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class FinitaryInit:
    formulas: ListExpr
    pos: Pos = _pos()


@dataclass(frozen=True)
class Problem:
    name: str
    domain: str
    requirements: tuple[Requirements, ...] = ()
    objects: tuple[tuple[TypedItem, ...], ...] = ()
    agents: tuple[tuple[TypedItem, ...], ...] = ()
    groups: tuple[tuple[GroupDecl, ...], ...] = ()
    init: ExplicitInit | FinitaryInit | None = None
    facts_init: tuple[FPred, ...] | None = None
    goals: tuple[Formula, ...] = ()
    pos: Pos = _pos()
    file: str = field(default="<input>", compare=False, repr=False)


@dataclass(frozen=True)
class PredicateDecl:
    name: str
    params: tuple[TypedItem, ...]
    is_fact: bool = False
    pos: Pos = _pos()


@dataclass(frozen=True)
class EventDecl:
    name: str
    params: tuple[TypedItem, ...] | None = None
    pre: Formula | None = None
    effects: ListExpr | None = None
    empty_effects: bool = False  # ``:effects ()`` written explicitly
    pos: Pos = _pos()

    @property
    def has_effects(self) -> bool:
        return self.effects is not None


@dataclass(frozen=True)
class ActionEvent:
    name: str
    args: tuple[Term, ...]
    pos: Pos = _pos()


@dataclass(frozen=True)
class ActionDecl:
    name: str
    params: FormalParams
    type_name: str
    events: tuple[ActionEvent, ...]
    obs: ListExpr | None = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class Domain:
    name: str
    libraries: tuple[tuple[str, ...], ...] = ()
    requirements: tuple[Requirements, ...] = ()
    types: tuple[tuple[TypedItem, ...], ...] = ()
    predicates: tuple[tuple[PredicateDecl, ...], ...] = ()
    constants: tuple[tuple[TypedItem, ...], ...] = ()
    events: tuple[EventDecl, ...] = ()
    actions: tuple[ActionDecl, ...] = ()
    pos: Pos = _pos()
    file: str = field(default="<input>", compare=False, repr=False)


@dataclass(frozen=True)
class ActionTypeDecl:
    name: str
    events: tuple[Term, ...]
    obs_types: tuple[str, ...]
    relations: tuple[tuple[Term, ListExpr], ...]
    designated: tuple[Term, ...]
    conditions: tuple[tuple[Term, tuple[str, ...]], ...] | None = None
    pos: Pos = _pos()


@dataclass(frozen=True)
class Library:
    name: str
    requirements: tuple[Requirements, ...] = ()
    action_types: tuple[ActionTypeDecl, ...] = ()
    pos: Pos = _pos()
    file: str = field(default="<input>", compare=False, repr=False)


Source = Union[Problem, Domain, Library]


def walk_formula(f: Formula):
    """Pre-order traversal of a formula AST (list indices included)."""
    yield f
    if isinstance(f, FNot):
        yield from walk_formula(f.arg)
    elif isinstance(f, (FAnd, FOr)):
        for a in f.args:
            yield from walk_formula(a)
    elif isinstance(f, FImply):
        yield from walk_formula(f.left)
        yield from walk_formula(f.right)
    elif isinstance(f, FQuant):
        if f.params.cond is not None:
            yield from walk_formula(f.params.cond)
        yield from walk_formula(f.body)
    elif isinstance(f, FModal):
        if not isinstance(f.index, Term):
            for g in list_conditions(f.index):
                yield from walk_formula(g)
        yield from walk_formula(f.body)


def list_items(lst: ListExpr):
    """Syntactic elements of a list expression, without expanding it."""
    if isinstance(lst, LItem):
        yield lst.item
    elif isinstance(lst, LAnd):
        for p in lst.parts:
            yield from list_items(p)
    else:
        yield from list_items(lst.body)


def list_conditions(lst: ListExpr):
    """Comprehension conditions occurring in a list expression."""
    if isinstance(lst, LAnd):
        for p in lst.parts:
            yield from list_conditions(p)
    elif isinstance(lst, LForall):
        if lst.params.cond is not None:
            yield lst.params.cond
        yield from list_conditions(lst.body)
