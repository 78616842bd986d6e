"""Ground epistemic formulas.

Formulas are immutable, hashable trees. A modal index is either a single
agent name (``str``) or a non-empty ``frozenset`` of agent names; common
knowledge operators always carry a set.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Union

AgentIndex = Union[str, frozenset]


class ModalKind(str, Enum):
    BOX = "box"
    DIAMOND = "diamond"
    KW_BOX = "Kw.box"
    KW_DIAMOND = "Kw.diamond"
    CK_BOX = "C.box"
    CK_DIAMOND = "C.diamond"

    @property
    def is_ck(self) -> bool:
        return self in (ModalKind.CK_BOX, ModalKind.CK_DIAMOND)


class Formula:
    """Base class of the formula AST."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __and__(self, other: "Formula") -> "Formula":
        return And((self, other))

    def __or__(self, other: "Formula") -> "Formula":
        return Or((self, other))

    def __invert__(self) -> "Formula":
        return Not(self)


@dataclass(frozen=True, slots=True)
class Top(Formula):
    def __str__(self) -> str:
        return "T"


@dataclass(frozen=True, slots=True)
class Bottom(Formula):
    def __str__(self) -> str:
        return "F"


TRUE = Top()
FALSE = Bottom()


@dataclass(frozen=True, slots=True)
class Atom(Formula):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class Not(Formula):
    arg: Formula

    def children(self) -> tuple[Formula, ...]:
        return (self.arg,)

    def __str__(self) -> str:
        return f"~{self.arg}"


@dataclass(frozen=True, slots=True)
class And(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("And needs at least one argument")

    def children(self) -> tuple[Formula, ...]:
        return self.args

    def __str__(self) -> str:
        return "(" + " & ".join(map(str, self.args)) + ")"


@dataclass(frozen=True, slots=True)
class Or(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("Or needs at least one argument")

    def children(self) -> tuple[Formula, ...]:
        return self.args

    def __str__(self) -> str:
        return "(" + " | ".join(map(str, self.args)) + ")"


@dataclass(frozen=True, slots=True)
class Imply(Formula):
    left: Formula
    right: Formula

    def children(self) -> tuple[Formula, ...]:
        return (self.left, self.right)

    def __str__(self) -> str:
        return f"({self.left} -> {self.right})"


@dataclass(frozen=True, slots=True)
class Modal(Formula):
    kind: ModalKind
    index: AgentIndex
    arg: Formula

    def __post_init__(self) -> None:
        kind = ModalKind(self.kind)
        object.__setattr__(self, "kind", kind)
        index = self.index
        if not isinstance(index, str):
            index = frozenset(index)
            if not index:
                raise ValueError("group index must be non-empty")
        elif kind.is_ck:
            index = frozenset([index])
        object.__setattr__(self, "index", index)

    @property
    def agents(self) -> frozenset:
        return frozenset([self.index]) if isinstance(self.index, str) else self.index

    def children(self) -> tuple[Formula, ...]:
        return (self.arg,)

    def __str__(self) -> str:
        idx = self.index if isinstance(self.index, str) else "{" + ",".join(sorted(self.index)) + "}"
        return f"{self.kind.value}[{idx}]{self.arg}"


def conj(items: Iterable[Formula]) -> Formula:
    """Conjunction of ``items``; the empty conjunction is true."""
    items = tuple(items)
    return And(items) if items else TRUE


def disj(items: Iterable[Formula]) -> Formula:
    """Disjunction of ``items``; the empty disjunction is false."""
    items = tuple(items)
    return Or(items) if items else FALSE


def box(index: AgentIndex, phi: Formula) -> Modal:
    return Modal(ModalKind.BOX, index, phi)


def diamond(index: AgentIndex, phi: Formula) -> Modal:
    return Modal(ModalKind.DIAMOND, index, phi)


def kw(index: AgentIndex, phi: Formula) -> Modal:
    return Modal(ModalKind.KW_BOX, index, phi)


def kw_diamond(index: AgentIndex, phi: Formula) -> Modal:
    return Modal(ModalKind.KW_DIAMOND, index, phi)


def ck(index: Iterable[str], phi: Formula) -> Modal:
    return Modal(ModalKind.CK_BOX, frozenset(index), phi)


def ck_diamond(index: Iterable[str], phi: Formula) -> Modal:
    return Modal(ModalKind.CK_DIAMOND, frozenset(index), phi)


def walk(phi: Formula) -> Iterator[Formula]:
    """Pre-order traversal."""
    stack = [phi]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def atoms_of(phi: Formula) -> set[str]:
    return {n.name for n in walk(phi) if isinstance(n, Atom)}


def agents_of(phi: Formula) -> set[str]:
    out: set[str] = set()
    for n in walk(phi):
        if isinstance(n, Modal):
            out |= n.agents
    return out


def modal_depth(phi: Formula) -> int:
    inner = max((modal_depth(c) for c in phi.children()), default=0)
    return inner + 1 if isinstance(phi, Modal) else inner


def size(phi: Formula) -> int:
    """Number of AST nodes."""
    return sum(1 for _ in walk(phi))


def is_propositional(phi: Formula) -> bool:
    return not any(isinstance(n, Modal) for n in walk(phi))
