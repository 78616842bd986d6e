"""Subtype hierarchy over primitive types and type compatibility."""

from __future__ import annotations

from .ast import TypeExpr

RESERVED_TYPES = ("entity", "object", "agent", "agent-group", "world", "event", "obs-type")
SPECIALIZABLE = ("object", "agent", "agent-group")


class TypeCycle(ValueError):
    pass


class TypeEnv:
    """Single-parent type tree rooted at the reserved types."""

    def __init__(self):
        self.parent: dict[str, str | None] = {
            "entity": None, "object": "entity", "agent": "entity", "agent-group": "entity",
            "world": None, "event": None, "obs-type": None,
        }

    def declare(self, name: str, supertype: str | None = None) -> None:
        self.parent[name] = supertype or "object"
        if supertype is not None and supertype not in self.parent:
            self.parent[supertype] = "object"

    def ancestors(self, t: str) -> list[str]:
        """``t`` followed by its supertypes, root last."""
        out, seen = [], set()
        cur: str | None = t
        while cur is not None:
            if cur in seen:
                raise TypeCycle(f"cyclic type hierarchy through '{cur}'")
            seen.add(cur)
            out.append(cur)
            cur = self.parent.get(cur)
        return out

    def check_acyclic(self) -> list[str]:
        bad = []
        for t in self.parent:
            try:
                self.ancestors(t)
            except TypeCycle:
                bad.append(t)
        return bad

    def known(self, t: str) -> bool:
        return t in self.parent

    def subtype(self, t: str, u: str) -> bool:
        """Primitive compatibility: ``t`` equals ``u`` or is one of its subtypes."""
        return u in self.ancestors(t)

    def compatible(self, t: TypeExpr | tuple[str, ...] | str, u: TypeExpr | tuple[str, ...] | str) -> bool:
        ts, us = _names(t), _names(u)
        return all(any(self.subtype(a, b) for b in us) for a in ts)

    def root(self, t: str) -> str:
        """The reserved type below ``entity`` (or the standalone root) above ``t``."""
        chain = self.ancestors(t)
        if chain[-1] == "entity" and len(chain) > 1:
            return chain[-2]
        return chain[-1]


def _names(t) -> tuple[str, ...]:
    if isinstance(t, TypeExpr):
        return t.names
    if isinstance(t, str):
        return (t,)
    return tuple(t)
