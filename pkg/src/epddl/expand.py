"""Entity tables, list expansion and the translation of formula syntax trees
into ground formulas.

Shared by the type checker (agent groups, observability rules) and the
grounder.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Iterable, Mapping

from .frontend.ast import (
    FAnd, FEq, FFalse, FImply, FModal, FNot, FOr, FormalParams, FPred, FQuant, FTrue, LAnd, LForall,
    LItem, Term, TermTuple, TypeExpr,
)
from .frontend.typeenv import TypeEnv
from .logic.formula import FALSE, TRUE, And, Atom, Formula, Imply, Modal, ModalKind, Not, Or

Binding = Mapping[str, str]


class ExpansionError(ValueError):
    """Unbound variable or unknown entity met while grounding."""


def atom_name(pred: str, args: Iterable[str]) -> str:
    return "_".join([pred, *args])


@dataclass
class EntityTable:
    """Entities with their primitive types, in declaration order.

    ``contextual`` maps the standalone types ``world`` and ``event`` to the
    names they range over in the current declaration.
    """

    env: TypeEnv
    types: dict[str, str]
    groups: dict[str, tuple[str, ...]] = field(default_factory=dict)
    agents: tuple[str, ...] = ()
    contextual: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def typed(self, t: TypeExpr | None) -> tuple[str, ...]:
        names = t.names if t is not None else ("entity",)
        out: list[str] = []
        for n in names:
            if n in self.contextual:
                out.extend(self.contextual[n])
            else:
                out.extend(e for e, et in self.types.items() if self.env.subtype(et, n))
        return tuple(dict.fromkeys(out))

    def with_context(self, **ctx: tuple[str, ...]) -> "EntityTable":
        return EntityTable(self.env, self.types, self.groups, self.agents, {**self.contextual, **ctx})


def holds(f: Formula, atoms: frozenset[str] | set[str]) -> bool:
    """Classical evaluation of a propositional formula over a set of true atoms."""
    if isinstance(f, Atom):
        return f.name in atoms
    if f is TRUE or f == TRUE:
        return True
    if f is FALSE or f == FALSE:
        return False
    if isinstance(f, Not):
        return not holds(f.arg, atoms)
    if isinstance(f, And):
        return all(holds(a, atoms) for a in f.args)
    if isinstance(f, Or):
        return any(holds(a, atoms) for a in f.args)
    if isinstance(f, Imply):
        return not holds(f.left, atoms) or holds(f.right, atoms)
    raise ExpansionError(f"modal formula {f} in a propositional context")


class Expander:
    """Grounding context: entity table plus the initial facts."""

    def __init__(self, table: EntityTable, facts: frozenset[str] = frozenset()):
        self.table = table
        self.facts = frozenset(facts)

    def resolve(self, t: Term, binding: Binding) -> str:
        if t.is_var:
            try:
                return binding[t.text]
            except KeyError:
                raise ExpansionError(f"unbound variable {t.text}") from None
        return t.text

    def induced_power_set(self, params: FormalParams, binding: Binding = {}) -> list[dict[str, str]]:
        """Bindings of the parameters whose condition holds in the facts, in product order."""
        names = [it.term.text for it in params.items]
        domains = [self.table.typed(it.type) for it in params.items]
        out = []
        for combo in product(*domains):
            b = {**binding, **dict(zip(names, combo))}
            if params.cond is None or holds(self.translate(params.cond, b), self.facts):
                out.append(b)
        return out

    def list_expansion(self, lst, item: Callable[[object, Binding], object], binding: Binding = {},
                       dedup: bool = True) -> list:
        """Order-preserving expansion of a list expression, deduplicated unless asked not to."""
        out: list = []
        self._expand(lst, item, binding, out)
        return list(dict.fromkeys(out)) if dedup else out

    def _expand(self, lst, item, binding, out: list) -> None:
        if isinstance(lst, LItem):
            out.append(item(lst.item, binding))
        elif isinstance(lst, LAnd):
            for p in lst.parts:
                self._expand(p, item, binding, out)
        elif isinstance(lst, LForall):
            for b in self.induced_power_set(lst.params, binding):
                self._expand(lst.body, item, b, out)
        else:
            raise TypeError(f"not a list expression: {lst!r}")

    def ground_tuple(self, tt: TermTuple, binding: Binding) -> tuple[str, ...]:
        return tuple(self.resolve(t, binding) for t in tt.terms)

    def agent_index(self, index, binding: Binding):
        """A modality index as an agent name or a frozenset of agents."""
        if isinstance(index, Term):
            name = self.resolve(index, binding)
            if name == "All":
                return frozenset(self.table.agents)
            if name in self.table.groups:
                return frozenset(self.table.groups[name])
            return name
        members: list[str] = []
        for tup in self.list_expansion(index, lambda tt, b: self.ground_tuple(tt, b), binding):
            for name in tup:
                members.extend(self.table.groups.get(name, (name,)))
        return frozenset(members)

    def translate(self, f, binding: Binding = {}) -> Formula:
        if isinstance(f, FTrue):
            return TRUE
        if isinstance(f, FFalse):
            return FALSE
        if isinstance(f, FPred):
            return Atom(atom_name(f.name, (self.resolve(t, binding) for t in f.args)))
        if isinstance(f, FEq):
            same = self.resolve(f.left, binding) == self.resolve(f.right, binding)
            return TRUE if same == (f.op == "=") else FALSE
        if isinstance(f, FNot):
            return Not(self.translate(f.arg, binding))
        if isinstance(f, FAnd):
            return And(tuple(self.translate(a, binding) for a in f.args))
        if isinstance(f, FOr):
            return Or(tuple(self.translate(a, binding) for a in f.args))
        if isinstance(f, FImply):
            return Imply(self.translate(f.left, binding), self.translate(f.right, binding))
        if isinstance(f, FQuant):
            items = [self.translate(f.body, b) for b in self.induced_power_set(f.params, binding)]
            if not items:
                return TRUE if f.kind == "forall" else FALSE
            if len(items) == 1:
                return items[0]
            return And(tuple(items)) if f.kind == "forall" else Or(tuple(items))
        if isinstance(f, FModal):
            return Modal(modal_kind(f), self.agent_index(f.index, binding), self.translate(f.body, binding))
        raise TypeError(f"not a formula: {f!r}")


def modal_kind(f: FModal) -> ModalKind:
    suffix = "box" if f.bracket == "[" else "diamond"
    return ModalKind(f"{f.name}{suffix}" if f.name else suffix)


def substitute(f, binding: Binding):
    """Replace free variables of a formula syntax tree by entity names."""
    sub = lambda t: Term(binding[t.text], t.pos) if t.is_var and t.text in binding else t
    if isinstance(f, (FTrue, FFalse)):
        return f
    if isinstance(f, FPred):
        return FPred(f.name, tuple(sub(t) for t in f.args), f.pos)
    if isinstance(f, FEq):
        return FEq(f.op, sub(f.left), sub(f.right), f.pos)
    if isinstance(f, FNot):
        return FNot(substitute(f.arg, binding), f.pos)
    if isinstance(f, (FAnd, FOr)):
        return type(f)(tuple(substitute(a, binding) for a in f.args), f.pos)
    if isinstance(f, FImply):
        return FImply(substitute(f.left, binding), substitute(f.right, binding), f.pos)
    if isinstance(f, FQuant):
        params, inner = _sub_params(f.params, binding)
        return FQuant(f.kind, params, substitute(f.body, inner), f.pos)
    if isinstance(f, FModal):
        index = sub(f.index) if isinstance(f.index, Term) else _sub_list(f.index, binding)
        return FModal(f.bracket, f.name, index, substitute(f.body, binding), f.pos)
    raise TypeError(f"not a formula: {f!r}")


def _sub_params(params: FormalParams, binding: Binding):
    bound = {it.term.text for it in params.items}
    inner = {k: v for k, v in binding.items() if k not in bound}
    cond = substitute(params.cond, inner) if params.cond is not None else None
    return FormalParams(params.items, cond, params.pos), inner


def _sub_list(lst, binding: Binding):
    if isinstance(lst, LItem):
        tt = lst.item
        return LItem(TermTuple(tuple(Term(binding.get(t.text, t.text), t.pos) if t.is_var else t
                                     for t in tt.terms), tt.pos), lst.pos)
    if isinstance(lst, LAnd):
        return LAnd(tuple(_sub_list(p, binding) for p in lst.parts), lst.pos)
    params, inner = _sub_params(lst.params, binding)
    return LForall(params, _sub_list(lst.body, inner), lst.pos)
