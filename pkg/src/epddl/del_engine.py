"""Event models, abstract actions and product updates.

Postconditions are sparse: ``post[e]`` maps only the atoms an event may
change to their postcondition formulas, and every other atom keeps its
value. Product-update worlds are named ``(w|e)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .logic.formula import TRUE, Formula, Top
from .logic.state import EpistemicState
from .logic.truth import extension


class ActionError(ValueError):
    pass


class NotApplicable(ActionError):
    pass


class MalformedObservability(ActionError):
    pass


class InconsistentEffects(ActionError):
    pass


Pairs = frozenset  # of (event, event)


def _pairs(events: frozenset, pairs: Iterable, owner: str) -> frozenset:
    out = frozenset((e, f) for e, f in pairs)
    for e, f in out:
        if e not in events or f not in events:
            raise ActionError(f"relation {owner} references unknown event in ({e},{f})")
    return out


def _check_events(events: tuple, pre: Mapping, post: Mapping, designated: frozenset) -> None:
    if not events:
        raise ActionError("an action needs at least one event")
    eset = set(events)
    if len(eset) != len(events):
        raise ActionError("duplicate event names")
    if set(pre) != eset:
        raise ActionError("preconditions must be given for exactly the events")
    if not set(post) <= eset:
        raise ActionError("postconditions for unknown events")
    if not designated or not designated <= eset:
        raise ActionError("designated events must be a non-empty subset of the events")


@dataclass(frozen=True)
class EffectGuards:
    """Triggers of the positive and negative effects on one atom.

    Used only to detect a world where both fire; the postcondition itself
    is authoritative for the resulting label.
    """

    add: Formula
    delete: Formula


@dataclass(frozen=True)
class EventModel:
    events: tuple
    relations: Mapping[str, frozenset]
    pre: Mapping[str, Formula]
    post: Mapping[str, Mapping[str, Formula]] = field(default_factory=dict)


@dataclass(frozen=True)
class EpistemicAction:
    """A standard (agent-indexed) epistemic action."""

    name: str
    model: EventModel
    designated: frozenset
    guards: Mapping[str, Mapping[str, EffectGuards]] = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, name, events, relations, pre, designated, post=None, agents=(), guards=None):
        events = tuple(events)
        eset = frozenset(events)
        des = frozenset(designated)
        pre = dict(pre)
        post = {e: dict(m) for e, m in (post or {}).items()}
        _check_events(events, pre, post, des)
        rels = {ag: _pairs(eset, relations.get(ag, ()), ag) for ag in sorted(set(agents) | set(relations))}
        return cls(name, EventModel(events, rels, pre, post), des, dict(guards or {}))

    @property
    def events(self) -> tuple:
        return self.model.events

    @property
    def agents(self) -> tuple:
        return tuple(self.model.relations)


@dataclass(frozen=True)
class AbstractAction:
    """An abstract event model: relations are indexed by observability types
    and each agent's type is selected per state by ``obs[agent][type]``.

    Missing ``obs`` entries stand for the false formula.
    """

    name: str
    events: tuple
    obs_types: tuple
    typed_relations: Mapping[str, frozenset]
    pre: Mapping[str, Formula]
    post: Mapping[str, Mapping[str, Formula]]
    obs: Mapping[str, Mapping[str, Formula]]
    designated: frozenset
    action_type: str = "abstracted"
    guards: Mapping[str, Mapping[str, EffectGuards]] = field(default_factory=dict, compare=False)

    @classmethod
    def build(
        cls, name, events, obs_types, typed_relations, pre, obs, designated,
        post=None, action_type="abstracted", guards=None,
    ):
        events = tuple(events)
        eset = frozenset(events)
        des = frozenset(designated)
        pre = dict(pre)
        post = {e: dict(m) for e, m in (post or {}).items()}
        _check_events(events, pre, post, des)
        obs_types = tuple(obs_types)
        unknown = set(typed_relations) - set(obs_types)
        if unknown:
            raise ActionError(f"relations for undeclared observability types {sorted(unknown)}")
        rels = {t: _pairs(eset, typed_relations.get(t, ()), t) for t in obs_types}
        obs_map = {}
        for ag, m in obs.items():
            bad = set(m) - set(obs_types)
            if bad:
                raise ActionError(f"observability of {ag} uses undeclared types {sorted(bad)}")
            obs_map[ag] = dict(m)
        return cls(name, events, obs_types, rels, pre, post, obs_map, des, action_type, dict(guards or {}))

    @property
    def agents(self) -> tuple:
        return tuple(self.obs)


Action = EpistemicAction | AbstractAction


def _pre_of(a: Action) -> Mapping[str, Formula]:
    return a.model.pre if isinstance(a, EpistemicAction) else a.pre


def _post_of(a: Action) -> Mapping[str, Mapping[str, Formula]]:
    return a.model.post if isinstance(a, EpistemicAction) else a.post


def is_applicable(s: EpistemicState, a: Action, _memo: dict | None = None) -> bool:
    """Every designated world has an applicable designated event."""
    memo = {} if _memo is None else _memo
    pre = _pre_of(a)
    covered: set = set()
    for e in a.designated:
        covered |= extension(s, pre[e], memo)
    return s.designated <= covered


def observability_type_of(a: AbstractAction, s: EpistemicState, agent: str, _memo: dict | None = None) -> str:
    """The unique type whose observability condition holds in ``s``."""
    memo = {} if _memo is None else _memo
    conds = a.obs.get(agent, {})
    hits = [t for t in a.obs_types if t in conds and s.designated <= extension(s, conds[t], memo)]
    if len(hits) != 1:
        what = "no" if not hits else "several"
        raise MalformedObservability(
            f"{a.name}: {what} observability type holds for agent {agent} ({', '.join(hits)})"
        )
    return hits[0]


def _update(s: EpistemicState, a: Action, agent_rel: Mapping[str, frozenset], memo: dict) -> EpistemicState:
    pre, post = _pre_of(a), _post_of(a)
    events = a.events
    pre_ext = {e: extension(s, pre[e], memo) for e in events}
    worlds = [(w, e) for w in s.worlds for e in events if w in pre_ext[e]]
    present = set(worlds)
    name = {p: f"({p[0]}|{p[1]})" for p in worlds}

    labels = {}
    for w, e in worlds:
        lab = set(s.labels[w])
        for p, phi in post.get(e, {}).items():
            if w in extension(s, phi, memo):
                lab.add(p)
            else:
                lab.discard(p)
        for p, g in a.guards.get(e, {}).items():
            if w in extension(s, g.add, memo) and w in extension(s, g.delete, memo):
                raise InconsistentEffects(f"{a.name}: event {e} both adds and deletes {p} at world {w}")
        labels[name[(w, e)]] = lab

    rels = {}
    for ag in s.agents:
        qsucc: dict[str, list] = {e: [] for e in events}
        for e, f in agent_rel.get(ag, ()):
            qsucc[e].append(f)
        pairs = set()
        for w, e in worlds:
            for v in s.successors[ag][w]:
                for f in qsucc[e]:
                    if (v, f) in present:
                        pairs.add((name[(w, e)], name[(v, f)]))
        rels[ag] = pairs
    des = [name[(w, e)] for w, e in worlds if w in s.designated and e in a.designated]
    if not des:
        raise NotApplicable(f"action {a.name} leaves no designated world")
    return EpistemicState([name[p] for p in worlds], rels, labels, des, s.agents)


def product_update(s: EpistemicState, a: EpistemicAction, require_applicable: bool = True) -> EpistemicState:
    """``s ⊗ a``.

    With ``require_applicable=False`` the product is built even when some
    designated world has no applicable designated event; such worlds then
    simply drop out of the designated set.
    """
    memo: dict = {}
    if require_applicable and not is_applicable(s, a, memo):
        raise NotApplicable(f"action {a.name} is not applicable")
    return _update(s, a, a.model.relations, memo)


def abstract_product_update(s: EpistemicState, a: AbstractAction, require_applicable: bool = True) -> EpistemicState:
    """``s ⊙ a``: each agent's relation is the one of its observability type in ``s``."""
    memo: dict = {}
    if require_applicable and not is_applicable(s, a, memo):
        raise NotApplicable(f"action {a.name} is not applicable")
    rel = {ag: a.typed_relations[observability_type_of(a, s, ag, memo)] for ag in s.agents}
    return _update(s, a, rel, memo)


def induce(a: AbstractAction, s: EpistemicState) -> EpistemicAction:
    """The standard action induced from ``a`` by ``s``."""
    memo: dict = {}
    rel = {ag: a.typed_relations[observability_type_of(a, s, ag, memo)] for ag in s.agents}
    return EpistemicAction(
        a.name, EventModel(a.events, rel, dict(a.pre), {e: dict(m) for e, m in a.post.items()}),
        a.designated, a.guards,
    )


def abstract(x: EpistemicAction) -> AbstractAction:
    """Abstraction: one observability type per class of agents with equal relations."""
    classes: dict[frozenset, list[str]] = {}
    for ag in sorted(x.model.relations):
        classes.setdefault(x.model.relations[ag], []).append(ag)
    types = []
    rels = {}
    obs: dict[str, dict[str, Formula]] = {}
    for pairs, members in classes.items():
        t = "{" + ",".join(members) + "}"
        types.append(t)
        rels[t] = pairs
        for ag in members:
            obs[ag] = {t: TRUE}
    return AbstractAction(
        x.name, x.events, tuple(types), rels, dict(x.model.pre),
        {e: dict(m) for e, m in x.model.post.items()}, obs, x.designated, "abstracted", x.guards,
    )


def is_trivial_event(pre: Formula, post: Mapping[str, Formula] | None) -> bool:
    """Syntactic triviality: precondition is literally true and there are no effects."""
    return isinstance(pre, Top) and not post


__all__ = [
    "ActionError", "NotApplicable", "MalformedObservability", "InconsistentEffects",
    "EffectGuards", "EventModel", "EpistemicAction", "AbstractAction",
    "is_applicable", "observability_type_of", "product_update", "abstract_product_update",
    "induce", "abstract", "is_trivial_event",
]
