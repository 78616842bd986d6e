"""Multi-pointed Kripke states."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Mapping, Sequence


class StateError(ValueError):
    """Malformed state or a query that references unknown worlds/agents."""


class EpistemicState:
    """A finite multi-pointed Kripke model ``(W, R, L, W_d)``.

    ``worlds`` keeps the construction order, which serializers rely on.
    Equality is set-based and ignores that order. Agents listed in
    ``agents`` without an entry in ``relations`` get the empty relation.
    """

    def __init__(
        self,
        worlds: Iterable[str],
        relations: Mapping[str, Iterable[tuple[str, str]]],
        labels: Mapping[str, Iterable[str]],
        designated: Iterable[str],
        agents: Iterable[str] | None = None,
    ) -> None:
        ws = tuple(dict.fromkeys(worlds))
        if not ws:
            raise StateError("a state needs at least one world")
        wset = frozenset(ws)
        ags = tuple(sorted(set(agents or ()) | set(relations)))
        rels: dict[str, frozenset] = {}
        for ag in ags:
            pairs = frozenset((u, v) for u, v in relations.get(ag, ()))
            for u, v in pairs:
                if u not in wset or v not in wset:
                    raise StateError(f"relation of {ag} references unknown world in ({u},{v})")
            rels[ag] = pairs
        labs: dict[str, frozenset] = {}
        for w in ws:
            labs[w] = frozenset(labels.get(w, ()))
        extra = set(labels) - wset
        if extra:
            raise StateError(f"labels for unknown worlds: {sorted(extra)}")
        des = frozenset(designated)
        if not des:
            raise StateError("designated set must be non-empty")
        if not des <= wset:
            raise StateError(f"designated worlds not in W: {sorted(des - wset)}")
        object.__setattr__(self, "worlds", ws)
        object.__setattr__(self, "relations", rels)
        object.__setattr__(self, "labels", labs)
        object.__setattr__(self, "designated", des)
        object.__setattr__(self, "agents", ags)

    def __setattr__(self, name, value):
        raise AttributeError("EpistemicState is immutable")

    @cached_property
    def world_set(self) -> frozenset:
        return frozenset(self.worlds)

    @cached_property
    def successors(self) -> dict[str, dict[str, frozenset]]:
        """``successors[agent][w]`` is the set of R_agent-successors of ``w``."""
        out: dict[str, dict[str, frozenset]] = {}
        for ag, pairs in self.relations.items():
            tmp: dict[str, set] = {w: set() for w in self.worlds}
            for u, v in pairs:
                tmp[u].add(v)
            out[ag] = {w: frozenset(s) for w, s in tmp.items()}
        return out

    def succ(self, agent: str, w: str) -> frozenset:
        return self.successors[agent][w]

    def ordered_designated(self) -> list[str]:
        return [w for w in self.worlds if w in self.designated]

    def atoms(self) -> set[str]:
        out: set[str] = set()
        for lab in self.labels.values():
            out |= lab
        return out

    def with_designated(self, designated: Iterable[str]) -> "EpistemicState":
        return EpistemicState(self.worlds, self.relations, self.labels, designated, self.agents)

    def _key(self):
        return (self.world_set, self.designated, self.labels, {a: r for a, r in self.relations.items() if r})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EpistemicState):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash((self.world_set, self.designated))

    def __repr__(self) -> str:
        return (
            f"EpistemicState(worlds={list(self.worlds)}, designated={sorted(self.designated)}, "
            f"agents={list(self.agents)})"
        )


def disjoint_union(states: Sequence[EpistemicState]) -> EpistemicState:
    """Tagged union; world ``w`` of the k-th state becomes ``w@k``."""
    if not states:
        raise StateError("disjoint_union needs at least one state")
    worlds: list[str] = []
    rels: dict[str, set] = {}
    labels: dict[str, frozenset] = {}
    des: list[str] = []
    agents: set[str] = set()
    for k, s in enumerate(states):
        tag = lambda w, k=k: f"{w}@{k}"
        worlds.extend(tag(w) for w in s.worlds)
        agents.update(s.agents)
        for ag, pairs in s.relations.items():
            rels.setdefault(ag, set()).update((tag(u), tag(v)) for u, v in pairs)
        labels.update({tag(w): lab for w, lab in s.labels.items()})
        des.extend(tag(w) for w in s.designated)
    return EpistemicState(worlds, rels, labels, des, agents)
