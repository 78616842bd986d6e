"""Bisimulation: decision, contraction, canonical keys and pointing analysis."""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass

from .state import EpistemicState, disjoint_union


def coarsest_partition(state: EpistemicState) -> dict[str, int]:
    """Block id per world of the largest bisimulation on ``state`` (partition refinement)."""
    block = {}
    ids: dict = {}
    for w in state.worlds:
        block[w] = ids.setdefault(state.labels[w], len(ids))
    n = len(ids)
    while True:
        ids = {}
        new = {}
        for w in state.worlds:
            sig = (block[w],) + tuple(
                frozenset(block[v] for v in state.successors[ag][w]) for ag in state.agents
            )
            new[w] = ids.setdefault(sig, len(ids))
        block = new
        if len(ids) == n:
            return block
        n = len(ids)


def bisimilar(a: EpistemicState, b: EpistemicState) -> bool:
    """Every designated world of one state is bisimilar to a designated world of the other."""
    u = disjoint_union([a, b])
    block = coarsest_partition(u)
    da = {block[f"{w}@0"] for w in a.designated}
    db = {block[f"{w}@1"] for w in b.designated}
    return da == db


def generated_submodel(state: EpistemicState) -> EpistemicState:
    """Restriction to worlds reachable from the designated ones."""
    seen = set(state.designated)
    queue = deque(state.ordered_designated())
    while queue:
        w = queue.popleft()
        for ag in state.agents:
            for v in state.successors[ag][w]:
                if v not in seen:
                    seen.add(v)
                    queue.append(v)
    worlds = [w for w in state.worlds if w in seen]
    rels = {ag: {(u, v) for u, v in pairs if u in seen} for ag, pairs in state.relations.items()}
    return EpistemicState(worlds, rels, {w: state.labels[w] for w in worlds}, state.designated, state.agents)


def _canonical_colors(state: EpistemicState) -> dict[str, int]:
    """Name-independent colors whose classes are the bisimulation classes.

    Colors are ranks of sorted signatures, so bisimilar generated submodels
    receive identical colorings.
    """
    ranks = sorted({tuple(sorted(state.labels[w])) for w in state.worlds})
    rank_of = {r: i for i, r in enumerate(ranks)}
    color = {w: rank_of[tuple(sorted(state.labels[w]))] for w in state.worlds}
    n = len(ranks)
    while True:
        sigs = {}
        for w in state.worlds:
            sigs[w] = (color[w],) + tuple(
                (ag, tuple(sorted({color[v] for v in state.successors[ag][w]})))
                for ag in state.agents
                if state.successors[ag][w]
            )
        order = sorted(set(sigs.values()))
        rank_of = {s: i for i, s in enumerate(order)}
        color = {w: rank_of[sigs[w]] for w in state.worlds}
        if len(order) == n:
            return color
        n = len(order)


def contraction(state: EpistemicState) -> EpistemicState:
    """Bisimulation quotient of the generated submodel; worlds are named ``c0, c1, ...``."""
    sub = generated_submodel(state)
    color = _canonical_colors(sub)
    name = {c: f"c{c}" for c in sorted(set(color.values()))}
    labels = {name[color[w]]: sub.labels[w] for w in sub.worlds}
    rels = {
        ag: {(name[color[u]], name[color[v]]) for u, v in pairs} for ag, pairs in sub.relations.items()
    }
    return EpistemicState(
        [name[c] for c in sorted(name)], rels, labels, {name[color[w]] for w in sub.designated}, sub.agents
    )


def canonical_key(state: EpistemicState) -> str:
    """Digest that is equal exactly for bisimilar states."""
    q = contraction(state)
    payload = {
        "worlds": [[w, sorted(q.labels[w])] for w in q.worlds],
        "relations": {ag: sorted(map(list, pairs)) for ag, pairs in q.relations.items() if pairs},
        "designated": sorted(q.designated),
    }
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


@dataclass(frozen=True)
class Pointing:
    global_: bool
    local_for: frozenset
    nondeterministic: bool


def components(state: EpistemicState) -> list[EpistemicState]:
    """Connected components (ignoring edge direction) that contain designated worlds."""
    sub = generated_submodel(state)
    adj: dict[str, set] = {w: set() for w in sub.worlds}
    for pairs in sub.relations.values():
        for u, v in pairs:
            adj[u].add(v)
            adj[v].add(u)
    seen: set[str] = set()
    out = []
    for start in sub.ordered_designated():
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            w = queue.popleft()
            for v in adj[w]:
                if v not in comp:
                    comp.add(v)
                    queue.append(v)
        seen |= comp
        worlds = [w for w in sub.worlds if w in comp]
        rels = {ag: {(u, v) for u, v in pairs if u in comp} for ag, pairs in sub.relations.items()}
        out.append(
            EpistemicState(worlds, rels, {w: sub.labels[w] for w in worlds}, comp & sub.designated, sub.agents)
        )
    return out


def analyze_pointing(state: EpistemicState) -> Pointing:
    des = state.designated
    local = frozenset(
        ag for ag in state.agents if all(state.successors[ag][w] <= des for w in des)
    )
    comps = components(state)
    nondet = any(
        not bisimilar(comps[i], comps[j]) for i in range(len(comps)) for j in range(i + 1, len(comps))
    )
    return Pointing(len(des) == 1, local, nondet)
