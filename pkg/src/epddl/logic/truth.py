"""Truth of ground formulas in Kripke states.

Evaluation computes the extension (set of satisfying worlds) of every
subformula bottom-up, so each subformula is visited once per call.
"""

from __future__ import annotations

from collections import deque

from .formula import Atom, And, Bottom, Formula, Imply, Modal, ModalKind, Not, Or, Top
from .state import EpistemicState, StateError


def _check_agents(state: EpistemicState, agents) -> None:
    unknown = set(agents) - set(state.agents)
    if unknown:
        raise StateError(f"unknown agent(s) in modal index: {sorted(unknown)}")


def _box(state: EpistemicState, agent: str, ext: frozenset) -> frozenset:
    succ = state.successors[agent]
    return frozenset(w for w in state.worlds if succ[w] <= ext)


def _diamond(state: EpistemicState, agent: str, ext: frozenset) -> frozenset:
    succ = state.successors[agent]
    return frozenset(w for w in state.worlds if not succ[w].isdisjoint(ext))


def _reaches(state: EpistemicState, agents, targets: frozenset) -> frozenset:
    """Worlds with an R_G-path of length >= 1 into ``targets`` (backward BFS)."""
    preds: dict[str, set] = {w: set() for w in state.worlds}
    for ag in agents:
        for u, v in state.relations[ag]:
            preds[v].add(u)
    seen: set[str] = set()
    queue = deque()
    for t in targets:
        for u in preds[t]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    while queue:
        v = queue.popleft()
        for u in preds[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return frozenset(seen)


def extension(state: EpistemicState, phi: Formula, _memo: dict | None = None) -> frozenset:
    """The set of worlds of ``state`` where ``phi`` holds."""
    memo = {} if _memo is None else _memo
    hit = memo.get(phi)
    if hit is not None:
        return hit
    W = state.world_set
    if isinstance(phi, Top):
        out = W
    elif isinstance(phi, Bottom):
        out = frozenset()
    elif isinstance(phi, Atom):
        out = frozenset(w for w in state.worlds if phi.name in state.labels[w])
    elif isinstance(phi, Not):
        out = W - extension(state, phi.arg, memo)
    elif isinstance(phi, And):
        out = W
        for a in phi.args:
            out = out & extension(state, a, memo)
    elif isinstance(phi, Or):
        out = frozenset()
        for a in phi.args:
            out = out | extension(state, a, memo)
    elif isinstance(phi, Imply):
        out = (W - extension(state, phi.left, memo)) | extension(state, phi.right, memo)
    elif isinstance(phi, Modal):
        out = _modal(state, phi, memo)
    else:
        raise TypeError(f"not a formula: {phi!r}")
    memo[phi] = out
    return out


def _modal(state: EpistemicState, phi: Modal, memo: dict) -> frozenset:
    agents = sorted(phi.agents)
    _check_agents(state, agents)
    W = state.world_set
    inner = extension(state, phi.arg, memo)
    kind = phi.kind
    if kind is ModalKind.BOX:
        out = W
        for ag in agents:
            out = out & _box(state, ag, inner)
        return out
    if kind is ModalKind.DIAMOND:
        out = frozenset()
        for ag in agents:
            out = out | _diamond(state, ag, inner)
        return out
    if kind in (ModalKind.KW_BOX, ModalKind.KW_DIAMOND):
        # Kw_i p and Kw_i ~p have the same extension, so the dual is a complement
        neg = W - inner
        out = W
        for ag in agents:
            out = out & (_box(state, ag, inner) | _box(state, ag, neg))
        return out if kind is ModalKind.KW_BOX else W - out
    if kind is ModalKind.CK_BOX:
        return W - _reaches(state, agents, W - inner)
    if kind is ModalKind.CK_DIAMOND:
        return _reaches(state, agents, inner)
    raise TypeError(f"unknown modality {kind}")


def evaluate_at_world(state: EpistemicState, w: str, phi: Formula) -> bool:
    """Truth of ``phi`` at world ``w``; designated worlds are ignored."""
    if w not in state.world_set:
        raise StateError(f"unknown world {w!r}")
    return w in extension(state, phi)


def evaluate(state: EpistemicState, phi: Formula) -> bool:
    """Truth in a multi-pointed state: ``phi`` must hold at every designated world."""
    return state.designated <= extension(state, phi)
