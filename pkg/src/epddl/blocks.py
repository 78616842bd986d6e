"""Hand-built Epistemic Blocks World states and actions.

Three agents watch four blocks on three columns: ``a`` sees only from
above, ``l`` and ``r`` look from the left and right. These fixtures back
the worked-example tests and the reference planning task; atom names
follow the grounder's ``pred_arg1_arg2`` scheme.
"""

from __future__ import annotations

from itertools import permutations, product

from .del_engine import AbstractAction, EffectGuards, EpistemicAction, abstract
from .logic.formula import (
    FALSE, TRUE, And, Atom, Formula, Imply, Not, box, ck, conj, kw,
)
from .logic.state import EpistemicState

AGENTS = ("a", "l", "r")
BLOCKS = ("b1", "b2", "b3", "b4")
COLUMNS = ("c1", "c2", "c3")
POSITIONS = BLOCKS + COLUMNS


def on(b: str, x: str) -> Atom:
    return Atom(f"on_{b}_{x}")


def clear(x: str) -> Atom:
    return Atom(f"clear_{x}")


def distracted(i: str) -> Atom:
    return Atom(f"distracted_{i}")


_CLEAR = ("clear_b2", "clear_b3", "clear_b4")
CONFIGS = {
    "w1": ("on_b1_c1", "on_b2_b1", "on_b3_c2", "on_b4_c3") + _CLEAR,
    "w2": ("on_b1_c2", "on_b2_c1", "on_b3_b1", "on_b4_c3") + _CLEAR,
    "w3": ("on_b1_c3", "on_b2_c1", "on_b3_c2", "on_b4_b1") + _CLEAR,
}


def multi_agent_bw(designated=("w1",), agents=AGENTS) -> EpistemicState:
    """The three-world S5 state; ``agents`` renames (a, l, r) in order."""
    a, l, r = agents
    W = ("w1", "w2", "w3")
    rels = {
        a: {(u, v) for u in W for v in W},
        l: {("w1", "w1"), ("w2", "w2"), ("w2", "w3"), ("w3", "w2"), ("w3", "w3")},
        r: {("w1", "w1"), ("w1", "w2"), ("w2", "w1"), ("w2", "w2"), ("w3", "w3")},
    }
    return EpistemicState(W, rels, CONFIGS, designated, agents)


def local_state_r(agents=AGENTS) -> EpistemicState:
    """``s_r``: the same model seen from r, designated {w1, w2}."""
    return multi_agent_bw(("w1", "w2"), agents)


def nondeterministic_state() -> EpistemicState:
    """Two disconnected single-world components, both designated."""
    W = ("w1", "w2")
    rels = {ag: {(w, w) for w in W} for ag in AGENTS}
    return EpistemicState(W, rels, {w: CONFIGS[w] for w in W}, W, AGENTS)


def ann(phi: Formula, name: str = "ann", agents=AGENTS) -> EpistemicAction:
    """Public announcement of ``phi``."""
    return EpistemicAction.build(name, ["e"], {ag: {("e", "e")} for ag in agents}, {"e": phi}, ["e"])


def _move_effects(b: str, x: str, y: str) -> dict[str, Formula]:
    return {on(b, x).name: FALSE, clear(y).name: FALSE, on(b, y).name: TRUE, clear(x).name: TRUE}


def _move_guards(b: str, x: str, y: str) -> dict[str, EffectGuards]:
    out = {}
    for p in (on(b, y), clear(x)):
        out[p.name] = EffectGuards(TRUE, FALSE)
    for p in (on(b, x), clear(y)):
        out[p.name] = EffectGuards(FALSE, TRUE)
    return out


def priv_move(i: str, b: str, x: str, y: str, agents=AGENTS, name: str | None = None) -> EpistemicAction:
    """Agent ``i`` moves ``b`` from ``x`` to ``y``; everybody else is oblivious."""
    E = ("e", "nil")
    rels = {}
    for j in agents:
        rels[j] = {("e", "e"), ("nil", "nil")} if j == i else {("e", "nil"), ("nil", "nil")}
    pre = {"e": box(i, And((on(b, x), clear(b), clear(y)))), "nil": TRUE}
    return EpistemicAction.build(
        name or f"privMove_{{{i},{b},{x},{y}}}", E, rels, pre, ["e"],
        post={"e": _move_effects(b, x, y)}, guards={"e": _move_guards(b, x, y)},
    )


def quasi_priv_peek(i: str, j: str, b: str, x: str, agents=AGENTS, name: str | None = None) -> EpistemicAction:
    """``i`` senses whether ``b`` is on ``x``, ``j`` watches, the rest are oblivious."""
    E = ("e", "f", "nil")
    rels = {}
    for k in agents:
        if k == i:
            rels[k] = {("e", "e"), ("f", "f"), ("nil", "nil")}
        elif k == j:
            rels[k] = {("e", "e"), ("e", "f"), ("f", "e"), ("f", "f"), ("nil", "nil")}
        else:
            rels[k] = {("e", "nil"), ("f", "nil"), ("nil", "nil")}
    pre = {
        "e": And((clear(b), on(b, x))),
        "f": And((clear(b), Not(on(b, x)))),
        "nil": TRUE,
    }
    return EpistemicAction.build(name or f"quasiPrivPeek_{{{i},{j},{b},{x}}}", E, rels, pre, ["e", "f"])


def abs_priv_move(i: str, b: str, x: str, y: str, agents=AGENTS) -> AbstractAction:
    """Private move where non-moving agents are oblivious only when distracted."""
    psi_blocks = box(i, And((on(b, x), clear(b), clear(y))))
    psi_obs = conj(Imply(Not(distracted(j)), box(j, Not(distracted(i)))) for j in agents)
    pre = {"e": And((Not(distracted(i)), psi_blocks, psi_obs)), "nil": TRUE}
    obs = {}
    for j in agents:
        if j == i:
            obs[j] = {"f": TRUE, "o": FALSE}
        else:
            obs[j] = {"f": Not(distracted(j)), "o": distracted(j)}
    return AbstractAction.build(
        f"absPrivMove_{{{i},{b},{x},{y}}}", ("e", "nil"), ("f", "o"),
        {"f": {("e", "e"), ("nil", "nil")}, "o": {("e", "nil"), ("nil", "nil")}},
        pre, obs, ["e"], post={"e": _move_effects(b, x, y)}, action_type="private",
        guards={"e": _move_guards(b, x, y)},
    )


def with_distracted(s: EpistemicState, who) -> EpistemicState:
    """Copy of ``s`` with ``distracted_i`` added to every label for ``i`` in ``who``."""
    extra = {distracted(i).name for i in who}
    return EpistemicState(s.worlds, s.relations, {w: s.labels[w] | extra for w in s.worlds}, s.designated, s.agents)


def planning_goal() -> Formula:
    """Goal of the reference planning task on ``s_r``."""
    p = on("b2", "b1")
    return And((
        on("b4", "b1"),
        kw("a", p),
        box("r", kw("a", p)),
        box("l", ck(AGENTS, Not(kw(frozenset({"a", "r"}), p)))),
    ))


def planning_actions() -> dict[str, AbstractAction]:
    """Announcements, private moves and quasi-private peeks, abstracted.

    Names follow ``kind_{args}``; positions range over blocks and columns
    with the block distinct from both positions and ``x != y``.
    """
    acts: list[EpistemicAction] = []
    for i, b, x in product(AGENTS, BLOCKS, POSITIONS):
        if b == x:
            continue
        acts.append(ann(box(i, on(b, x)), f"ann_{{{i},{b},{x}}}"))
    for i, b, x, y in product(AGENTS, BLOCKS, POSITIONS, POSITIONS):
        if len({b, x, y}) == 3:
            acts.append(priv_move(i, b, x, y))
    for (i, j), b, x in product(permutations(AGENTS, 2), BLOCKS, POSITIONS):
        if b != x:
            acts.append(quasi_priv_peek(i, j, b, x))
    return {a.name: abstract(a) for a in acts}


EXHIBITED_PLAN = ("ann_{r,b4,c3}", "quasiPrivPeek_{a,r,b2,b1}", "privMove_{a,b4,c3,b1}")
