"""Hypothesis strategies for small states, formulas and actions."""

from hypothesis import strategies as st

from epddl.del_engine import AbstractAction, EpistemicAction
from epddl.logic.formula import (
    FALSE, TRUE, And, Atom, Formula, Imply, Modal, ModalKind, Not, Or, conj,
)
from epddl.logic.state import EpistemicState

AGENT_POOL = ("a", "b", "c")
ATOM_POOL = ("p", "q", "r", "s", "t", "u")


@st.composite
def languages(draw, max_agents=3, max_atoms=6):
    agents = AGENT_POOL[: draw(st.integers(1, max_agents))]
    atoms = ATOM_POOL[: draw(st.integers(1, max_atoms))]
    return agents, atoms


@st.composite
def states(draw, agents=None, atoms=None, max_worlds=5, single=False):
    if agents is None:
        agents, atoms = draw(languages())
    n = draw(st.integers(1, max_worlds))
    worlds = [f"w{k}" for k in range(n)]
    pairs = [(u, v) for u in worlds for v in worlds]
    rels = {ag: draw(st.sets(st.sampled_from(pairs))) for ag in agents}
    labels = {w: draw(st.sets(st.sampled_from(atoms))) for w in worlds}
    if single:
        des = {draw(st.sampled_from(worlds))}
    else:
        des = draw(st.sets(st.sampled_from(worlds), min_size=1))
    return EpistemicState(worlds, rels, labels, des, agents)


def _index(agents, group_ok=True):
    single = st.sampled_from(agents)
    if not group_ok:
        return single
    group = st.sets(st.sampled_from(agents), min_size=1).map(frozenset)
    return st.one_of(single, group)


def formulas(agents, atoms, max_depth=3, modal=True):
    base = st.one_of(
        st.sampled_from([Atom(p) for p in atoms]),
        st.sampled_from([TRUE, FALSE]),
    )

    def extend(children):
        parts = [
            children.map(Not),
            st.lists(children, min_size=1, max_size=3).map(lambda xs: And(tuple(xs))),
            st.lists(children, min_size=1, max_size=3).map(lambda xs: Or(tuple(xs))),
            st.tuples(children, children).map(lambda t: Imply(*t)),
        ]
        if modal:
            kinds = st.sampled_from(list(ModalKind))
            parts.append(
                st.tuples(kinds, _index(agents), children).map(
                    lambda t: Modal(t[0], t[1] if not t[0].is_ck else _as_set(t[1]), t[2])
                )
            )
        return st.one_of(*parts)

    return st.recursive(base, extend, max_leaves=max_depth * 3)


def _as_set(index):
    return frozenset([index]) if isinstance(index, str) else index


@st.composite
def event_parts(draw, atoms, agents, max_events=3):
    n = draw(st.integers(1, max_events))
    events = [f"e{k}" for k in range(n)]
    pre_f = st.one_of(st.just(TRUE), formulas(agents, atoms, max_depth=2))
    pre = {e: draw(pre_f) for e in events}
    post = {}
    for e in events:
        touched = draw(st.sets(st.sampled_from(atoms), max_size=3))
        if touched:
            post[e] = {p: draw(formulas(agents, atoms, max_depth=1, modal=False)) for p in sorted(touched)}
    des = draw(st.sets(st.sampled_from(events), min_size=1))
    pairs = [(e, f) for e in events for f in events]
    return events, pre, post, des, pairs


@st.composite
def std_actions(draw, agents, atoms):
    events, pre, post, des, pairs = draw(event_parts(atoms, agents))
    rels = {ag: draw(st.sets(st.sampled_from(pairs))) for ag in agents}
    # encourage agents sharing relations so abstraction has non-singleton classes
    if len(agents) > 1 and draw(st.booleans()):
        rels[agents[-1]] = rels[agents[0]]
    return EpistemicAction.build("x", events, rels, pre, des, post=post, agents=agents)


@st.composite
def abstract_actions(draw, agents, atoms):
    events, pre, post, des, pairs = draw(event_parts(atoms, agents))
    k = draw(st.integers(1, 3))
    types = [f"t{j}" for j in range(k)]
    rels = {t: draw(st.sets(st.sampled_from(pairs))) for t in types}
    obs = {}
    for ag in agents:
        order = draw(st.permutations(types))
        conds = [draw(formulas(agents, atoms, max_depth=1)) for _ in order[:-1]]
        obs[ag] = chain_obs(order, conds)
    return AbstractAction.build("y", events, types, rels, pre, obs, des, post=post)


def chain_obs(order, conds) -> dict[str, Formula]:
    """If-then-else chain: type ``order[j]`` wins when ``conds[j]`` is the first true guard."""
    out = {}
    negs = []
    for t, c in zip(order, conds):
        out[t] = conj(negs + [c])
        negs.append(Not(c))
    out[order[len(conds)]] = conj(negs)
    return out
