"""Grounding: from a type-checked specification to an abstract planning task.

Orders are deterministic throughout: entities in declaration order, parameter
tuples in typed-product order, atoms sorted by name, actions in declaration
order and then tuple order.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

from .del_engine import AbstractAction, EffectGuards
from .expand import EntityTable, ExpansionError, Expander, atom_name, holds
from .frontend.ast import (
    ActionDecl, CondEffect, EventDecl, ExplicitInit, FinitaryInit, FModal, Literal, ObsDefault,
    ObsIte, ObsStatic,
)
from .frontend.errors import Diagnostic, EpddlError, NOPOS, Pos
from .frontend.parser import finitary_shape
from .frontend.typecheck import TypedSpec
from .logic.formula import FALSE, TRUE, And, Atom, Formula, Not, Or, modal_depth, size, walk
from .logic.frames import S5, KD45, frame_report
from .logic.state import EpistemicState

FINITARY_ATOM_CAP = 16


class GroundingError(EpddlError):
    pass


def _fail(spec: TypedSpec, pos: Pos | None, rule: str, message: str):
    raise GroundingError([Diagnostic(pos or NOPOS, rule, message, spec.problem.file)])


def _all(items: list[Formula]) -> Formula:
    if not items:
        return TRUE
    return items[0] if len(items) == 1 else And(tuple(items))


def _any(items: list[Formula]) -> Formula:
    if not items:
        return FALSE
    return items[0] if len(items) == 1 else Or(tuple(items))


def instance_name(name: str, args: Iterable[str]) -> str:
    """``name_{e1,...,ek}``, or the bare name without arguments."""
    args = tuple(args)
    return f"{name}_{{{','.join(args)}}}" if args else name


@dataclass(frozen=True)
class TaskInfo:
    problem: str
    domain: str
    libraries: tuple[str, ...]
    requirements: tuple[str, ...]
    agents_number: int
    atoms_number: int
    facts_number: int
    actions_number: int
    initial_worlds_number: int
    goal_modal_depth: int
    goal_size: int


@dataclass(frozen=True)
class GroundTask:
    atoms: tuple[str, ...]
    agents: tuple[str, ...]
    facts: tuple[str, ...]
    initial: EpistemicState
    actions: Mapping[str, AbstractAction]
    goal: Formula
    info: TaskInfo


# language


def build_language(spec: TypedSpec) -> tuple[tuple[str, ...], tuple[str, ...], frozenset[str], EntityTable]:
    """Ground atoms P (sorted), agents, fact atoms and the entity table."""
    table = spec.table
    atoms: set[str] = set()
    facts: set[str] = set()
    for name, pd in spec.predicates.items():
        domains = [table.typed(it.type) for it in pd.params]
        for combo in product(*domains):
            a = atom_name(name, combo)
            atoms.add(a)
            if pd.is_fact:
                facts.add(a)
    return tuple(sorted(atoms)), tuple(spec.agents), frozenset(facts), table


# initial state


def _frame_check(spec: TypedSpec, s: EpistemicState, pos: Pos) -> None:
    if ":general-frames" in spec.requirements:
        return
    cls = frame_report(s).classification
    if cls == S5 or (cls == KD45 and ":KD45-frames" in spec.requirements):
        return
    want = ":KD45-frames or :general-frames" if cls == KD45 else ":general-frames"
    _fail(spec, pos, "frames", f"initial state is {cls}, not S5; declare {want}")


def build_initial_explicit(spec: TypedSpec, init: ExplicitInit) -> EpistemicState:
    worlds = tuple(dict.fromkeys(w.text for w in init.worlds))
    wset = set(worlds)
    exp = Expander(spec.table.with_context(world=worlds), spec.facts)

    def known(name: str, pos: Pos) -> str:
        if name not in wset:
            _fail(spec, pos, "unknown-world", f"world '{name}' is not declared")
        return name

    rels: dict[str, list] = {}
    for owner, pairs in init.relations:
        tuples = exp.list_expansion(pairs, lambda tt, b: (exp.ground_tuple(tt, b), tt.pos))
        rels[owner.text] = [(known(u, p), known(v, p)) for (u, v), p in tuples]
    labels = {w: set(spec.facts) for w in worlds}
    for w, label in init.labels:
        atoms = exp.list_expansion(label, lambda f, b: exp.translate(f, b).name)
        labels[known(w.text, w.pos)].update(atoms)
    designated = [known(w.text, w.pos) for w in init.designated]
    return EpistemicState(worlds, rels, labels, designated, spec.agents)


def build_initial_finitary(spec: TypedSpec, init: FinitaryInit, minimal: bool = True) -> EpistemicState:
    """The state induced by a finitary S5-theory.

    Only atoms occurring in the theory vary; other non-fact atoms are false
    and fact atoms are fixed to the initial facts. With ``minimal`` the
    atoms of the world constraint are read under a closed world: a
    valuation is kept only if no valuation agreeing on the other atoms makes
    a strict subset of them true.
    """
    exp = spec.expander()
    design: list[Formula] = []
    worlds_f: list[Formula] = []
    kw: dict[str, list[Formula]] = {ag: [] for ag in spec.agents}

    def item(f, b):
        shape = finitary_shape(f)
        if shape is None:
            _fail(spec, f.pos, "finitary-shape", "formula is not a finitary S5-theory shape")
        if shape == 1:
            design.append(exp.translate(f, b))
            return
        body = f.body
        inner = body.body if isinstance(body, FModal) else body
        if shape == 2:
            worlds_f.append(exp.translate(inner, b))
        elif shape == 3:
            kw[exp.agent_index(body.index, b)].append(exp.translate(inner, b))

    exp.list_expansion(init.formulas, item, dedup=False)
    fact_atoms = build_language(spec)[2]
    psi_worlds, psi_design = _all(worlds_f), _all(design)
    closed = _atoms_of([psi_worlds]) - fact_atoms
    varying = sorted(_atoms_of([*design, *worlds_f, *(x for fs in kw.values() for x in fs)]) - fact_atoms)
    if len(varying) > FINITARY_ATOM_CAP:
        _fail(spec, init.pos, "finitary-size",
              f"finitary theory mentions {len(varying)} non-fact atoms, limit {FINITARY_ATOM_CAP}")
    labels = []
    for bits in product((False, True), repeat=len(varying)):
        lab = frozenset(a for a, on in zip(varying, bits) if on) | spec.facts
        if holds(psi_worlds, lab):
            labels.append(lab)
    if minimal:
        labels = _minimal_models(labels, closed)
    if not labels:
        _fail(spec, init.pos, "inconsistent-theory", "finitary theory admits no world")
    labels.sort(key=lambda lab: tuple(sorted(lab)))
    names = [f"w{k}" for k in range(1, len(labels) + 1)]
    by_name = dict(zip(names, labels))
    rels = {}
    for ag in spec.agents:
        sig = {w: tuple(holds(phi, lab) for phi in kw[ag]) for w, lab in by_name.items()}
        rels[ag] = [(u, v) for u in names for v in names if sig[u] == sig[v]]
    designated = [w for w in names if holds(psi_design, by_name[w])]
    if not designated:
        _fail(spec, init.pos, "inconsistent-theory", "no world satisfies the propositional part of the theory")
    return EpistemicState(names, rels, by_name, designated, spec.agents)


def _atoms_of(formulas: Iterable[Formula]) -> set[str]:
    return {n.name for phi in formulas for n in walk(phi) if isinstance(n, Atom)}


def _minimal_models(labels: list[frozenset], closed: set[str]) -> list[frozenset]:
    groups: dict[frozenset, list[frozenset]] = {}
    for lab in labels:
        groups.setdefault(lab - closed, []).append(lab & closed)
    out = []
    for rest, models in groups.items():
        out.extend(rest | m for m in models if not any(o < m for o in models))
    return out


def build_initial(spec: TypedSpec) -> EpistemicState:
    init = spec.problem.init
    if isinstance(init, FinitaryInit):
        return build_initial_finitary(spec, init)
    s = build_initial_explicit(spec, init)
    _frame_check(spec, s, init.pos)
    return s


# actions


def _effects(exp: Expander, ev: EventDecl, binding) -> tuple[dict[str, Formula], dict[str, EffectGuards]]:
    """Postconditions from the Cond_p sets, plus add/delete triggers per atom."""
    conds: dict[str, list[Formula]] = {}
    adds: dict[str, list[Formula]] = {}
    dels: dict[str, list[Formula]] = {}

    def record(p: str, cond: Formula, add: Formula | None, delete: Formula | None) -> None:
        if cond not in conds.setdefault(p, []):
            conds[p].append(cond)
        if add is not None:
            adds.setdefault(p, []).append(add)
        if delete is not None:
            dels.setdefault(p, []).append(delete)

    def lit(x: Literal, b) -> tuple[str, bool]:
        return exp.translate(x.pred, b).name, x.positive

    def item(x, b) -> None:
        if isinstance(x, Literal):
            p, pos = lit(x, b)
            record(p, TRUE if pos else FALSE, TRUE if pos else None, None if pos else TRUE)
            return
        assert isinstance(x, CondEffect)
        phi = exp.translate(x.cond, b)
        for p, pos in exp.list_expansion(x.literals, lit, b):
            if x.kind == "when" and pos:
                record(p, Or((Atom(p), phi)), phi, None)
            elif x.kind == "when":
                record(p, And((Atom(p), Not(phi))), None, phi)
            elif pos:
                record(p, phi, phi, Not(phi))
            else:
                record(p, Not(phi), Not(phi), phi)

    exp.list_expansion(ev.effects, item, binding, dedup=False)
    post = {p: _all(cs) for p, cs in conds.items()}
    guards = {p: EffectGuards(_any(adds[p]), _any(dels[p])) for p in conds if p in adds and p in dels}
    return post, guards


def _observability(spec: TypedSpec, exp: Expander, act: ActionDecl, binding) -> dict[str, dict[str, Formula]]:
    if act.obs is None:
        t = spec.implicit_default[act.name]
        return {ag: {t: TRUE} for ag in spec.agents}
    items = exp.list_expansion(act.obs, lambda x, b: (x, b), binding, dedup=False)
    default = next((x.obs_type for x, _ in items if isinstance(x, ObsDefault)), None)
    per_agent: dict[str, dict[str, list[Formula]]] = {}
    for x, b in items:
        if isinstance(x, ObsDefault):
            continue
        ag = exp.resolve(x.agent, b)
        conds = per_agent.setdefault(ag, {})
        if isinstance(x, ObsStatic):
            conds.setdefault(x.obs_type, []).append(TRUE)
            continue
        assert isinstance(x, ObsIte)
        guards = [exp.translate(f, b) for f, _ in x.branches]
        for j, (_, t) in enumerate(x.branches):
            conds.setdefault(t, []).append(_all([*(Not(g) for g in guards[:j]), guards[j]]))
        rest = x.else_type if x.else_type is not None else default
        if rest is None:
            raise ExpansionError(f"action '{act.name}': if-then-else without else and no default")
        conds.setdefault(rest, []).append(_all([Not(g) for g in guards]))
    out: dict[str, dict[str, Formula]] = {}
    for ag in spec.agents:
        if ag in per_agent:
            out[ag] = {t: _any(fs) for t, fs in per_agent[ag].items()}
        elif default is not None:
            out[ag] = {default: TRUE}
        else:
            raise ExpansionError(f"action '{act.name}': no observability condition for agent '{ag}'")
    return out


def ground_action(spec: TypedSpec, act: ActionDecl, binding: dict[str, str]) -> AbstractAction:
    exp = spec.expander()
    at = spec.action_types[act.type_name]
    name = instance_name(act.name, (binding[it.term.text] for it in act.params.items))
    events: list[str] = []
    var_event: dict[str, str] = {}
    pre: dict[str, Formula] = {}
    post: dict[str, dict[str, Formula]] = {}
    guards: dict[str, dict[str, EffectGuards]] = {}
    for var, ae in zip(at.events, act.events):
        ev = spec.events[ae.name]
        args = [exp.resolve(t, binding) for t in ae.args]
        eb = {it.term.text: a for it, a in zip(ev.params or (), args)}
        ename = instance_name(ev.name, args)
        if ename in var_event.values():
            raise ExpansionError(f"action '{name}' binds event '{ename}' twice")
        var_event[var.text] = ename
        events.append(ename)
        pre[ename] = exp.translate(ev.pre, eb) if ev.pre is not None else TRUE
        if ev.effects is not None:
            post[ename], g = _effects(exp, ev, eb)
            if g:
                guards[ename] = g
        elif ev.empty_effects:
            post[ename] = {}
    evars = tuple(var_event)
    at_exp = Expander(spec.table.with_context(event=evars), spec.facts)
    identity = {v: v for v in evars}
    rels = {}
    for owner, pairs in at.relations:
        tuples = at_exp.list_expansion(pairs, lambda tt, b: at_exp.ground_tuple(tt, b), identity)
        rels[owner.text] = [(var_event[u], var_event[v]) for u, v in tuples]
    designated = [var_event[d.text] for d in at.designated]
    obs = _observability(spec, exp, act, binding)
    return AbstractAction.build(name, events, at.obs_types, rels, pre, obs, designated, post, at.name, guards)


def ground_actions(spec: TypedSpec) -> dict[str, AbstractAction]:
    exp = spec.expander()
    out: dict[str, AbstractAction] = {}
    for act in spec.actions:
        for b in exp.induced_power_set(act.params):
            a = ground_action(spec, act, b)
            if a.name in out:
                _fail(spec, act.pos, "duplicate-action", f"ground action '{a.name}' produced twice")
            out[a.name] = a
    return out


def _skeleton(phi: Formula, opaque: dict[Formula, str]) -> Formula:
    """Replace maximal modal subformulas by fresh atoms."""
    from .logic.formula import Imply, Modal
    if isinstance(phi, Modal):
        return Atom(opaque.setdefault(phi, f"#m{len(opaque)}"))
    if isinstance(phi, Not):
        return Not(_skeleton(phi.arg, opaque))
    if isinstance(phi, (And, Or)):
        return type(phi)(tuple(_skeleton(a, opaque) for a in phi.args))
    if isinstance(phi, Imply):
        return Imply(_skeleton(phi.left, opaque), _skeleton(phi.right, opaque))
    return phi


def observability_violations(action: AbstractAction, agents: Iterable[str], max_atoms: int = 10):
    """Valuations under which an agent gets zero or several observability types.

    Modal subformulas count as independent atoms, which can only add
    valuations, so an empty result is a sound well-formedness proof.
    Returns ``(agent, true atoms, types that hold)`` triples.
    """
    out = []
    for ag in agents:
        opaque: dict[Formula, str] = {}
        conds = {t: _skeleton(f, opaque) for t, f in action.obs.get(ag, {}).items()}
        atoms = sorted(_atoms_of(conds.values()))
        if len(atoms) > max_atoms:
            raise ValueError(f"{action.name}: {len(atoms)} atoms in observability of {ag}, limit {max_atoms}")
        for bits in product((False, True), repeat=len(atoms)):
            lab = frozenset(a for a, on in zip(atoms, bits) if on)
            hits = tuple(t for t, f in conds.items() if holds(f, lab))
            if len(hits) != 1:
                out.append((ag, lab, hits))
    return out


# task


def build_goal(spec: TypedSpec) -> Formula:
    exp = spec.expander()
    return _all([exp.translate(g) for g in spec.problem.goals])


def build_task(spec: TypedSpec) -> GroundTask:
    atoms, agents, _, _ = build_language(spec)
    try:
        initial = build_initial(spec)
        actions = ground_actions(spec)
        goal = build_goal(spec)
    except ExpansionError as exc:
        _fail(spec, spec.problem.pos, "grounding", str(exc))
    facts = tuple(sorted(spec.facts))
    info = TaskInfo(
        problem=spec.problem.name,
        domain=spec.domain.name,
        libraries=tuple(lib.name for lib in spec.libraries),
        requirements=tuple(sorted(spec.requirements)),
        agents_number=len(agents),
        atoms_number=len(atoms),
        facts_number=len(facts),
        actions_number=len(actions),
        initial_worlds_number=len(initial.worlds),
        goal_modal_depth=modal_depth(goal),
        goal_size=size(goal),
    )
    return GroundTask(atoms, agents, facts, initial, actions, goal, info)


def ground_files(problem: str, domain: str, libraries: Iterable[str] = ()) -> GroundTask:
    """Parse, check and ground a specification given by file paths."""
    from .frontend import load, type_check
    return build_task(type_check(load(problem), load(domain), [load(p) for p in libraries]))


__all__ = [
    "GroundingError", "GroundTask", "TaskInfo", "build_language", "build_initial",
    "build_initial_explicit", "build_initial_finitary", "ground_action", "ground_actions",
    "build_goal", "build_task", "ground_files", "instance_name", "observability_violations",
]
