"""Static checks over a problem, its domain and its action type libraries.

Every violation is collected; a non-empty list raises TypeCheckError.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from ..expand import EntityTable, ExpansionError, Expander, atom_name
from .ast import (
    ActionDecl, ActionTypeDecl, CondEffect, Domain, EventDecl, ExplicitInit, FAnd, FEq, FFalse,
    FImply, FinitaryInit, FModal, FNot, FOr, FormalParams, FPred, FQuant, FTrue, LAnd, LForall,
    LItem, Library, Literal, ObsDefault, ObsIte, ObsStatic, PredicateDecl, Problem, Term, TermTuple,
    TypedItem, TypeExpr, list_items, walk_formula,
)
from .errors import Diagnostic, NOPOS, Pos, TypeCheckError
from .parser import parse_action_type
from .requirements import declared_keys, resolve_requirements
from .typeenv import RESERVED_TYPES, SPECIALIZABLE, TypeEnv

BASIC_SOURCE = """(:action-type basic
  :events     (?e)
  :observability-types (Fully)
  :relations  (Fully (?e ?e))
  :designated (?e)
  :conditions (?e :trivial-postconditions)
)"""

BASIC = parse_action_type(BASIC_SOURCE)

ENTITY = TypeExpr(("entity",))
AGENTLIKE = TypeExpr(("agent", "agent-group"), True)

Scope = dict  # variable -> TypeExpr


@dataclass
class TypedSpec:
    """A checked specification plus the tables the grounder needs."""

    problem: Problem
    domain: Domain
    libraries: tuple[Library, ...]
    requirements: frozenset[str]
    env: TypeEnv
    table: EntityTable
    predicates: dict[str, PredicateDecl]
    events: dict[str, EventDecl]
    action_types: dict[str, ActionTypeDecl]
    facts: frozenset[str] = frozenset()
    fact_predicates: frozenset[str] = frozenset()
    implicit_default: dict[str, str] = field(default_factory=dict)

    @property
    def actions(self) -> tuple[ActionDecl, ...]:
        return self.domain.actions

    @property
    def agents(self) -> tuple[str, ...]:
        return self.table.agents

    def expander(self) -> Expander:
        return Expander(self.table, self.facts)


def param_types(items: Iterable[TypedItem]) -> list[TypeExpr]:
    return [it.type or ENTITY for it in items]


# event conditions, by syntactic inspection


def _modal_free(f) -> bool:
    return f is None or not any(isinstance(g, FModal) for g in walk_formula(f))


def trivial_pre(e: EventDecl) -> bool:
    return e.pre is None or isinstance(e.pre, FTrue)


def trivial_post(e: EventDecl) -> bool:
    return not e.has_effects


def propositional_post(e: EventDecl) -> bool:
    if not e.has_effects:
        return True
    return all(_modal_free(x.cond) for x in list_items(e.effects) if isinstance(x, CondEffect))


EVENT_CONDITION_TESTS = {
    ":propositional-precondition": lambda e: _modal_free(e.pre),
    ":propositional-postconditions": propositional_post,
    ":propositional-event": lambda e: _modal_free(e.pre) and propositional_post(e),
    ":trivial-precondition": trivial_pre,
    ":trivial-postconditions": trivial_post,
    ":trivial-event": lambda e: trivial_pre(e) and trivial_post(e),
    ":non-trivial-precondition": lambda e: not trivial_pre(e),
    ":non-trivial-postconditions": lambda e: not trivial_post(e),
    ":non-trivial-event": lambda e: not trivial_pre(e) and not trivial_post(e),
}


class Checker:
    def __init__(self, problem: Problem, domain: Domain, libraries: tuple[Library, ...]):
        self.problem = problem
        self.domain = domain
        self.libraries = libraries
        self.diags: list[Diagnostic] = []
        self.file = problem.file
        self.reqs: frozenset[str] = frozenset()
        self.env = TypeEnv()
        self.types: dict[str, str] = {}
        self.groups: dict[str, tuple[str, ...]] = {}
        self.agents: tuple[str, ...] = ()
        self.predicates: dict[str, PredicateDecl] = {}
        self.events: dict[str, EventDecl] = {}
        self.action_types: dict[str, ActionTypeDecl] = {"basic": BASIC}
        self.facts: frozenset[str] = frozenset()
        self.worlds: tuple[str, ...] = ()
        self.implicit_default: dict[str, str] = {}

    # reporting

    def err(self, pos: Pos, rule: str, message: str) -> None:
        self.diags.append(Diagnostic(pos or NOPOS, rule, message, self.file))

    def need(self, key: str, pos: Pos, feature: str, *alternatives: str) -> bool:
        if key in self.reqs or any(a in self.reqs for a in alternatives):
            return True
        alt = "".join(f" or {a}" for a in alternatives)
        self.err(pos, "requirement", f"{feature} requires {key}{alt}")
        return False

    # driver

    def run(self) -> TypedSpec:
        p, d = self.problem, self.domain
        if p.domain != d.name:
            self.err(p.pos, "domain-ref", f"problem refers to domain '{p.domain}' but got '{d.name}'")
        wanted = [n for grp in d.libraries for n in grp]
        given = {lib.name: lib for lib in self.libraries}
        for n in wanted:
            if n not in given:
                self.file = d.file
                self.err(d.pos, "library-ref", f"action type library '{n}' was not provided")
        for n in given:
            if n not in wanted:
                self.file = given[n].file
                self.err(given[n].pos, "library-ref", f"library '{n}' is not referenced by domain '{d.name}'")
        libs = tuple(given[n] for n in dict.fromkeys(wanted) if n in given)
        self.reqs = resolve_requirements(declared_keys(p, d, *libs))

        self.file = d.file
        self.check_types()
        self.check_entities()
        self.check_predicates()
        self.file = p.file
        self.check_facts_init()
        self.check_groups()
        for lib in libs:
            self.file = lib.file
            self.check_library(lib)
        self.file = d.file
        for ev in d.events:
            self.check_event(ev)
        seen: set[str] = set()
        for act in d.actions:
            if act.name in seen:
                self.err(act.pos, "duplicate", f"action '{act.name}' declared twice")
            seen.add(act.name)
            self.check_action(act)
        self.file = p.file
        self.check_init()
        for g in p.goals:
            self.formula(g, "goals", {})
        if self.diags:
            raise TypeCheckError(self.diags)
        table = EntityTable(self.env, self.types, self.groups, self.agents)
        return TypedSpec(
            p, d, libs, self.reqs, self.env, table, self.predicates, self.events, self.action_types,
            self.facts, frozenset(n for n, pd in self.predicates.items() if pd.is_fact),
            self.implicit_default,
        )

    # types and entities

    def type_expr(self, t: TypeExpr | None) -> bool:
        if t is None:
            return True
        ok = True
        if t.either:
            self.need(":typing", t.pos, "composite type (either ...)")
        for n in t.names:
            if n not in RESERVED_TYPES:
                self.need(":typing", t.pos, f"non-reserved type '{n}'")
            if not self.env.known(n):
                self.err(t.pos, "unknown-type", f"unknown type '{n}'")
                ok = False
        return ok

    def check_types(self) -> None:
        decls: dict[str, TypedItem] = {}
        for group in self.domain.types:
            for it in group:
                self.need(":typing", it.term.pos, "type declaration")
                if it.term.text in decls:
                    self.err(it.term.pos, "duplicate", f"type '{it.term.text}' declared twice")
                decls[it.term.text] = it
        for name, it in decls.items():
            sup = None
            if it.type is not None:
                if it.type.either:
                    self.err(it.type.pos, "supertype", f"supertype of '{name}' must be a primitive type")
                sup = it.type.names[0]
                if sup in RESERVED_TYPES and sup not in SPECIALIZABLE:
                    self.err(it.type.pos, "supertype", f"type '{sup}' can not be specialized")
                    sup = None
            self.env.declare(name, sup)
        for t in self.env.check_acyclic():
            if t in decls:
                self.err(decls[t].term.pos, "type-cycle", f"cyclic type hierarchy through '{t}'")
                self.env.parent[t] = "object"

    def _declare_entity(self, it: TypedItem, default: str, root: str | None, kind: str) -> None:
        name = it.term.text
        if name in self.types:
            self.err(it.term.pos, "duplicate", f"entity '{name}' declared twice")
            return
        ty = default
        if it.type is not None:
            if it.type.either:
                self.err(it.type.pos, "entity-type", f"{kind} '{name}' must have a primitive type")
            elif self.type_expr(it.type):
                ty = it.type.names[0]
        if root is not None and not self.env.subtype(ty, root):
            self.err(it.term.pos, "entity-type", f"{kind} '{name}' has type '{ty}', not compatible with {root}")
            ty = root
        if ty in ("world", "event", "obs-type"):
            self.err(it.term.pos, "entity-type", f"{kind} '{name}' can not have type '{ty}'")
            ty = "object"
        self.types[name] = ty

    def check_entities(self) -> None:
        for group in self.domain.constants:
            for it in group:
                self._declare_entity(it, "object", "entity", "constant")
        self.file = self.problem.file
        for group in self.problem.objects:
            for it in group:
                self._declare_entity(it, "object", "object", "object")
        for group in self.problem.agents:
            for it in group:
                self._declare_entity(it, "agent", "agent", "agent")
        self.agents = tuple(e for e, t in self.types.items() if self.env.subtype(t, "agent"))
        if not self.agents:
            self.err(self.problem.pos, "no-agents", "the problem declares no agents")
        self.file = self.domain.file

    def check_predicates(self) -> None:
        for group in self.domain.predicates:
            for pd in group:
                if pd.name in self.predicates:
                    self.err(pd.pos, "duplicate", f"predicate '{pd.name}' declared twice")
                    continue
                if pd.is_fact:
                    self.need(":facts", pd.pos, f"fact predicate '{pd.name}'")
                self.params(pd.params, {})
                self.predicates[pd.name] = pd

    # terms

    def term_type(self, t: Term, scope: Scope) -> TypeExpr | None:
        if t.is_var:
            if t.text not in scope:
                self.err(t.pos, "unbound-variable", f"variable {t.text} is not bound")
                return None
            return scope[t.text] or ENTITY
        if t.text in self.types:
            return TypeExpr((self.types[t.text],))
        if t.text in self.worlds:
            return TypeExpr(("world",))
        self.err(t.pos, "unknown-entity", f"unknown entity '{t.text}'")
        return None

    def expect_term(self, t: Term, want: TypeExpr, scope: Scope, what: str) -> None:
        ty = self.term_type(t, scope)
        if ty is not None and not self.env.compatible(ty, want):
            self.err(t.pos, "type-mismatch", f"{what}: '{t.text}' of type {ty} is not compatible with {want}")

    def params(self, items: Iterable[TypedItem], scope: Scope) -> Scope:
        out = dict(scope)
        for it in items:
            self.type_expr(it.type)
            out[it.term.text] = it.type or ENTITY
        return out

    def formal_params(self, fp: FormalParams, scope: Scope) -> Scope:
        inner = self.params(fp.items, scope)
        if fp.cond is not None:
            self.need(":list-comprehensions", fp.pos, "list comprehension condition '|'")
            self.formula(fp.cond, "list-formulas", inner)
        return inner

    def list_expr(self, lst, item, scope: Scope) -> None:
        if isinstance(lst, LItem):
            item(lst.item, scope)
        elif isinstance(lst, LAnd):
            self.need(":lists", lst.pos, "list concatenation (:and ...)")
            for part in lst.parts:
                self.list_expr(part, item, scope)
        elif isinstance(lst, LForall):
            self.need(":lists", lst.pos, "quantified list (:forall ...)")
            self.list_expr(lst.body, item, self.formal_params(lst.params, scope))

    # formulas

    def formula(self, f, ctx: str, scope: Scope) -> None:
        """``ctx`` is a requirement context or "finitary" for initial theories."""

        def need_ctx(family: str, pos: Pos, what: str) -> None:
            if ctx != "finitary":
                self.need(f":{family}-{ctx}", pos, what)

        if isinstance(f, (FTrue, FFalse)):
            return
        if isinstance(f, FPred):
            self.predicate(f, scope, read=True)
            if ctx == "list-formulas" and f.name in self.predicates and not self.predicates[f.name].is_fact:
                self.err(f.pos, "list-condition", f"list conditions may only mention facts, not '{f.name}'")
        elif isinstance(f, FEq):
            self.need(":equality", f.pos, f"'{f.op}'")
            self.term_type(f.left, scope)
            self.term_type(f.right, scope)
        elif isinstance(f, FNot):
            need_ctx("negative", f.pos, "negation")
            self.formula(f.arg, ctx, scope)
        elif isinstance(f, (FAnd, FOr, FImply)):
            if not isinstance(f, FAnd):
                need_ctx("disjunctive", f.pos, "disjunction" if isinstance(f, FOr) else "implication")
            args = (f.left, f.right) if isinstance(f, FImply) else f.args
            for a in args:
                self.formula(a, ctx, scope)
        elif isinstance(f, FQuant):
            need_ctx("existential" if f.kind == "exists" else "universal", f.pos, f"'{f.kind}'")
            self.formula(f.body, ctx, self.formal_params(f.params, scope))
        elif isinstance(f, FModal):
            if ctx == "list-formulas":
                self.err(f.pos, "list-condition", "list conditions may not contain modalities")
                return
            need_ctx("modal", f.pos, "modality")
            if f.name == "Kw.":
                self.need(":knowing-whether", f.pos, "Kw. modality")
            elif f.name == "C.":
                static = all(
                    isinstance(g, FPred) and g.name in self.predicates and self.predicates[g.name].is_fact
                    for g in walk_formula(f.body) if isinstance(g, FPred)
                )
                if static:
                    self.need(":common-knowledge", f.pos, "C. modality", ":static-common-knowledge")
                else:
                    self.need(":common-knowledge", f.pos, "C. modality")
            self.modal_index(f.index, scope)
            self.formula(f.body, ctx, scope)
        else:
            self.err(getattr(f, "pos", NOPOS), "syntax", f"unexpected node {f!r}")

    def modal_index(self, index, scope: Scope) -> None:
        if isinstance(index, Term):
            if index.text == "All":
                self.need(":group-modalities", index.pos, "modality index All")
                return
            if not index.is_var and index.text in self.groups:
                self.need(":group-modalities", index.pos, "agent group modality index")
                return
            self.expect_term(index, AGENTLIKE, scope, "modality index")
            return
        self.need(":group-modalities", getattr(index, "pos", NOPOS), "agent group modality index")

        def member(tt: TermTuple, sc: Scope) -> None:
            for t in tt.terms:
                self.expect_term(t, AGENTLIKE, sc, "agent group member")

        self.list_expr(index, member, scope)

    def predicate(self, f: FPred, scope: Scope, read: bool) -> None:
        pd = self.predicates.get(f.name)
        if pd is None:
            self.err(f.pos, "unknown-predicate", f"unknown predicate '{f.name}'")
            return
        if len(f.args) != len(pd.params):
            self.err(f.pos, "arity", f"predicate '{f.name}' expects {len(pd.params)} arguments, got {len(f.args)}")
            return
        for t, want in zip(f.args, param_types(pd.params)):
            self.expect_term(t, want, scope, f"argument of '{f.name}'")

    def standard_literal(self, f: FPred, scope: Scope, where: str) -> None:
        self.predicate(f, scope, read=False)
        pd = self.predicates.get(f.name)
        if pd is not None and pd.is_fact:
            self.err(f.pos, "fact-write", f"fact predicate '{f.name}' can not appear in {where}")

    # problem parts

    def check_facts_init(self) -> None:
        fi = self.problem.facts_init
        if fi is None:
            return
        atoms = []
        for f in fi:
            self.need(":facts", f.pos, ":facts-init")
            self.predicate(f, {}, read=True)
            pd = self.predicates.get(f.name)
            if pd is not None and not pd.is_fact:
                self.err(f.pos, "facts-init", f"'{f.name}' is not a fact predicate")
            atoms.append(atom_name(f.name, (t.text for t in f.args)))
        self.facts = frozenset(atoms)

    def check_groups(self) -> None:
        decls = {}
        for group in self.problem.groups:
            for g in group:
                self.need(":agent-groups", g.pos, f"agent group '{g.name}'")
                if g.name in decls or g.name in self.types:
                    self.err(g.pos, "duplicate", f"name '{g.name}' declared twice")
                    continue
                decls[g.name] = g
                ty = "agent-group"
                if g.type is not None and self.type_expr(g.type):
                    ty = g.type.names[0]
                    if g.type.either or not self.env.subtype(ty, "agent-group"):
                        self.err(g.pos, "entity-type", f"group '{g.name}' must have a subtype of agent-group")
                        ty = "agent-group"
                self.types[g.name] = ty
        for g in decls.values():
            self.list_expr(g.members, lambda tt, sc: [self.expect_term(t, AGENTLIKE, sc, "group member")
                                                      for t in tt.terms], {})
        exp = Expander(EntityTable(self.env, self.types, {}, self.agents), self.facts)
        raw: dict[str, list[str]] = {}
        for name, g in decls.items():
            try:
                tuples = exp.list_expansion(g.members, lambda tt, b: exp.ground_tuple(tt, b))
            except ExpansionError:
                tuples = []
            raw[name] = [n for tup in tuples for n in tup]

        def members(name: str, stack: tuple[str, ...]) -> tuple[str, ...]:
            if name in stack:
                self.err(decls[name].pos, "group-cycle", f"agent group '{name}' refers to itself")
                return ()
            out: list[str] = []
            for m in raw[name]:
                out.extend(members(m, stack + (name,)) if m in raw else (m,))
            return tuple(dict.fromkeys(out))

        self.groups = {name: members(name, ()) for name in decls}
        for name, ms in self.groups.items():
            if not ms:
                self.err(decls[name].pos, "empty-group", f"agent group '{name}' has no members")

    def check_init(self) -> None:
        init = self.problem.init
        if init is None:
            self.err(self.problem.pos, "missing-init", "the problem declares no :init")
            return
        if isinstance(init, FinitaryInit):
            self.need(":finitary-S5-theories", init.pos, "finitary S5-theory init")

            def item(f, sc: Scope) -> None:
                self.formula(f, "finitary", sc)
                if isinstance(f, FModal) and isinstance(f.body, FModal):
                    inner = f.body.index
                    if isinstance(inner, Term) and inner.text not in self.agents and not inner.is_var:
                        self.err(inner.pos, "finitary-shape", f"'{inner.text}' is not an agent")

            self.list_expr(init.formulas, item, {})
            return
        self.check_explicit(init)

    def check_explicit(self, init: ExplicitInit) -> None:
        names = [w.text for w in init.worlds]
        for w in init.worlds:
            if names.count(w.text) > 1:
                self.err(w.pos, "duplicate", f"world '{w.text}' declared twice")
        self.worlds = tuple(dict.fromkeys(names))
        world = TypeExpr(("world",))
        owners = set()
        for owner, pairs in init.relations:
            if owner.text not in self.agents:
                self.err(owner.pos, "unknown-agent", f"relation owner '{owner.text}' is not an agent")
            if owner.text in owners:
                self.err(owner.pos, "duplicate", f"relation of '{owner.text}' declared twice")
            owners.add(owner.text)
            self.list_expr(pairs, lambda tt, sc: [self.expect_term(t, world, sc, "relation pair")
                                                  for t in tt.terms], {})
        seen = set()
        for w, label in init.labels:
            if w.text not in self.worlds:
                self.err(w.pos, "unknown-world", f"label for undeclared world '{w.text}'")
            if w.text in seen:
                self.err(w.pos, "duplicate", f"label of '{w.text}' declared twice")
            seen.add(w.text)
            self.list_expr(label, lambda f, sc: self.standard_literal(f, sc, "world labels"), {})
        for w in init.designated:
            if w.text not in self.worlds:
                self.err(w.pos, "unknown-world", f"designated world '{w.text}' is not declared")
        if len(set(w.text for w in init.designated)) > 1:
            self.need(":multi-pointed-models", init.designated[0].pos, "more than one designated world")

    # domain parts

    def check_event(self, ev: EventDecl) -> None:
        if ev.name in self.events:
            self.err(ev.pos, "duplicate", f"event '{ev.name}' declared twice")
            return
        self.events[ev.name] = ev
        scope = self.params(ev.params or (), {})
        if ev.pre is not None:
            self.formula(ev.pre, "preconditions", scope)
        if ev.effects is None:
            return
        self.need(":ontic-actions", ev.pos, f"effects of event '{ev.name}'")

        def effect(x, sc: Scope) -> None:
            if isinstance(x, Literal):
                self.standard_literal(x.pred, sc, "effects")
            else:
                self.need(":conditional-effects", x.pos, f"'{x.kind}' effect")
                self.formula(x.cond, "postconditions", sc)
                self.list_expr(x.literals, lambda lit, s2: self.standard_literal(lit.pred, s2, "effects"), sc)

        self.list_expr(ev.effects, effect, scope)

    def check_library(self, lib: Library) -> None:
        for at in lib.action_types:
            self.need(":partial-observability", at.pos, f"action type '{at.name}'")
            if at.name in self.action_types:
                self.err(at.pos, "duplicate", f"action type '{at.name}' declared twice")
                continue
            self.check_action_type(at)
            self.action_types[at.name] = at

    def check_action_type(self, at: ActionTypeDecl) -> None:
        evs = [e.text for e in at.events]
        for e in at.events:
            if evs.count(e.text) > 1:
                self.err(e.pos, "duplicate", f"event variable {e.text} declared twice in '{at.name}'")
        if len(set(at.obs_types)) != len(at.obs_types):
            self.err(at.pos, "duplicate", f"repeated observability type in '{at.name}'")
        event = TypeExpr(("event",))
        scope = {e: event for e in evs}
        seen = set()
        for owner, pairs in at.relations:
            if owner.text not in at.obs_types:
                self.err(owner.pos, "unknown-obs-type", f"'{owner.text}' is not an observability type of '{at.name}'")
            if owner.text in seen:
                self.err(owner.pos, "duplicate", f"relation of '{owner.text}' declared twice")
            seen.add(owner.text)

            def pair(tt: TermTuple, sc: Scope) -> None:
                for t in tt.terms:
                    if not t.is_var:
                        self.err(t.pos, "relation-pair", f"'{t.text}' is not an event variable")
                    elif t.text not in sc:
                        self.err(t.pos, "unbound-variable", f"variable {t.text} is not bound")
                    elif not self.env.compatible(sc[t.text], event):
                        self.err(t.pos, "type-mismatch", f"{t.text} is not of type event")

            self.list_expr(pairs, pair, scope)
        for d in at.designated:
            if d.text not in evs:
                self.err(d.pos, "unknown-event", f"designated {d.text} is not an event variable of '{at.name}'")
        if len({d.text for d in at.designated}) > 1:
            self.need(":multi-pointed-models", at.pos, f"multiple designated events in '{at.name}'")
        for var, _ in at.conditions or ():
            self.need(":events-conditions", var.pos, "event conditions")
            if var.text not in evs:
                self.err(var.pos, "unknown-event", f"condition on {var.text}, not an event variable of '{at.name}'")

    def check_action(self, act: ActionDecl) -> None:
        scope = self.formal_params(act.params, {})
        at = self.action_types.get(act.type_name)
        if act.type_name != "basic":
            self.need(":partial-observability", act.pos, f"action type '{act.type_name}'")
        if at is None:
            self.err(act.pos, "unknown-action-type", f"unknown action type '{act.type_name}'")
            return
        if len(act.events) != len(at.events):
            self.err(act.pos, "event-arity",
                     f"action '{act.name}' binds {len(act.events)} events, type '{at.name}' has {len(at.events)}")
        bound: dict[str, EventDecl] = {}
        for var, ae in zip(at.events, act.events):
            ev = self.events.get(ae.name)
            if ev is None:
                self.err(ae.pos, "unknown-event", f"unknown event '{ae.name}'")
                continue
            eparams = ev.params or ()
            if len(ae.args) != len(eparams):
                self.err(ae.pos, "arity", f"event '{ae.name}' expects {len(eparams)} arguments, got {len(ae.args)}")
            else:
                for t, want in zip(ae.args, param_types(eparams)):
                    self.expect_term(t, want, scope, f"argument of event '{ae.name}'")
            bound[var.text] = ev
        if len({(ae.name, tuple(t.text for t in ae.args)) for ae in act.events}) != len(act.events):
            self.err(act.pos, "duplicate-event", f"action '{act.name}' binds the same event twice")
        for var, keys in at.conditions or ():
            ev = bound.get(var.text)
            if ev is None:
                continue
            for k in keys:
                if not EVENT_CONDITION_TESTS[k](ev):
                    self.err(act.pos, k, f"action '{act.name}': event '{ev.name}' bound to {var.text} "
                                         f"of '{at.name}' violates {k}")
        self.check_obs(act, at, scope)

    def check_obs(self, act: ActionDecl, at: ActionTypeDecl, scope: Scope) -> None:
        if act.obs is None:
            if len(at.obs_types) == 1:
                self.implicit_default[act.name] = at.obs_types[0]
            else:
                self.err(act.pos, "obs-rule-1",
                         f"action '{act.name}' has no observability conditions and type '{at.name}' "
                         f"has {len(at.obs_types)} observability types")
            return
        self.need(":partial-observability", act.pos, "observability conditions")
        agent = TypeExpr(("agent",))

        def known_type(t: str, pos: Pos) -> None:
            if t not in at.obs_types:
                self.err(pos, "unknown-obs-type", f"'{t}' is not an observability type of '{at.name}'")

        def cond(x, sc: Scope) -> None:
            if isinstance(x, ObsDefault):
                known_type(x.obs_type, x.pos)
                return
            self.expect_term(x.agent, agent, sc, "observing agent")
            if isinstance(x, ObsStatic):
                known_type(x.obs_type, x.pos)
                return
            for f, t in x.branches:
                self.formula(f, "obs-conditions", sc)
                known_type(t, x.pos)
            if x.else_type is not None:
                known_type(x.else_type, x.pos)

        self.list_expr(act.obs, cond, scope)
        items = list(list_items(act.obs))
        defaults = [x for x in items if isinstance(x, ObsDefault)]
        if len(defaults) > 1:
            self.err(defaults[1].pos, "obs-rule-4", f"action '{act.name}' declares more than one default")
        if not defaults:
            for x in items:
                if isinstance(x, ObsIte) and x.else_type is None:
                    self.err(x.pos, "obs-rule-3", f"action '{act.name}': if-then-else without else and no default")
        if any(d.rule in ("unbound-variable", "unknown-entity") for d in self.diags):
            return
        self.obs_coverage(act, bool(defaults))

    def obs_coverage(self, act: ActionDecl, has_default: bool) -> None:
        """Rules 1 and 2, checked on every ground instance of the action."""
        exp = Expander(EntityTable(self.env, self.types, self.groups, self.agents), self.facts)
        reported = set()
        try:
            bindings = exp.induced_power_set(act.params)
        except ExpansionError:
            return
        for b in bindings:
            try:
                owners = exp.list_expansion(
                    act.obs, lambda x, bb: None if isinstance(x, ObsDefault) else exp.resolve(x.agent, bb),
                    b, dedup=False)
            except ExpansionError:
                return
            owners = [o for o in owners if o is not None]
            for ag in self.agents:
                n = owners.count(ag)
                if n > 1 and ("2", ag) not in reported:
                    reported.add(("2", ag))
                    self.err(act.pos, "obs-rule-2",
                             f"action '{act.name}': multiple observability conditions for agent '{ag}'")
                if n == 0 and not has_default and ("1", ag) not in reported:
                    reported.add(("1", ag))
                    self.err(act.pos, "obs-rule-1",
                             f"action '{act.name}': no observability condition for agent '{ag}' and no default")
            for o in owners:
                if o not in self.agents and ("g", o) not in reported:
                    reported.add(("g", o))
                    self.err(act.pos, "obs-agent", f"action '{act.name}': '{o}' is not an agent")


def type_check(problem: Problem, domain: Domain, libraries: Iterable[Library] = ()) -> TypedSpec:
    """Check a specification; raises TypeCheckError listing every violation."""
    return Checker(problem, domain, tuple(libraries)).run()
