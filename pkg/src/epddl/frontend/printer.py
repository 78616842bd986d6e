"""Pretty printer producing EPDDL text that parses back to the same tree."""

from __future__ import annotations

from .ast import (
    ActionDecl, ActionTypeDecl, CondEffect, Domain, EventDecl, ExplicitInit, FAnd, FEq, FFalse,
    FImply, FinitaryInit, FModal, FNot, FOr, FormalParams, FPred, FQuant, FTrue, LAnd, LForall,
    LItem, Library, Literal, ObsDefault, ObsIte, ObsStatic, PredicateDecl, Problem, Term, TermTuple,
    TypedItem,
)


def typed_list(items: tuple[TypedItem, ...]) -> str:
    out: list[str] = []
    i = 0
    while i < len(items):
        j = i
        while j < len(items) and items[j].type == items[i].type:
            j += 1
        out.extend(it.term.text for it in items[i:j])
        if items[i].type is not None:
            out += ["-", str(items[i].type)]
        i = j
    return " ".join(out)


def params(fp: FormalParams) -> str:
    body = typed_list(fp.items)
    if fp.cond is not None:
        body += f" | {formula(fp.cond)}"
    return f"({body})"


def formula(f) -> str:
    if isinstance(f, FTrue):
        return "(true)"
    if isinstance(f, FFalse):
        return "(false)"
    if isinstance(f, FPred):
        return "(" + " ".join([f.name, *(t.text for t in f.args)]) + ")"
    if isinstance(f, FEq):
        return f"({f.op} {f.left.text} {f.right.text})"
    if isinstance(f, FNot):
        return f"(not {formula(f.arg)})"
    if isinstance(f, (FAnd, FOr)):
        op = "and" if isinstance(f, FAnd) else "or"
        return f"({op} " + " ".join(formula(a) for a in f.args) + ")"
    if isinstance(f, FImply):
        return f"(imply {formula(f.left)} {formula(f.right)})"
    if isinstance(f, FQuant):
        return f"({f.kind} {params(f.params)} {formula(f.body)})"
    if isinstance(f, FModal):
        close = "]" if f.bracket == "[" else ">"
        name = f"{f.name} " if f.name else ""
        index = f.index.text if isinstance(f.index, Term) else lst(f.index, tuple_)
        return f"({f.bracket}{name}{index}{close} {formula(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


def tuple_(tt: TermTuple) -> str:
    return "(" + " ".join(t.text for t in tt.terms) + ")"


def lst(node, item) -> str:
    if isinstance(node, LItem):
        return item(node.item)
    if isinstance(node, LAnd):
        return "(:and " + " ".join(lst(p, item) for p in node.parts) + ")"
    if isinstance(node, LForall):
        return f"(:forall {params(node.params)} {lst(node.body, item)})"
    raise TypeError(f"not a list: {node!r}")


def literal(x: Literal) -> str:
    return formula(x.pred) if x.positive else f"(not {formula(x.pred)})"


def effect(x) -> str:
    if isinstance(x, Literal):
        return literal(x)
    assert isinstance(x, CondEffect)
    return f"({x.kind} {formula(x.cond)} {lst(x.literals, literal)})"


def obs(x) -> str:
    if isinstance(x, ObsDefault):
        return f"(default {x.obs_type})"
    if isinstance(x, ObsStatic):
        return f"({x.agent.text} {x.obs_type})"
    assert isinstance(x, ObsIte)
    parts = [f"if {formula(x.branches[0][0])} {x.branches[0][1]}"]
    parts += [f"else-if {formula(f)} {t}" for f, t in x.branches[1:]]
    if x.else_type is not None:
        parts.append(f"else {x.else_type}")
    return f"({x.agent.text} " + " ".join(parts) + ")"


def _reqs(node) -> list[str]:
    return [f"  (:requirements {' '.join(r.keys)})" for r in node.requirements]


def _relations(rels) -> str:
    return "(" + " ".join(f"{o.text} {lst(pairs, tuple_)}" for o, pairs in rels) + ")"


def problem(p: Problem) -> str:
    out = [f"(define (problem {p.name})", f"  (:domain {p.domain})", *_reqs(p)]
    out += [f"  (:objects {typed_list(g)})" for g in p.objects]
    out += [f"  (:agents {typed_list(g)})" for g in p.agents]
    for grp in p.groups:
        decls = []
        for g in grp:
            ty = f" - {g.type}" if g.type is not None else ""
            decls.append(f"({g.name}{ty} {lst(g.members, tuple_)})")
        out.append(f"  (:agent-groups {' '.join(decls)})")
    init = p.init
    if isinstance(init, ExplicitInit):
        labels = " ".join(f"{w.text} {lst(lab, formula)}" for w, lab in init.labels)
        out.append(
            f"  (:init :worlds ({' '.join(w.text for w in init.worlds)})"
            f" :relations {_relations(init.relations)}"
            f" :labels ({labels})"
            f" :designated ({' '.join(w.text for w in init.designated)}))"
        )
    elif isinstance(init, FinitaryInit):
        out.append(f"  (:init {lst(init.formulas, formula)})")
    if p.facts_init is not None:
        out.append("  (:facts-init " + " ".join(formula(f) for f in p.facts_init) + ")")
    out += [f"  (:goal {formula(g)})" for g in p.goals]
    return "\n".join(out) + "\n)\n"


def _predicate(pd: PredicateDecl) -> str:
    fact = ":fact " if pd.is_fact else ""
    rest = typed_list(pd.params)
    return f"({fact}{pd.name}{' ' + rest if rest else ''})"


def _event(e: EventDecl) -> str:
    parts = [f"(:event {e.name}"]
    if e.params is not None:
        parts.append(f":parameters ({typed_list(e.params)})")
    if e.pre is not None:
        parts.append(f":precondition {formula(e.pre)}")
    if e.effects is not None:
        parts.append(f":effects {lst(e.effects, effect)}")
    elif e.empty_effects:
        parts.append(":effects ()")
    return "  " + " ".join(parts) + ")"


def _action(a: ActionDecl) -> str:
    events = " ".join("(" + " ".join([ae.name, *(t.text for t in ae.args)]) + ")" for ae in a.events)
    parts = [f"(:action {a.name}", f":parameters {params(a.params)}", f":action-type ({a.type_name} {events})"]
    if a.obs is not None:
        parts.append(f":observability-conditions {lst(a.obs, obs)}")
    return "  " + " ".join(parts) + ")"


def domain(d: Domain) -> str:
    out = [f"(define (domain {d.name})"]
    out += [f"  (:action-type-libraries {' '.join(g)})" for g in d.libraries]
    out += _reqs(d)
    out += [f"  (:types {typed_list(g)})" for g in d.types]
    out += ["  (:predicates " + " ".join(_predicate(pd) for pd in g) + ")" for g in d.predicates]
    out += [f"  (:constants {typed_list(g)})" for g in d.constants]
    out += [_event(e) for e in d.events]
    out += [_action(a) for a in d.actions]
    return "\n".join(out) + "\n)\n"


def action_type(at: ActionTypeDecl) -> str:
    parts = [
        f"(:action-type {at.name}",
        f":events ({' '.join(e.text for e in at.events)})",
        f":observability-types ({' '.join(at.obs_types)})",
        f":relations {_relations(at.relations)}",
        f":designated ({' '.join(d.text for d in at.designated)})",
    ]
    if at.conditions is not None:
        conds = " ".join(f"{v.text} {' '.join(keys)}" for v, keys in at.conditions)
        parts.append(f":conditions ({conds})")
    return " ".join(parts) + ")"


def library(lib: Library) -> str:
    out = [f"(define (action-type-library {lib.name})", *_reqs(lib)]
    out += ["  " + action_type(at) for at in lib.action_types]
    return "\n".join(out) + "\n)\n"


def pretty(node) -> str:
    if isinstance(node, Problem):
        return problem(node)
    if isinstance(node, Domain):
        return domain(node)
    if isinstance(node, Library):
        return library(node)
    if isinstance(node, ActionTypeDecl):
        return action_type(node)
    return formula(node)
