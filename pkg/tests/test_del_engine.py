"""Product updates, observability types, induction and abstraction."""

import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from epddl.blocks import (
    AGENTS, abs_priv_move, ann, clear, local_state_r, on, priv_move, quasi_priv_peek,
    with_distracted,
)
from epddl.del_engine import (
    AbstractAction, EffectGuards, EpistemicAction, InconsistentEffects, MalformedObservability,
    NotApplicable, abstract, abstract_product_update, induce, is_applicable, observability_type_of,
    product_update,
)
from epddl.logic import TRUE, Atom, Not, bisimilar, box, evaluate, frame_report, kw
from epddl.logic.formula import FALSE
from epddl.logic.truth import evaluate_at_world
from strategies import abstract_actions, chain_obs, formulas, languages, states, std_actions

ANN = box("r", Not(on("b1", "c3")))


def s_prime():
    return product_update(local_state_r(), ann(ANN))


def test_public_announcement_keeps_both_worlds():
    sr = local_state_r()
    a = ann(ANN)
    assert is_applicable(sr, a)
    s1 = product_update(sr, a)
    assert set(s1.worlds) == {"(w1|e)", "(w2|e)"}
    assert s1.designated == {"(w1|e)", "(w2|e)"}
    assert s1.labels["(w1|e)"] == sr.labels["w1"]
    assert s1.relations["a"] == s1.relations["r"] == {
        ("(w1|e)", "(w1|e)"), ("(w1|e)", "(w2|e)"), ("(w2|e)", "(w1|e)"), ("(w2|e)", "(w2|e)"),
    }
    assert s1.relations["l"] == {("(w1|e)", "(w1|e)"), ("(w2|e)", "(w2|e)")}


def test_trivial_designated_event_is_applicable():
    a = EpistemicAction.build("t", ["e"], {ag: {("e", "e")} for ag in AGENTS}, {"e": TRUE}, ["e"])
    assert is_applicable(local_state_r(), a)


def test_private_move_applicability_and_update():
    s1 = s_prime()
    pm = priv_move("l", "b2", "b1", "b3")
    # v2 has no applicable designated event, so the strict check fails
    assert not is_applicable(s1, pm)
    with pytest.raises(NotApplicable):
        product_update(s1, pm)
    s2 = product_update(s1, pm, require_applicable=False)
    v1e, v1n, v2n = "((w1|e)|e)", "((w1|e)|nil)", "((w2|e)|nil)"
    assert set(s2.worlds) == {v1e, v1n, v2n}
    assert s2.designated == {v1e}
    lab = s2.labels[v1e]
    assert on("b2", "b3").name in lab and clear("b1").name in lab
    assert on("b2", "b1").name not in lab and clear("b3").name not in lab
    assert evaluate(s2, box("l", on("b2", "b3")))
    assert s2.relations["l"] >= {(v1e, v1e)}
    assert {(v1e, v1n), (v1e, v2n)} <= s2.relations["a"] & s2.relations["r"]
    rep = frame_report(s2)
    assert rep.classification == "KD45"


def test_quasi_private_peek():
    s3 = product_update(s_prime(), quasi_priv_peek("a", "r", "b2", "b1"))
    assert len(s3.worlds) == 4
    assert s3.designated == {"((w1|e)|e)", "((w2|e)|f)"}
    p = on("b2", "b1")
    assert evaluate(s3, kw("a", p))
    assert evaluate(s3, Not(kw("r", p)))
    assert evaluate(s3, box("l", Not(kw(frozenset({"a", "r"}), p))))
    assert frame_report(s3).classification == "KD45"


def test_observability_types_of_abstract_private_move():
    s = with_distracted(s_prime(), ["a"])
    x = abs_priv_move("l", "b2", "b1", "b3")
    assert [observability_type_of(x, s, i) for i in AGENTS] == ["o", "f", "f"]


def test_static_observability():
    a = AbstractAction.build("s", ["e"], ["t", "u"], {"t": {("e", "e")}}, {"e": TRUE},
                             {ag: {"t": TRUE} for ag in AGENTS}, ["e"])
    assert observability_type_of(a, local_state_r(), "l") == "t"


def test_malformed_observability():
    both = AbstractAction.build("m", ["e"], ["t", "u"], {}, {"e": TRUE},
                                {ag: {"t": TRUE, "u": TRUE} for ag in AGENTS}, ["e"])
    with pytest.raises(MalformedObservability):
        observability_type_of(both, local_state_r(), "a")
    none = AbstractAction.build("n", ["e"], ["t"], {}, {"e": TRUE}, {}, ["e"])
    with pytest.raises(MalformedObservability):
        observability_type_of(none, local_state_r(), "a")


def test_abstract_update_private_move_edges():
    s = with_distracted(s_prime(), ["a"])
    s4 = abstract_product_update(s, abs_priv_move("l", "b2", "b1", "b3"), require_applicable=False)
    v1e, v1n, v2n = "((w1|e)|e)", "((w1|e)|nil)", "((w2|e)|nil)"
    nil_edges = {(v1n, v1n), (v2n, v2n)}
    ar = nil_edges | {(v1n, v2n), (v2n, v1n)}
    assert s4.relations["l"] == {(v1e, v1e)} | nil_edges
    assert s4.relations["r"] == {(v1e, v1e)} | ar
    assert s4.relations["a"] == {(v1e, v1n), (v1e, v2n)} | ar
    assert s4.designated == {v1e}


def test_induced_action_relations():
    s = with_distracted(s_prime(), ["a"])
    x = induce(abs_priv_move("l", "b2", "b1", "b3"), s)
    assert x.model.relations["a"] == {("e", "nil"), ("nil", "nil")}
    assert x.model.relations["l"] == x.model.relations["r"] == {("e", "e"), ("nil", "nil")}


def test_single_type_induces_identical_relations():
    a = AbstractAction.build("s", ["e", "f"], ["t"], {"t": {("e", "f")}}, {"e": TRUE, "f": TRUE},
                             {ag: {"t": TRUE} for ag in AGENTS}, ["e"])
    rels = induce(a, local_state_r()).model.relations
    assert len({rels[ag] for ag in AGENTS}) == 1


def test_trivial_single_type_update_is_bisimilar():
    s = local_state_r()
    a = AbstractAction.build("id", ["e"], ["t"], {"t": {("e", "e")}}, {"e": TRUE},
                             {ag: {"t": TRUE} for ag in AGENTS}, ["e"])
    assert bisimilar(abstract_product_update(s, a), s)


def test_abstraction_classes():
    x = abstract(priv_move("l", "b2", "b1", "b3"))
    assert sorted(x.obs_types) == ["{a,r}", "{l}"]
    assert x.obs["a"] == {"{a,r}": TRUE} and x.obs["l"] == {"{l}": TRUE}
    assert len(abstract(ann(ANN)).obs_types) == 1


def test_inconsistent_effects_raise():
    s = local_state_r()
    p = Atom("clear_b2")
    a = EpistemicAction.build(
        "bad", ["e"], {ag: {("e", "e")} for ag in AGENTS}, {"e": TRUE}, ["e"],
        post={"e": {p.name: FALSE}}, guards={"e": {p.name: EffectGuards(TRUE, TRUE)}},
    )
    with pytest.raises(InconsistentEffects):
        product_update(s, a)


prop = settings(max_examples=200, deadline=None,
                suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])


@prop
@given(st.data())
def test_abstract_update_equals_update_with_induced(data):
    agents, atoms = data.draw(languages())
    s = data.draw(states(agents, atoms))
    a = data.draw(abstract_actions(agents, atoms))
    assume(is_applicable(s, a))
    try:
        x = induce(a, s)
    except MalformedObservability:
        assume(False)
    assert abstract_product_update(s, a) == product_update(s, x)


@prop
@given(st.data())
def test_abstraction_round_trips(data):
    agents, atoms = data.draw(languages())
    s = data.draw(states(agents, atoms))
    x = data.draw(std_actions(agents, atoms))
    assert induce(abstract(x), s) == x
    assume(is_applicable(s, x))
    out = product_update(s, x)
    assert abstract_product_update(s, abstract(x)) == out
    # label rule and designated preservation
    for w, e in ((w, e) for w in s.worlds for e in x.events):
        name = f"({w}|{e})"
        if name in out.labels:
            for p in atoms:
                if p not in x.model.post.get(e, {}):
                    assert (p in out.labels[name]) == (p in s.labels[w])
            if name in out.designated:
                assert w in s.designated and e in x.designated
    assert out.designated


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_chain_type_is_first_true_guard(data):
    agents, atoms = data.draw(languages())
    s = data.draw(states(agents, atoms, single=True))
    order = data.draw(st.permutations(["t0", "t1", "t2"]))
    conds = [data.draw(formulas(agents, atoms, max_depth=1)) for _ in range(2)]
    a = AbstractAction.build("c", ["e"], order, {}, {"e": TRUE}, {agents[0]: chain_obs(order, conds)}, ["e"])
    (w,) = s.designated
    expected = next((t for t, c in zip(order, conds) if evaluate_at_world(s, w, c)), order[-1])
    assert observability_type_of(a, s, agents[0]) == expected
