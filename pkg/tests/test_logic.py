"""Formulas, truth, frames and bisimulation."""

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from epddl.blocks import AGENTS, clear, local_state_r, multi_agent_bw, nondeterministic_state, on
from epddl.logic import (
    TRUE, And, Atom, EpistemicState, Modal, ModalKind, Not, Or, StateError, analyze_pointing, bisimilar,
    box, canonical_key, ck, ck_diamond, conj, contraction, diamond, disjoint_union, evaluate,
    evaluate_at_world, frame_report, kw, kw_diamond, modal_depth, size,
)
from epddl.logic.formula import atoms_of
from strategies import formulas, languages, states

prop = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def rename(s: EpistemicState, prefix="x") -> EpistemicState:
    m = {w: f"{prefix}{k}" for k, w in enumerate(reversed(s.worlds))}
    return EpistemicState(
        [m[w] for w in reversed(s.worlds)],
        {ag: {(m[u], m[v]) for u, v in pairs} for ag, pairs in s.relations.items()},
        {m[w]: lab for w, lab in s.labels.items()},
        {m[w] for w in s.designated},
        s.agents,
    )


def unaware(i):
    return And((Not(box(i, on("b2", "b1"))), Not(box(i, on("b3", "b1"))), Not(box(i, on("b4", "b1")))))


def test_l_knows_a_and_r_are_unaware():
    s = multi_agent_bw()
    assert evaluate_at_world(s, "w1", box("l", conj(unaware(i) for i in ("a", "r"))))


def test_literal_l_r_reading_is_false():
    # with i ranging over {l, r} the conjunct ~B_l on(b2,b1) fails at w1, where l sees everything
    s = multi_agent_bw()
    assert not evaluate_at_world(s, "w1", box("l", conj(unaware(i) for i in ("l", "r"))))


def test_true_holds_everywhere():
    s = multi_agent_bw()
    assert all(evaluate_at_world(s, w, TRUE) for w in s.worlds)


def test_common_knowledge_example():
    s = multi_agent_bw()
    assert evaluate_at_world(s, "w1", ck(AGENTS, And((clear("b2"), clear("b3"), clear("b4")))))
    assert not evaluate_at_world(s, "w1", ck(AGENTS, And((on("b1", "c1"), on("b2", "b1")))))


def test_local_state_multi_pointed_truth():
    s, sr = multi_agent_bw(), local_state_r()
    psi = box("l", on("b2", "b1"))
    assert evaluate(s, psi)
    assert not evaluate(sr, psi)


def test_single_designated_matches_world_truth():
    s = multi_agent_bw()
    for phi in (on("b2", "b1"), box("a", on("b2", "b1")), kw("l", on("b2", "b1"))):
        assert evaluate(s, phi) == evaluate_at_world(s, "w1", phi)


def test_nondeterministic_state_formulas():
    s = nondeterministic_state()
    everybody = lambda p: conj(box(i, p) for i in AGENTS)
    assert evaluate(s, Or((everybody(on("b2", "b1")), everybody(on("b3", "b1")))))
    # s' adds the cross edges for every agent
    rels = {ag: set(s.relations[ag]) | {("w1", "w2"), ("w2", "w1")} for ag in AGENTS}
    s2 = EpistemicState(s.worlds, rels, s.labels, s.designated, AGENTS)
    both = And((conj(diamond(i, on("b2", "b1")) for i in AGENTS), conj(diamond(i, on("b3", "b1")) for i in AGENTS)))
    assert evaluate(s2, both)


def test_unknown_world_and_agent_raise():
    s = multi_agent_bw()
    with pytest.raises(StateError):
        evaluate_at_world(s, "w9", TRUE)
    with pytest.raises(StateError):
        evaluate(s, box("zed", TRUE))


def test_unmentioned_atom_is_false():
    assert not evaluate(multi_agent_bw(), Atom("on_b9_b9"))


def test_formula_measures():
    phi = ck(AGENTS, on("b2", "b1"))
    assert modal_depth(phi) == 1
    assert size(phi) == 2
    assert modal_depth(box("a", kw("l", Not(on("b2", "b1"))))) == 2
    assert atoms_of(And((on("b2", "b1"), clear("b2")))) == {"on_b2_b1", "clear_b2"}


def test_ck_index_is_always_a_set():
    m = Modal(ModalKind.CK_BOX, "a", TRUE)
    assert m.index == frozenset({"a"})
    with pytest.raises(ValueError):
        Modal(ModalKind.BOX, frozenset(), TRUE)
    with pytest.raises(ValueError):
        And(())


def test_frames_of_worked_states():
    assert frame_report(multi_agent_bw()).classification == "S5"
    single = EpistemicState(["w"], {"a": set()}, {}, ["w"], ["a"])
    rep = frame_report(single)
    f = rep.agents["a"]
    assert (f.transitive, f.euclidean, f.serial, f.reflexive) == (True, True, False, False)
    assert rep.classification == "neither"


def test_disjoint_union_examples():
    s = nondeterministic_state()
    parts = [
        EpistemicState([w], {ag: {(w, w)} for ag in AGENTS}, {w: s.labels[w]}, [w], AGENTS)
        for w in ("w1", "w2")
    ]
    u = disjoint_union(parts)
    assert len(u.worlds) == 2 and bisimilar(u, s)
    m = multi_agent_bw(("w1", "w2"))
    uu = disjoint_union([m, m])
    assert len(uu.worlds) == 6 and len(uu.designated) == 4


def test_bisimilar_basic_cases():
    s = local_state_r()
    assert bisimilar(s, rename(s))
    a = EpistemicState(["w"], {"a": {("w", "w")}}, {"w": {"p"}}, ["w"])
    b = EpistemicState(["w"], {"a": {("w", "w")}}, {"w": {"q"}}, ["w"])
    assert not bisimilar(a, b)


def test_pointing_analysis():
    assert analyze_pointing(multi_agent_bw()).global_
    p = analyze_pointing(local_state_r())
    assert not p.global_ and p.local_for == {"r"} and not p.nondeterministic
    assert analyze_pointing(nondeterministic_state()).nondeterministic


def test_canonical_key_renaming_and_contraction():
    s = local_state_r()
    assert canonical_key(s) == canonical_key(rename(s))
    two = EpistemicState(["u", "v"], {"a": {("u", "v"), ("v", "u")}}, {"u": {"p"}, "v": {"p"}}, ["u"])
    one = EpistemicState(["z"], {"a": {("z", "z")}}, {"z": {"p"}}, ["z"])
    assert len(contraction(two).worlds) == 1
    assert canonical_key(two) == canonical_key(one)


@prop
@given(st.data())
def test_duality_and_group_box(data):
    agents, atoms = data.draw(languages())
    s = data.draw(states(agents, atoms))
    phi = data.draw(formulas(agents, atoms, max_depth=2))
    i = data.draw(st.sampled_from(agents))
    G = data.draw(st.sets(st.sampled_from(agents), min_size=1))
    assert evaluate(s, diamond(i, phi)) == evaluate(s, Not(box(i, Not(phi))))
    assert evaluate(s, ck_diamond(G, phi)) == evaluate(s, Not(ck(G, Not(phi))))
    assert evaluate(s, kw_diamond(i, phi)) == evaluate(s, Not(kw(i, Not(phi))))
    assert evaluate(s, box(frozenset(G), phi)) == all(evaluate(s, box(j, phi)) for j in G)
    assert evaluate(s, kw(frozenset(G), phi)) == all(
        evaluate(s, Or((box(j, phi), box(j, Not(phi))))) for j in G
    )


@prop
@given(st.data())
def test_ck_equals_bounded_everybody_knows(data):
    agents, atoms = data.draw(languages())
    s = data.draw(states(agents, atoms, max_worlds=6))
    phi = data.draw(formulas(agents, atoms, max_depth=1, modal=False))
    G = frozenset(data.draw(st.sets(st.sampled_from(agents), min_size=1)))
    layers, cur = [], phi
    for _ in range(len(s.worlds)):
        cur = box(G, cur)
        layers.append(cur)
    for w in s.worlds:
        assert evaluate_at_world(s, w, ck(G, phi)) == evaluate_at_world(s, w, conj(layers))


@prop
@given(states())
def test_s5_implies_kd45_flags(s):
    rep = frame_report(s)
    if rep.classification == "S5":
        assert all(f.is_kd45 for f in rep.agents.values())


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_union_truth_is_conjunction(data):
    agents, atoms = data.draw(languages())
    parts = data.draw(st.lists(states(agents, atoms), min_size=1, max_size=3))
    phi = data.draw(formulas(agents, atoms, max_depth=2))
    assert evaluate(disjoint_union(parts), phi) == all(evaluate(p, phi) for p in parts)


@prop
@given(st.data())
def test_bisimilarity_is_equivalence_and_preserves_truth(data):
    agents, atoms = data.draw(languages(max_atoms=2))
    a, b, c = (data.draw(states(agents, atoms, max_worlds=3)) for _ in range(3))
    assert bisimilar(a, a)
    assert bisimilar(a, b) == bisimilar(b, a)
    if bisimilar(a, b) and bisimilar(b, c):
        assert bisimilar(a, c)
    for x, y in ((a, b), (a, disjoint_union([a, a])), (a, rename(a))):
        if bisimilar(x, y):
            for _ in range(5):
                phi = data.draw(formulas(agents, atoms, max_depth=3))
                assert evaluate(x, phi) == evaluate(y, phi)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_canonical_key_matches_bisimilarity(data):
    agents, atoms = data.draw(languages(max_atoms=2))
    a = data.draw(states(agents, atoms, max_worlds=4))
    kind = data.draw(st.sampled_from(["random", "renamed", "doubled", "contracted"]))
    b = {
        "random": lambda: data.draw(states(agents, atoms, max_worlds=4)),
        "renamed": lambda: rename(a),
        "doubled": lambda: disjoint_union([a, a]),
        "contracted": lambda: contraction(a),
    }[kind]()
    assert (canonical_key(a) == canonical_key(b)) == bisimilar(a, b)
