"""Plan validation, BFS and conformant tasks."""

from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from epddl.blocks import EXHIBITED_PLAN, local_state_r, planning_actions, planning_goal
from epddl.del_engine import AbstractAction, abstract
from epddl.logic.formula import FALSE, TRUE, Atom, Not
from epddl.logic.state import EpistemicState, disjoint_union
from epddl.logic.truth import evaluate
from epddl.runtime import (
    BUDGET_EXCEEDED, FOUND, GOAL_UNSATISFIED, INAPPLICABLE, NONE_FOUND, VALID, WORLD_LIMIT,
    PlanError, conformant_task, make_task, parse_plan, solve_bfs, step, validate_plan,
)
from golden import task as golden_task
from strategies import abstract_actions, formulas, states, std_actions

BFS_PLAN = ("privMove_{r,b4,c3,b2}", "ann_{r,b4,b2}", "privMove_{a,b4,b2,b1}")


@lru_cache(maxsize=None)
def planning():
    return make_task(local_state_r(), planning_actions(), planning_goal())


def test_parse_plan_skips_comments_and_blanks():
    text = "# header\nann_{r,b4,c3}\n\n  quasiPrivPeek_{a,r,b2,b1}  # peek\n"
    assert parse_plan(text) == ["ann_{r,b4,c3}", "quasiPrivPeek_{a,r,b2,b1}"]


def test_unknown_action_is_plan_error():
    with pytest.raises(PlanError, match="nope"):
        validate_plan(planning(), ["nope"])


def test_empty_plan_checks_goal_in_initial_state():
    t = planning()
    v = validate_plan(t, [])
    assert v.status == GOAL_UNSATISFIED
    assert evaluate(t.initial, t.goal) is False
    assert validate_plan(make_task(t.initial, t.actions, TRUE), []).valid


def test_exhibited_plan_fails_at_third_step():
    # clear(b1) is false in every world left by the announcement
    v = validate_plan(planning(), EXHIBITED_PLAN)
    assert v.status == INAPPLICABLE
    assert v.step == 3
    assert len(v.trace) == 3
    assert "privMove_{a,b4,c3,b1}" in str(v)


def test_exhibited_plan_prefix_leaves_goal_unsatisfied():
    assert validate_plan(planning(), EXHIBITED_PLAN[:2]).status == GOAL_UNSATISFIED


def test_bfs_finds_shortest_valid_plan():
    t = planning()
    r = solve_bfs(t, max_depth=3)
    assert r.status == FOUND
    assert r.plan == BFS_PLAN
    assert validate_plan(t, r.plan).status == VALID
    # depth-2 exhaustion is the minimality oracle
    assert solve_bfs(t, max_depth=2).status == NONE_FOUND


def test_bfs_plan_relies_on_empty_beliefs_of_a():
    t = planning()
    s = t.initial
    for name in BFS_PLAN[:2]:
        s = step(s, t.actions[name])
    assert all(not s.succ("a", w) for w in s.designated)


def test_inapplicable_first_step():
    t = planning()
    v = validate_plan(t, ["privMove_{a,b4,c3,b1}"])
    assert (v.status, v.step) == (INAPPLICABLE, 1)


def test_trivial_goals():
    t = planning()
    r = solve_bfs(make_task(t.initial, t.actions, TRUE))
    assert (r.status, r.plan) == (FOUND, ())
    g = golden_task("ebw1")
    r = solve_bfs(make_task(g.initial, g.actions, FALSE), max_depth=2)
    assert r.status == NONE_FOUND


def test_budget_and_world_limit_are_distinct():
    t = planning()
    assert solve_bfs(t, max_depth=3, max_states=5).status == BUDGET_EXCEEDED
    assert solve_bfs(t, max_depth=3, max_worlds=2).status == WORLD_LIMIT
    assert solve_bfs(t, max_depth=3, max_states=5, dedup=False).status == BUDGET_EXCEEDED


def test_negative_depth_rejected():
    with pytest.raises(ValueError):
        solve_bfs(planning(), max_depth=-1)


def test_golden_task_search():
    g = golden_task("ebw1")
    r = solve_bfs(g, max_depth=3)
    if r.status == FOUND:
        assert validate_plan(g, r.plan).valid
    else:
        assert r.status == NONE_FOUND


def test_singleton_conformant_task_is_the_task():
    t = planning()
    c = conformant_task([t.initial], t.actions, t.goal)
    assert c.initial == t.initial
    assert c.actions == t.actions and c.goal == t.goal


def test_conformant_incompatible_components():
    p = Atom("p")
    s1 = EpistemicState(["u"], {"a": [("u", "u")]}, {"u": {"p"}}, ["u"], ["a"])
    s2 = EpistemicState(["v"], {"a": [("v", "v")]}, {"v": set()}, ["v"], ["a"])
    assert solve_bfs(make_task(s1, {}, p)).status == FOUND
    assert solve_bfs(make_task(s2, {}, Not(p))).status == FOUND
    assert solve_bfs(conformant_task([s1, s2], {}, p)).status == NONE_FOUND
    assert solve_bfs(conformant_task([s1, s2], {}, Not(p))).status == NONE_FOUND


AGENTS = ("a", "b")
ATOMS = ("p", "q")


@st.composite
def small_tasks(draw):
    s = draw(states(AGENTS, ATOMS, max_worlds=3))
    acts = {f"act{k}": draw(abstract_actions(AGENTS, ATOMS)) for k in range(draw(st.integers(1, 2)))}
    goal = draw(formulas(AGENTS, ATOMS, max_depth=2))
    return make_task(s, acts, goal)


@settings(max_examples=40, deadline=None)
@given(small_tasks())
def test_bfs_is_sound(t):
    r = solve_bfs(t, max_depth=2)
    assert r.status in (FOUND, NONE_FOUND)
    if r.status == FOUND:
        assert validate_plan(t, r.plan).valid


@settings(max_examples=30, deadline=None)
@given(small_tasks())
def test_dedup_does_not_change_result(t):
    a = solve_bfs(t, max_depth=2)
    b = solve_bfs(t, max_depth=2, dedup=False)
    assert a.status == b.status
    if a.status == FOUND:
        assert len(a.plan) == len(b.plan)


@st.composite
def unions(draw):
    # standard actions: an agent's perspective does not depend on the state
    s1 = draw(states(AGENTS, ATOMS, max_worlds=3))
    s2 = draw(states(AGENTS, ATOMS, max_worlds=3))
    acts = {f"act{k}": abstract(draw(std_actions(AGENTS, ATOMS))) for k in range(2)}
    plan = draw(st.lists(st.sampled_from(sorted(acts)), max_size=2))
    goal = draw(formulas(AGENTS, ATOMS, max_depth=2))
    return s1, s2, acts, plan, goal


def conformant_holds(s1, s2, acts, plan, goal):
    joint = validate_plan(conformant_task([s1, s2], acts, goal), plan).valid
    each = all(validate_plan(make_task(s, acts, goal), plan).valid for s in (s1, s2))
    return joint == each


@settings(max_examples=20, deadline=None)
@given(unions())
def test_conformant_union_validity(u):
    assert conformant_holds(*u)


def test_state_dependent_observability_breaks_union():
    p = Atom("p")
    s1 = EpistemicState(["u"], {ag: [("u", "u")] for ag in AGENTS}, {"u": {"p"}}, ["u"], AGENTS)
    s2 = EpistemicState(["v"], {ag: [("v", "v")] for ag in AGENTS}, {"v": set()}, ["v"], AGENTS)
    x = AbstractAction.build("x", ["e"], ["t0", "t1"], {"t0": {("e", "e")}}, {"e": TRUE},
                             {ag: {"t0": p, "t1": Not(p)} for ag in AGENTS}, ["e"])
    acts = {"x": x}
    assert all(validate_plan(make_task(s, acts, TRUE), ["x"]).valid for s in (s1, s2))
    v = validate_plan(conformant_task([s1, s2], acts, TRUE), ["x"])
    assert (v.status, v.step) == (INAPPLICABLE, 1)
    assert "no observability type" in v.reason


def test_union_initial_is_disjoint_union():
    t = planning()
    s = t.initial
    c = conformant_task([s, s], t.actions, t.goal)
    assert c.initial == disjoint_union([s, s])
    assert len(c.initial.worlds) == 2 * len(s.worlds)
