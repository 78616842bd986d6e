"""Acceptance criteria 1 to 9, one pass/fail line each.

Most checks reuse the focused tests of the other modules; this file adds
timing limits and prints a summary line per criterion.
"""

import json
import os
import subprocess
import sys
import time

import jsonschema
import pytest

import test_del_engine as de
import test_frontend as fe
import test_grounder as gr
import test_runtime as rt
from epddl.blocks import (
    EXHIBITED_PLAN, ann, local_state_r, multi_agent_bw, planning_actions, planning_goal, priv_move,
)
from epddl.del_engine import product_update
from epddl.jsonio import emit_json, read_json, schema
from epddl.logic import frame_report
from epddl.runtime import FOUND, make_task, solve_bfs, validate_plan
from golden import GOLDEN, paths, task


def report(capsys, number, title, check):
    """Run ``check`` and print one line whatever happens."""
    t0 = time.perf_counter()
    failure = None
    try:
        check()
    except Exception as exc:  # noqa: BLE001
        failure = exc
    dt = time.perf_counter() - t0
    status = "PASS" if failure is None else "FAIL"
    line = f"criterion {number}: {status} {title} ({dt:.2f}s)"
    if failure is not None:
        line += f" :: {type(failure).__name__}: {str(failure).splitlines()[0] if str(failure) else ''}"
    with capsys.disabled():
        print("\n" + line, flush=True)
    if failure is not None:
        raise failure


def timed(fn, limit):
    t0 = time.perf_counter()
    fn()
    dt = time.perf_counter() - t0
    assert dt < limit, f"{fn.__name__} took {dt:.2f}s, limit {limit}s"


def test_criterion_1_worked_examples(capsys):
    def check():
        task("ebw1"), task("ebw1-finitary")  # parse and ground outside the per-example budget
        for fn in (
            gr.test_explicit_initial_state_of_ebw1,  # (a)
            gr.test_finitary_state_of_example,  # (b)
            de.test_public_announcement_keeps_both_worlds,  # (c)
            de.test_private_move_applicability_and_update,  # (d)
            de.test_quasi_private_peek,  # (e)
            de.test_abstract_update_private_move_edges,  # (f)
            de.test_induced_action_relations,  # (g)
        ):
            timed(fn, 1.0)
        assert len(task("ebw1").atoms) == 35
    report(capsys, 1, "worked-example golden suite", check)


def test_criterion_2_abstract_equivalences(capsys):
    def check():
        t0 = time.perf_counter()
        de.test_abstract_update_equals_update_with_induced()
        de.test_abstraction_round_trips()
        dt = time.perf_counter() - t0
        assert dt < 30, f"suite took {dt:.1f}s"
    report(capsys, 2, "abstract update, induction and abstraction agree on 200+200 random pairs", check)


def test_criterion_3_planning_reproduction(capsys):
    def check():
        t0 = time.perf_counter()
        t = make_task(local_state_r(), planning_actions(), planning_goal())
        res = solve_bfs(t, max_depth=3)
        assert res.status == FOUND and len(res.plan) <= 3, res
        assert validate_plan(t, res.plan).valid
        verdict = validate_plan(t, EXHIBITED_PLAN)
        assert verdict.valid, f"exhibited plan rejected: {verdict}"
        assert time.perf_counter() - t0 < 60
    report(capsys, 3, "BFS plan of length <= 3 and the exhibited plan both validate", check)


def test_criterion_4_grounding_counts(capsys):
    def check():
        gr.test_action_counts_match_brute_force()
        info = task("ebw1").info
        assert (info.agents_number, info.atoms_number, info.actions_number,
                info.initial_worlds_number) == (3, 35, 504, 3)
    report(capsys, 4, "ebw1 grounds to 3 agents, 35 atoms, 504 actions, 3 worlds", check)


def test_criterion_5_frame_classification(capsys):
    def check():
        assert frame_report(multi_agent_bw()).classification == "S5"
        s1 = product_update(local_state_r(), ann(de.ANN))
        s2 = product_update(s1, priv_move("l", "b2", "b1", "b3"), require_applicable=False)
        rep = frame_report(s2)
        assert rep.classification == "KD45"
        assert not all(f.is_s5 for f in rep.agents.values())
    report(capsys, 5, "initial state S5, post-private-update state KD45 and not S5", check)


def test_criterion_6_json_conformance(capsys):
    def check():
        validator = jsonschema.Draft202012Validator(schema())
        for name in GOLDEN:
            text = emit_json(task(name))
            assert not list(validator.iter_errors(json.loads(text))), name
            assert read_json(text) == task(name), name
        outs = []
        for seed in ("1", "2"):
            r = subprocess.run([sys.executable, "-m", "epddl.cli", "ground", *paths("ebw1")],
                               capture_output=True, env={**os.environ, "PYTHONHASHSEED": seed})
            assert r.returncode == 0, r.stderr
            outs.append(r.stdout)
        assert outs[0] == outs[1] == emit_json(task("ebw1")).encode()
    report(capsys, 6, "round trip, schema validity and byte identity across runs", check)


def test_criterion_7_requirement_closure(capsys):
    report(capsys, 7, "requirement implication table", fe.test_requirement_closure_table)


def test_criterion_8_observability_well_formed(capsys):
    report(capsys, 8, "exactly one observability type per agent and valuation",
           gr.test_observability_is_well_formed_on_golden_tasks)


def test_criterion_9_conformant_reduction(capsys):
    report(capsys, 9, "union validity equals per-component validity on 20 random unions",
           rt.test_conformant_union_validity)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
