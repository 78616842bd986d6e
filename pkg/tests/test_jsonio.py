"""Ground JSON emission, schema conformance and reading back."""

import copy
import json

import jsonschema
import pytest
from hypothesis import given, settings

from epddl.blocks import local_state_r, planning_actions, planning_goal
from epddl.grounder import build_task
from epddl.jsonio import (
    TaskFormatError, emit_json, formula_from_json, formula_to_json, info_mismatches, read_json,
    schema, task_to_json,
)
from epddl.logic.formula import TRUE, Atom, Modal, ModalKind, Not, ck
from epddl.runtime import make_task
from golden import GOLDEN, spec, task
from strategies import formulas

ALL_AGENTS = ("a", "b", "c")


def validator():
    return jsonschema.Draft202012Validator(schema())


def test_schema_itself_is_valid():
    jsonschema.Draft202012Validator.check_schema(schema())


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_round_trip_and_schema(name):
    t = task(name)
    text = emit_json(t)
    assert not list(validator().iter_errors(json.loads(text)))
    back = read_json(text)
    assert back == t
    assert emit_json(back) == text


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_bytes_are_stable_across_groundings(name):
    assert emit_json(build_task(spec(name))) == emit_json(build_task(spec(name)))


def test_layout():
    text = emit_json(task("sensing-1"))
    assert text.endswith("}\n")
    assert all(line == line.rstrip() for line in text.splitlines())
    assert text.splitlines()[1] == '  "planning-task-info": {'
    doc = json.loads(text)
    assert list(doc) == ["planning-task-info", "language", "facts", "initial-state", "actions", "goal"]
    assert list(doc["planning-task-info"]) == [
        "problem", "domain", "libraries", "requirements", "agents-number", "atoms-number",
        "facts-number", "actions-number", "initial-worlds-number", "goal-modal-depth", "goal-size",
    ]
    act = next(iter(doc["actions"].values()))
    assert list(act) == ["action-type", "events", "relations", "designated", "preconditions", "effects",
                         "observability-conditions"]


def test_ebw1_info_counts():
    info = json.loads(emit_json(task("ebw1")))["planning-task-info"]
    assert info["initial-worlds-number"] == 3
    assert info["agents-number"] == 3
    assert info["actions-number"] == 504
    assert info["libraries"] == ["my-library"]
    assert not info_mismatches(task("ebw1"))


def test_goal_common_knowledge_shape():
    goal = json.loads(emit_json(task("ebw1")))["goal"]
    assert goal == {"modality-name": "C.box", "modality-index": ["A", "L", "R"], "formula": "on_b2_b1"}


def test_events_without_effects_are_null():
    doc = json.loads(emit_json(task("ebw1")))
    tell = next(v for k, v in doc["actions"].items() if k.startswith("tell_"))
    assert all(v is None for v in tell["effects"].values())
    move = next(v for k, v in doc["actions"].items() if k.startswith("move_"))
    e_move = next(e for e in move["events"] if e.startswith("e-move"))
    assert move["effects"]["nil"] is None
    assert len(move["effects"][e_move]) == 4


def test_formula_encoding_examples():
    p = Atom("on_b2_b1")
    assert formula_to_json(TRUE) == "true"
    assert formula_to_json(Not(p)) == {"connective": "not", "formula": "on_b2_b1"}
    assert formula_to_json(ck(["r", "a", "l"], p)) == {
        "modality-name": "C.box", "modality-index": ["a", "l", "r"], "formula": "on_b2_b1",
    }
    assert formula_to_json(Modal(ModalKind.KW_DIAMOND, "a", p))["modality-index"] == "a"


@settings(max_examples=200, deadline=None)
@given(formulas(ALL_AGENTS, ("p", "q", "r"), max_depth=3))
def test_formula_round_trip(f):
    obj = formula_to_json(f)
    assert not list(validator().iter_errors({**task_to_json(task("sensing-1")), "goal": obj}))
    assert formula_from_json(obj) == f


def test_planning_task_round_trip():
    t = make_task(local_state_r(), planning_actions(), planning_goal())
    assert read_json(emit_json(t)) == t


def _doc():
    return copy.deepcopy(task_to_json(task("sensing-1")))


def test_missing_designated_is_schema_error():
    doc = _doc()
    del doc["initial-state"]["designated"]
    with pytest.raises(TaskFormatError, match="designated"):
        read_json(json.dumps(doc))


def test_unknown_modality_is_schema_error():
    doc = _doc()
    doc["goal"] = {"modality-name": "K.box", "modality-index": "a", "formula": "open"}
    with pytest.raises(TaskFormatError) as exc:
        read_json(json.dumps(doc))
    assert exc.value.path.startswith("$.goal")


def test_extra_top_level_key_rejected():
    doc = _doc()
    doc["format"] = 1
    with pytest.raises(TaskFormatError):
        read_json(json.dumps(doc))


def test_semantic_errors_have_paths():
    doc = _doc()
    doc["initial-state"]["designated"] = ["nowhere"]
    with pytest.raises(TaskFormatError, match=r"initial-state"):
        read_json(json.dumps(doc))
    doc = _doc()
    name = next(iter(doc["actions"]))
    doc["actions"][name]["designated"] = ["ghost"]
    with pytest.raises(TaskFormatError, match=r"\$\.actions"):
        read_json(json.dumps(doc))
    doc = _doc()
    doc["initial-state"]["labels"]["w1"].append("undeclared")
    with pytest.raises(TaskFormatError, match="not in the language"):
        read_json(json.dumps(doc))


def test_invalid_json_text():
    with pytest.raises(TaskFormatError, match="invalid JSON"):
        read_json("{")
