"""Ground task JSON: a deterministic emitter and a schema-checked reader."""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema
from jsonschema.exceptions import best_match

from .del_engine import AbstractAction, ActionError
from .grounder import GroundTask, TaskInfo
from .logic.formula import (
    FALSE, TRUE, And, Atom, Bottom, Formula, Imply, Modal, ModalKind, Not, Or, Top, modal_depth, size,
)
from .logic.state import EpistemicState, StateError

INFO_KEYS = (
    ("problem", "problem"),
    ("domain", "domain"),
    ("libraries", "libraries"),
    ("requirements", "requirements"),
    ("agents-number", "agents_number"),
    ("atoms-number", "atoms_number"),
    ("facts-number", "facts_number"),
    ("actions-number", "actions_number"),
    ("initial-worlds-number", "initial_worlds_number"),
    ("goal-modal-depth", "goal_modal_depth"),
    ("goal-size", "goal_size"),
)


class TaskFormatError(ValueError):
    """A JSON document that is not a well-formed ground task."""

    def __init__(self, path: str, message: str) -> None:
        super().__init__(f"{path}: {message}")
        self.path = path


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files("epddl.schema").joinpath("task.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


# formulas


def formula_to_json(f: Formula) -> Any:
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return {"connective": "not", "formula": formula_to_json(f.arg)}
    if isinstance(f, (And, Or)):
        return {"connective": "and" if isinstance(f, And) else "or",
                "formulas": [formula_to_json(g) for g in f.args]}
    if isinstance(f, Imply):
        return {"connective": "imply", "formulas": [formula_to_json(f.left), formula_to_json(f.right)]}
    if isinstance(f, Modal):
        index = f.index if isinstance(f.index, str) else sorted(f.index)
        return {"modality-name": f.kind.value, "modality-index": index, "formula": formula_to_json(f.arg)}
    raise TypeError(f"not a formula: {f!r}")


def formula_from_json(obj: Any) -> Formula:
    if isinstance(obj, str):
        return TRUE if obj == "true" else FALSE if obj == "false" else Atom(obj)
    if "modality-name" in obj:
        idx = obj["modality-index"]
        index = idx if isinstance(idx, str) else frozenset(idx)
        return Modal(ModalKind(obj["modality-name"]), index, formula_from_json(obj["formula"]))
    conn = obj["connective"]
    if conn == "not":
        return Not(formula_from_json(obj["formula"]))
    subs = [formula_from_json(g) for g in obj["formulas"]]
    if conn == "and":
        return And(tuple(subs))
    if conn == "or":
        return Or(tuple(subs))
    return Imply(subs[0], subs[1])


def _wrap(f: Formula) -> dict:
    return {"formula": formula_to_json(f)}


# structures


def _relations(nodes: tuple, relations: dict, order: tuple) -> dict:
    pos = {n: k for k, n in enumerate(nodes)}
    out = {}
    for label in order:
        succ: dict[str, list] = {n: [] for n in nodes}
        for u, v in relations.get(label, ()):
            succ[u].append(v)
        out[label] = {n: sorted(vs, key=pos.__getitem__) for n, vs in succ.items()}
    return out


def _pairs(nested: dict) -> dict:
    return {label: [(u, v) for u, vs in m.items() for v in vs] for label, m in nested.items()}


def state_to_json(s: EpistemicState) -> dict:
    return {
        "worlds": list(s.worlds),
        "relations": _relations(s.worlds, s.relations, s.agents),
        "labels": {w: sorted(s.labels[w]) for w in s.worlds},
        "designated": s.ordered_designated(),
    }


def action_to_json(a: AbstractAction) -> dict:
    return {
        "action-type": a.action_type,
        "events": list(a.events),
        "relations": _relations(a.events, a.typed_relations, a.obs_types),
        "designated": [e for e in a.events if e in a.designated],
        "preconditions": {e: _wrap(a.pre[e]) for e in a.events},
        "effects": {
            e: None if e not in a.post else {p: _wrap(f) for p, f in a.post[e].items()}
            for e in a.events
        },
        "observability-conditions": {
            ag: {t: _wrap(m[t]) for t in a.obs_types if t in m} for ag, m in a.obs.items()
        },
    }


def task_to_json(task: GroundTask) -> dict:
    return {
        "planning-task-info": {key: _plain(getattr(task.info, attr)) for key, attr in INFO_KEYS},
        "language": {"atoms": list(task.atoms), "agents": list(task.agents)},
        "facts": list(task.facts),
        "initial-state": state_to_json(task.initial),
        "actions": {name: action_to_json(a) for name, a in task.actions.items()},
        "goal": formula_to_json(task.goal),
    }


def _plain(v: Any) -> Any:
    return list(v) if isinstance(v, tuple) else v


def emit_json(task: GroundTask) -> str:
    """Two-space indented JSON with keys in grammar order and a final newline."""
    return json.dumps(task_to_json(task), indent=2, ensure_ascii=False) + "\n"


# reading


def _state_from_json(obj: dict, agents: tuple) -> EpistemicState:
    return EpistemicState(obj["worlds"], _pairs(obj["relations"]), obj["labels"], obj["designated"], agents)


def _action_from_json(name: str, obj: dict) -> AbstractAction:
    post = {e: {p: formula_from_json(w["formula"]) for p, w in m.items()}
            for e, m in obj["effects"].items() if m is not None}
    obs = {ag: {t: formula_from_json(w["formula"]) for t, w in m.items()}
           for ag, m in obj["observability-conditions"].items()}
    return AbstractAction.build(
        name,
        obj["events"],
        list(obj["relations"]),
        _pairs(obj["relations"]),
        {e: formula_from_json(w["formula"]) for e, w in obj["preconditions"].items()},
        obs,
        obj["designated"],
        post=post,
        action_type=obj["action-type"],
    )


def task_from_json(doc: Any) -> GroundTask:
    err = best_match(jsonschema.Draft202012Validator(schema()).iter_errors(doc))
    if err is not None:
        raise TaskFormatError(err.json_path, err.message)
    lang = doc["language"]
    agents = tuple(lang["agents"])
    try:
        initial = _state_from_json(doc["initial-state"], agents)
    except StateError as exc:
        raise TaskFormatError("$['initial-state']", str(exc)) from None
    actions = {}
    for name, obj in doc["actions"].items():
        try:
            actions[name] = _action_from_json(name, obj)
        except ActionError as exc:
            raise TaskFormatError(f"$.actions['{name}']", str(exc)) from None
    unknown = initial.atoms() - set(lang["atoms"])
    if unknown:
        raise TaskFormatError("$['initial-state'].labels", f"atoms not in the language: {sorted(unknown)}")
    raw = doc["planning-task-info"]
    info = TaskInfo(**{attr: tuple(raw[key]) if isinstance(raw[key], list) else raw[key]
                       for key, attr in INFO_KEYS})
    return GroundTask(tuple(lang["atoms"]), agents, tuple(doc["facts"]), initial, actions,
                      formula_from_json(doc["goal"]), info)


def read_json(text: str) -> GroundTask:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TaskFormatError("$", f"invalid JSON: {exc}") from None
    return task_from_json(doc)


def info_mismatches(task: GroundTask) -> list[str]:
    """Counts in the task info that disagree with the task's collections."""
    expected = {
        "agents_number": len(task.agents),
        "atoms_number": len(task.atoms),
        "facts_number": len(task.facts),
        "actions_number": len(task.actions),
        "initial_worlds_number": len(task.initial.worlds),
        "goal_modal_depth": modal_depth(task.goal),
        "goal_size": size(task.goal),
    }
    return [k for k, v in expected.items() if getattr(task.info, k) != v]


__all__ = [
    "TaskFormatError", "emit_json", "read_json", "task_to_json", "task_from_json",
    "formula_to_json", "formula_from_json", "state_to_json", "action_to_json", "schema",
    "info_mismatches",
]
