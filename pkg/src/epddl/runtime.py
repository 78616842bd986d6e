"""Plan validation, breadth-first search and conformant tasks."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .del_engine import AbstractAction, ActionError, abstract_product_update, is_applicable
from .grounder import GroundTask, TaskInfo
from .logic.bisim import canonical_key
from .logic.formula import Formula, modal_depth, size
from .logic.state import EpistemicState, disjoint_union
from .logic.truth import evaluate

VALID = "valid"
INAPPLICABLE = "inapplicable"
GOAL_UNSATISFIED = "goal-unsatisfied"

FOUND = "found"
NONE_FOUND = "none-found"
BUDGET_EXCEEDED = "budget-exceeded"
WORLD_LIMIT = "world-limit"


class PlanError(ValueError):
    """A plan names an action the task does not have."""


@dataclass(frozen=True)
class Verdict:
    status: str
    step: int | None = None
    trace: tuple[str, ...] = ()
    reason: str = ""

    @property
    def valid(self) -> bool:
        return self.status == VALID

    def __str__(self) -> str:
        if self.status == INAPPLICABLE:
            return f"{INAPPLICABLE} at step {self.step}: {self.reason}"
        return self.status


@dataclass(frozen=True)
class SearchResult:
    status: str
    plan: tuple[str, ...] | None = None
    states: int = 0
    depth: int = 0
    reason: str = ""


def make_task(initial: EpistemicState, actions: Mapping[str, AbstractAction], goal: Formula,
              problem: str = "task", domain: str = "task") -> GroundTask:
    """A ground task built directly from semantic objects."""
    atoms = set(initial.atoms())
    for a in actions.values():
        for m in a.post.values():
            atoms.update(m)
    info = TaskInfo(problem, domain, (), (), len(initial.agents), len(atoms), 0, len(actions),
                    len(initial.worlds), modal_depth(goal), size(goal))
    return GroundTask(tuple(sorted(atoms)), initial.agents, (), initial, dict(actions), goal, info)


def parse_plan(text: str) -> list[str]:
    """One action name per line; blank lines and ``#`` comments are ignored."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def step(s: EpistemicState, a: AbstractAction) -> EpistemicState | None:
    """``s ⊙ a``, or None when ``a`` is not applicable in ``s``."""
    memo: dict = {}
    if not is_applicable(s, a, memo):
        return None
    return abstract_product_update(s, a, require_applicable=False)


def validate_plan(task: GroundTask, plan: Sequence[str]) -> Verdict:
    unknown = [n for n in plan if n not in task.actions]
    if unknown:
        raise PlanError(f"unknown action '{unknown[0]}'")
    s = task.initial
    trace = [canonical_key(s)]
    for k, name in enumerate(plan, 1):
        try:
            nxt = step(s, task.actions[name])
        except ActionError as exc:
            return Verdict(INAPPLICABLE, k, tuple(trace), str(exc))
        if nxt is None:
            return Verdict(INAPPLICABLE, k, tuple(trace), f"{name} has no applicable designated event "
                                                          f"at some designated world")
        s = nxt
        trace.append(canonical_key(s))
    if not evaluate(s, task.goal):
        return Verdict(GOAL_UNSATISFIED, None, tuple(trace), "final state does not satisfy the goal")
    return Verdict(VALID, None, tuple(trace))


def solve_bfs(task: GroundTask, max_depth: int = 6, max_states: int = 50_000,
              max_worlds: int = 10_000, dedup: bool = True) -> SearchResult:
    """Shortest plan by breadth-first search over abstract product updates.

    Levels are expanded in order with actions sorted by name, so the result
    is reproducible. States are deduplicated by bisimulation class; the
    reported state count is distinct states, or generated states without
    deduplication.
    """
    if max_depth < 0:
        raise ValueError("max_depth must be non-negative")
    names = sorted(task.actions)
    s0 = task.initial
    if evaluate(s0, task.goal):
        return SearchResult(FOUND, (), 1, 0)
    seen = {canonical_key(s0)}
    generated = 1
    frontier: list[tuple[EpistemicState, tuple[str, ...]]] = [(s0, ())]
    for depth in range(1, max_depth + 1):
        nxt_frontier = []
        for s, plan in frontier:
            for name in names:
                try:
                    s2 = step(s, task.actions[name])
                except ActionError:
                    continue
                if s2 is None:
                    continue
                generated += 1
                if len(s2.worlds) > max_worlds:
                    return SearchResult(WORLD_LIMIT, None, len(seen) if dedup else generated, depth,
                                        f"{name} produced {len(s2.worlds)} worlds, limit {max_worlds}")
                if dedup:
                    key = canonical_key(s2)
                    if key in seen:
                        continue
                    seen.add(key)
                    if len(seen) > max_states:
                        return SearchResult(BUDGET_EXCEEDED, None, len(seen), depth,
                                            f"more than {max_states} distinct states")
                p2 = plan + (name,)
                if evaluate(s2, task.goal):
                    return SearchResult(FOUND, p2, len(seen) if dedup else generated, depth)
                nxt_frontier.append((s2, p2))
                if not dedup and len(nxt_frontier) > max_states:
                    return SearchResult(BUDGET_EXCEEDED, None, generated, depth,
                                        f"more than {max_states} frontier states")
        frontier = nxt_frontier
        if not frontier:
            break
    return SearchResult(NONE_FOUND, None, len(seen) if dedup else generated, max_depth, f"no plan of length <= {max_depth}")


def conformant_task(states: Iterable[EpistemicState], actions: Mapping[str, AbstractAction],
                    goal: Formula, problem: str = "conformant", domain: str = "task") -> GroundTask:
    """One task whose initial state is the disjoint union of ``states``."""
    states = list(states)
    initial = states[0] if len(states) == 1 else disjoint_union(states)
    return make_task(initial, actions, goal, problem, domain)


__all__ = [
    "Verdict", "SearchResult", "PlanError", "make_task", "parse_plan", "step", "validate_plan",
    "solve_bfs", "conformant_task", "VALID", "INAPPLICABLE", "GOAL_UNSATISFIED", "FOUND",
    "NONE_FOUND", "BUDGET_EXCEEDED", "WORLD_LIMIT",
]
