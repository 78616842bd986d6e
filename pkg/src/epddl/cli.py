"""Command-line driver.

Exit codes: 0 success, 1 user error or negative verdict, 2 search budget
exceeded, 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from .frontend import EpddlError, load, type_check
from .grounder import GroundTask, build_task
from .jsonio import TaskFormatError, emit_json, info_mismatches, read_json
from .report import analysis_rows, plot_state, write_tsv
from .runtime import (
    BUDGET_EXCEEDED, FOUND, WORLD_LIMIT, PlanError, parse_plan, solve_bfs, validate_plan,
)

OK, USER_ERROR, BUDGET, INTERNAL = 0, 1, 2, 3


class InvariantFailure(RuntimeError):
    pass


class UsageError(ValueError):
    pass


def _err(msg: str) -> None:
    print(msg, file=sys.stderr)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _check(paths: Sequence[str]):
    if len(paths) < 2:
        raise UsageError("expected <problem> <domain> [libraries...]")
    problem, domain, *libs = paths
    return type_check(load(problem), load(domain), [load(p) for p in libs])


def _task(paths: Sequence[str]) -> GroundTask:
    if len(paths) == 1 and paths[0].endswith(".json"):
        return read_json(_read(paths[0]))
    return build_task(_check(paths))


def cmd_check(args) -> int:
    spec = _check(args.sources)
    print(f"ok: problem {spec.problem.name}, domain {spec.domain.name}, "
          f"{len(spec.requirements)} requirements")
    return OK


def cmd_ground(args) -> int:
    task = build_task(_check(args.sources))
    bad = info_mismatches(task)
    if bad:
        raise InvariantFailure(f"task info disagrees with the task: {', '.join(bad)}")
    text = emit_json(task)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return OK


def cmd_solve(args) -> int:
    task = _task(args.sources)
    res = solve_bfs(task, max_depth=args.depth, max_states=args.max_states, max_worlds=args.max_worlds)
    if res.status == FOUND:
        if not validate_plan(task, res.plan).valid:
            raise InvariantFailure("search returned a plan that does not validate")
        for name in res.plan:
            print(name)
        return OK
    _err(f"{res.status}: {res.reason}")
    return BUDGET if res.status in (BUDGET_EXCEEDED, WORLD_LIMIT) else USER_ERROR


def cmd_validate(args) -> int:
    task = read_json(_read(args.task))
    verdict = validate_plan(task, parse_plan(_read(args.plan)))
    print(verdict)
    return OK if verdict.valid else USER_ERROR


def cmd_analyze(args) -> int:
    task = read_json(_read(args.task))
    write_tsv(analysis_rows(task.initial), sys.stdout)
    if args.plot is not None:
        path = args.plot or os.path.splitext(args.task)[0] + ".png"
        plot_state(task.initial, path)
        _err(f"figure written to {path}")
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="epddl", description="EPDDL compiler and DEL planning tools.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check", help="parse and type-check a specification")
    c.add_argument("sources", nargs="+", metavar="FILE", help="problem, domain, then libraries")
    c.set_defaults(func=cmd_check)

    g = sub.add_parser("ground", help="ground a specification to JSON")
    g.add_argument("sources", nargs="+", metavar="FILE", help="problem, domain, then libraries")
    g.add_argument("-o", "--output", help="output file (default: standard output)")
    g.set_defaults(func=cmd_ground)

    s = sub.add_parser("solve", help="breadth-first search for a shortest plan")
    s.add_argument("sources", nargs="+", metavar="FILE", help="task.json, or problem domain [libraries]")
    s.add_argument("--depth", type=int, default=6, help="maximum plan length (default 6)")
    s.add_argument("--max-states", type=int, default=50_000, help="distinct state budget")
    s.add_argument("--max-worlds", type=int, default=10_000, help="largest state allowed")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("validate", help="check a plan against a ground task")
    v.add_argument("task")
    v.add_argument("plan")
    v.set_defaults(func=cmd_validate)

    a = sub.add_parser("analyze", help="frame and pointing report of the initial state")
    a.add_argument("task")
    a.add_argument("--plot", nargs="?", const="", default=None, metavar="PNG",
                   help="also draw the state (default: next to the task file)")
    a.set_defaults(func=cmd_analyze)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (EpddlError, TaskFormatError, PlanError, UsageError, OSError) as exc:
        _err(str(exc))
        return USER_ERROR
    except InvariantFailure as exc:
        _err(f"internal error: {exc}")
        return INTERNAL
    except Exception as exc:  # noqa: BLE001
        _err(f"internal error: {type(exc).__name__}: {exc}")
        return INTERNAL


if __name__ == "__main__":
    sys.exit(main())
