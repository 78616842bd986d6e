"""Requirement keys, their implication rules and the closure operator."""

from __future__ import annotations

from typing import Iterable

from .errors import Diagnostic, NOPOS, Pos, RequirementError

CONTEXTS = ("preconditions", "postconditions", "obs-conditions", "goals", "list-formulas")
FAMILIES = ("negative", "disjunctive", "existential", "universal", "quantified", "modal")


def _family_keys(family: str) -> list[str]:
    contexts = CONTEXTS + ("formulas",)
    if family == "modal":
        contexts = tuple(c for c in contexts if c != "list-formulas")
    return [f":{family}-{c}" for c in contexts]


REQUIREMENTS: frozenset[str] = frozenset(
    [
        ":agent-groups", ":common-knowledge", ":conditional-effects", ":del", ":equality",
        ":events-conditions", ":facts", ":finitary-S5-theories", ":general-frames", ":group-modalities",
        ":KD45-frames", ":knowing-whether", ":lists", ":list-comprehensions", ":multi-pointed-models",
        ":ontic-actions", ":pal", ":partial-observability", ":static-common-knowledge", ":typing",
    ]
    + [k for fam in FAMILIES for k in _family_keys(fam)]
    + [f":general-{c}" for c in CONTEXTS + ("formulas",)]
)


def _rules() -> dict[str, frozenset[str]]:
    r: dict[str, set[str]] = {}

    def add(src: str, *dst: str) -> None:
        r.setdefault(src, set()).update(dst)

    for c in CONTEXTS + ("formulas",):
        add(f":negative-{c}", f":disjunctive-{c}")
        add(f":quantified-{c}", f":existential-{c}", f":universal-{c}")
        general = [f":{fam}-{c}" for fam in FAMILIES if f":{fam}-{c}" in REQUIREMENTS]
        add(f":general-{c}", *general)
    for fam in FAMILIES + ("general",):
        src = f":{fam}-formulas"
        add(src, *(f":{fam}-{c}" for c in CONTEXTS if f":{fam}-{c}" in REQUIREMENTS))
    for k in REQUIREMENTS:
        if k.endswith("-postconditions"):
            add(k, ":conditional-effects")
    add(":del", ":typing", ":equality", ":partial-observability", ":ontic-actions",
        ":multi-pointed-models", ":general-frames", ":general-formulas")
    add(":finitary-S5-theories", ":common-knowledge", ":knowing-whether")
    add(":common-knowledge", ":group-modalities")
    add(":static-common-knowledge", ":group-modalities", ":facts")
    add(":agent-groups", ":lists")
    add(":group-modalities", ":lists")
    return {k: frozenset(v) for k, v in r.items()}


IMPLIES: dict[str, frozenset[str]] = _rules()


def close(keys: Iterable[str]) -> frozenset[str]:
    """Closure of a key set under IMPLIES (no validation, no :pal default)."""
    out = set(keys)
    todo = list(out)
    while todo:
        for d in IMPLIES.get(todo.pop(), ()):
            if d not in out:
                out.add(d)
                todo.append(d)
    return frozenset(out)


def resolve_requirements(declared: Iterable[tuple[str, Pos, str] | str]) -> frozenset[str]:
    """Union of all declared keys, validated and closed; ``{:pal}`` when empty.

    Items are bare keys or ``(key, pos, file)`` triples for diagnostics.
    """
    keys, bad = [], []
    for item in declared:
        key, pos, file = (item, NOPOS, "<input>") if isinstance(item, str) else item
        if key not in REQUIREMENTS:
            bad.append(Diagnostic(pos, "unknown-requirement", f"unknown requirement key {key}", file))
        keys.append(key)
    if bad:
        raise RequirementError(bad)
    if not keys:
        return frozenset({":pal"})
    return close(keys)


def declared_keys(*sources) -> list[tuple[str, Pos, str]]:
    """Requirement keys of parsed problems, domains and libraries, with positions."""
    out = []
    for src in sources:
        for decl in src.requirements:
            out.extend((k, decl.pos, src.file) for k in decl.keys)
    return out
