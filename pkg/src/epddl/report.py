"""Tab-separated analysis rows for a state and an optional matplotlib figure."""

from __future__ import annotations

import csv
import math
from typing import IO, Iterable

from .logic.bisim import analyze_pointing
from .logic.frames import frame_report
from .logic.state import EpistemicState

HEADER = ("kind", "subject", "property", "value")
ALL = "-"


def _flag(v: bool) -> str:
    return "true" if v else "false"


def analysis_rows(state: EpistemicState) -> list[tuple[str, str, str, str]]:
    """Frame properties per agent, the overall class and the pointing analysis."""
    rep = frame_report(state)
    rows = []
    for ag, fr in rep.agents.items():
        for prop in ("reflexive", "serial", "transitive", "euclidean"):
            rows.append(("frame", ag, prop, _flag(getattr(fr, prop))))
    rows.append(("frame", ALL, "classification", rep.classification))
    p = analyze_pointing(state)
    rows.append(("pointing", ALL, "global", _flag(p.global_)))
    rows.append(("pointing", ALL, "local-for", ",".join(sorted(p.local_for)) or ALL))
    rows.append(("pointing", ALL, "nondeterministic", _flag(p.nondeterministic)))
    rows.append(("size", ALL, "worlds", str(len(state.worlds))))
    rows.append(("size", ALL, "designated", str(len(state.designated))))
    return rows


def write_tsv(rows: Iterable[tuple[str, ...]], out: IO[str]) -> None:
    w = csv.writer(out, delimiter="\t", lineterminator="\n")
    w.writerow(HEADER)
    w.writerows(rows)


def plot_state(state: EpistemicState, path: str, max_label_atoms: int = 6) -> None:
    """Worlds on a circle, one arrow colour per agent, designated worlds ringed."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
    from matplotlib.patches import Circle, FancyArrowPatch

    n = len(state.worlds)
    pos = {}
    for k, w in enumerate(state.worlds):
        ang = math.pi / 2 - 2 * math.pi * k / n
        pos[w] = (math.cos(ang), math.sin(ang)) if n > 1 else (0.0, 0.0)
    colors = plt.get_cmap("tab10")
    fig, ax = plt.subplots(figsize=(6, 6))
    r = 0.12
    loops: dict[str, list[str]] = {w: [] for w in state.worlds}
    for j, ag in enumerate(state.agents):
        col = colors(j % 10)
        ax.plot([], [], color=col, label=ag)
        for u, v in sorted(state.relations[ag]):
            if u == v:
                loops[u].append(ag)
                continue
            arrow = FancyArrowPatch(pos[u], pos[v], arrowstyle="-|>", mutation_scale=12, color=col,
                                    connectionstyle=f"arc3,rad={0.08 + 0.06 * j}",
                                    shrinkA=r * 140, shrinkB=r * 140, lw=1.2)
            ax.add_patch(arrow)
    for w, (x, y) in pos.items():
        ax.add_patch(Circle((x, y), r, fill=False, lw=1.5))
        if w in state.designated:
            ax.add_patch(Circle((x, y), r * 1.25, fill=False, lw=1.0))
        ax.text(x, y, w, ha="center", va="center", fontsize=9)
        lab = sorted(state.labels[w])
        text = ", ".join(lab[:max_label_atoms]) + (" ..." if len(lab) > max_label_atoms else "")
        if loops[w]:
            text += ("\n" if text else "") + "loops: " + ",".join(loops[w])
        # labels sit outside the circle, away from the arrows
        nx, ny = (x, y) if n > 1 else (0.0, -1.0)
        ax.text(x + nx * r * 2, y + ny * r * 2, text, ha="center",
                va="bottom" if ny > 0.1 else "top" if ny < -0.1 else "center", fontsize=6)
    ax.set_xlim(-1.8, 1.8)
    ax.set_ylim(-1.8, 1.8)
    ax.set_aspect("equal")
    ax.axis("off")
    if state.agents:
        ax.legend(loc="upper right", fontsize=8, title="agent")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)


__all__ = ["HEADER", "analysis_rows", "write_tsv", "plot_state"]
