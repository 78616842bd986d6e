"""Frame properties of accessibility relations."""

from __future__ import annotations

from dataclasses import dataclass

from .state import EpistemicState

S5 = "S5"
KD45 = "KD45"
NEITHER = "neither"


@dataclass(frozen=True)
class AgentFrame:
    reflexive: bool
    serial: bool
    transitive: bool
    euclidean: bool

    @property
    def is_s5(self) -> bool:
        return self.reflexive and self.transitive and self.euclidean

    @property
    def is_kd45(self) -> bool:
        return self.serial and self.transitive and self.euclidean


@dataclass(frozen=True)
class FrameReport:
    agents: dict[str, AgentFrame]
    classification: str


def agent_frame(state: EpistemicState, agent: str) -> AgentFrame:
    W = state.worlds
    succ = state.successors[agent]
    reflexive = all(w in succ[w] for w in W)
    serial = all(succ[w] for w in W)
    # wRv and vRu imply wRu
    transitive = all(succ[v] <= succ[w] for w in W for v in succ[w])
    # wRv and wRu imply vRu
    euclidean = all(succ[w] <= succ[v] for w in W for v in succ[w])
    return AgentFrame(reflexive, serial, transitive, euclidean)


def frame_report(state: EpistemicState) -> FrameReport:
    flags = {ag: agent_frame(state, ag) for ag in state.agents}
    if all(f.is_s5 for f in flags.values()):
        cls = S5
    elif all(f.is_kd45 for f in flags.values()):
        cls = KD45
    else:
        cls = NEITHER
    return FrameReport(flags, cls)
