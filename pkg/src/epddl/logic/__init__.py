"""Epistemic formulas, Kripke states and model checking."""

from .bisim import analyze_pointing, bisimilar, canonical_key, contraction, generated_submodel
from .formula import (
    FALSE,
    TRUE,
    And,
    Atom,
    Bottom,
    Formula,
    Imply,
    Modal,
    ModalKind,
    Not,
    Or,
    Top,
    box,
    ck,
    ck_diamond,
    conj,
    diamond,
    disj,
    kw,
    kw_diamond,
    modal_depth,
    size,
)
from .frames import frame_report
from .state import EpistemicState, StateError, disjoint_union
from .truth import evaluate, evaluate_at_world, extension

__all__ = [
    "analyze_pointing", "bisimilar", "canonical_key", "contraction", "generated_submodel", "FALSE",
    "TRUE", "And", "Atom", "Bottom", "Formula", "Imply", "Modal", "ModalKind", "Not", "Or", "Top",
    "box", "ck", "ck_diamond", "conj", "diamond", "disj", "kw", "kw_diamond", "modal_depth", "size",
    "frame_report", "EpistemicState", "StateError", "disjoint_union", "evaluate",
    "evaluate_at_world", "extension",
]
