"""Desk-scale experiments: tree embeddings, subtree MLR, contour grids, midpoint fuzzing, attention demo."""

from .attention_demo import AttentionDemoConfig, attention_demo
from .contours import ContourConfig, check_report, emit_fc_contours
from .fuzz import FuzzConfig, fuzz_midpoints
from .subtree import SubtreeConfig, run_subtree_mlr
from .trees import EmbeddedTree, TreeSpec, embed_tree

__all__ = [
    "AttentionDemoConfig",
    "ContourConfig",
    "EmbeddedTree",
    "FuzzConfig",
    "SubtreeConfig",
    "TreeSpec",
    "attention_demo",
    "check_report",
    "embed_tree",
    "emit_fc_contours",
    "fuzz_midpoints",
    "run_subtree_mlr",
]
