"""Reverse-mode differentiation over a fixed set of numpy primitives."""

from . import functional, ops
from .check import grad_check, numeric_gradients, tape_gradients
from .tape import PRIMITIVES, Node, Tape, backward

__all__ = [
    "PRIMITIVES",
    "Node",
    "Tape",
    "backward",
    "functional",
    "grad_check",
    "numeric_gradients",
    "ops",
    "tape_gradients",
]
