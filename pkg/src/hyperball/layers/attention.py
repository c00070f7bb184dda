"""Poincaré multi-head attention built on the weighted gyromidpoint."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import gyro
from ..atlas import mobius_gyromidpoint
from ..errors import ContractViolation, DomainError
from .beta import beta_concat, beta_split
from .linear import LinearParams, poincare_fc

__all__ = ["AttentionParams", "attention_weights", "poincare_attention", "SIMILARITIES", "ACTIVATIONS"]

SIMILARITIES = ("neg_distance", "tangent_inner")
ACTIVATIONS = ("exp", "sigmoid", "identity")


@dataclass
class AttentionParams:
    heads: int
    head_dim: int
    query: LinearParams
    key: LinearParams
    value: LinearParams
    similarity: str = "neg_distance"
    activation: str = "exp"
    tau: float = 1.0
    gamma: float = 0.0

    def __post_init__(self):
        if self.similarity not in SIMILARITIES:
            raise ContractViolation(f"unknown similarity {self.similarity!r}")
        if self.activation not in ACTIVATIONS:
            raise ContractViolation(f"unknown activation {self.activation!r}")
        if self.similarity == "neg_distance" and not self.tau > 0:
            raise ContractViolation("inverse temperature tau must be positive")
        hd = self.heads * self.head_dim
        for name in ("query", "key", "value"):
            p = getattr(self, name)
            if p.out_dim != hd:
                raise ContractViolation(f"{name} projection outputs {p.out_dim}, expected {hd}")
            if p.c != self.query.c:
                raise ContractViolation("projections disagree on curvature")
        if self.key.in_dim != self.value.in_dim:
            raise ContractViolation("key and value projections must read the same source")

    @property
    def c(self) -> float:
        return self.query.c


def _heads(x: np.ndarray, p: AttentionParams) -> np.ndarray:
    # (..., L, h*d) -> (..., h, L, d)
    parts = beta_split(x, [p.head_dim] * p.heads, c=p.c)
    return np.stack(parts, axis=-3)


def attention_weights(source, target, params: AttentionParams, mask=None):
    """Return (weights, values): weights (..., h, Lt, Ls), values (..., h, Ls, d).

    ``mask`` is boolean (Lt, Ls); True marks an entry that must be ignored.
    """
    c = params.c
    q = _heads(poincare_fc(target, params.query), params)
    k = _heads(poincare_fc(source, params.key), params)
    v = _heads(poincare_fc(source, params.value), params)
    if params.similarity == "neg_distance":
        sim = -params.tau * gyro.distance(q[..., :, None, :], k[..., None, :, :], c=c) - params.gamma
    else:
        lq = gyro.logmap0(q, c=c)
        lk = gyro.logmap0(k, c=c)
        sim = (lq @ np.swapaxes(lk, -1, -2)) / math.sqrt(params.head_dim)

    keep = np.ones(sim.shape[-2:], dtype=bool)
    if mask is not None:
        mask = np.asarray(mask, dtype=bool)
        if mask.shape != sim.shape[-2:]:
            raise ContractViolation(f"mask shape {mask.shape} != {sim.shape[-2:]}")
        keep = ~mask

    if params.activation == "exp":
        # shifting by the row max is a positive rescaling, which the midpoint ignores
        shift = np.max(np.where(keep, sim, -np.inf), axis=-1, keepdims=True)
        shift = np.where(np.isfinite(shift), shift, 0.0)
        w = np.exp(np.where(keep, sim - shift, -np.inf))
    elif params.activation == "sigmoid":
        w = 1.0 / (1.0 + np.exp(-sim))
    else:
        w = sim.copy()
    w = np.where(keep, w, 0.0)

    # identity weights may be signed; a row with no positive weight has no meaningful midpoint
    dead = np.all(w <= 0, axis=-1) if params.activation == "identity" else np.all(w == 0, axis=-1)
    if np.any(dead):
        rows = sorted({int(i) for i in np.nonzero(dead)[-1]})
        raise DomainError(f"attention weights vanish for target rows {rows}")
    return w, v


def poincare_attention(source, target, params: AttentionParams, mask=None) -> np.ndarray:
    """Attend from target (..., Lt, m) over source (..., Ls, n); returns (..., Lt, h*d)."""
    source = np.asarray(source, dtype=np.float64)
    target = np.asarray(target, dtype=np.float64)
    w, v = attention_weights(source, target, params, mask)
    heads = mobius_gyromidpoint(v[..., None, :, :], w, c=params.c)
    return beta_concat([heads[..., i, :, :] for i in range(params.heads)], c=params.c)
