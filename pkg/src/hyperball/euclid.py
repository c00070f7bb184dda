"""Plain-vector reference models matching the ball layers as c -> 0.

These never take a curvature argument. Each function works on numpy arrays
and on tape nodes, so the same code serves as a limit oracle in tests and as
a trainable baseline in the harness.
"""

from __future__ import annotations

import math

import numpy as np

from .autodiff import ops
from .autodiff.ops import value
from .layers.beta import beta_coefficient

__all__ = [
    "hyperplane_score",
    "affine_logits",
    "fc_limit",
    "weighted_mean",
    "attention_reference",
]


def hyperplane_score(x, Z, r):
    """<x, z_k> - r_k ||z_k||, shape (..., m)."""
    m = value(Z).shape[0]
    return ops.matmul(x, ops.swapaxes(Z)) - r * ops.reshape(ops.norm(Z), (m,))


def affine_logits(x, W, b):
    """Ordinary multinomial logistic regression logits x W^T + b."""
    return ops.matmul(x, ops.swapaxes(W)) + b


def fc_limit(x, Z, r):
    """Small-curvature limit of the Poincaré FC layer: 2 (<z_k, x> - r_k ||z_k||)."""
    return 2.0 * hyperplane_score(x, Z, r)


def weighted_mean(points, weights):
    """Weighted mean of points (..., N, n) with nonnegative weights (..., N)."""
    w = ops.reshape(weights, value(weights).shape + (1,))
    return ops.sum(w * points, axis=-2) / ops.sum(w, axis=-2)


def _split_heads(x, heads: int, head_dim: int):
    k = beta_coefficient(head_dim) / beta_coefficient(heads * head_dim)
    parts = [ops.take(x, (Ellipsis, slice(i * head_dim, (i + 1) * head_dim))) * k for i in range(heads)]
    return ops.stack(parts, axis=-3)


def attention_reference(
    source,
    target,
    q_params,
    k_params,
    v_params,
    heads: int,
    head_dim: int,
    similarity: str = "neg_distance",
    tau=1.0,
    gamma=0.0,
    mask=None,
):
    """Softmax attention with the same head scaling the ball version uses in the limit."""
    q = _split_heads(fc_limit(target, *q_params), heads, head_dim)
    k = _split_heads(fc_limit(source, *k_params), heads, head_dim)
    v = _split_heads(fc_limit(source, *v_params), heads, head_dim)
    qs, ks = value(q).shape, value(k).shape
    if similarity == "neg_distance":
        diff = ops.reshape(q, qs[:-1] + (1, qs[-1])) - ops.reshape(k, ks[:-2] + (1,) + ks[-2:])
        dist = 2.0 * ops.norm(diff)
        sim = -tau * ops.reshape(dist, value(dist).shape[:-1]) - gamma
    else:
        sim = ops.matmul(q, ops.swapaxes(k)) / math.sqrt(head_dim)
    keep = np.ones(value(sim).shape[-2:])
    if mask is not None:
        keep = 1.0 - np.asarray(mask, dtype=np.float64)
    sv = value(sim)
    shift = np.max(np.where(keep > 0, sv, -np.inf), axis=-1, keepdims=True)
    shift = np.where(np.isfinite(shift), shift, 0.0)
    w = ops.exp((sim - shift) * keep) * keep
    vs = value(v).shape
    agg = weighted_mean(ops.reshape(v, vs[:-2] + (1,) + vs[-2:]), w)
    scale = beta_coefficient(heads * head_dim) / beta_coefficient(head_dim)
    return ops.concat([ops.take(agg, (Ellipsis, i, slice(None), slice(None))) * scale for i in range(heads)], axis=-1)
