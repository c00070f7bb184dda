"""Differentiable counterparts of the gyrovector and layer operations.

These are written from scratch in terms of the tape primitives (they do not
call into :mod:`hyperball.gyro` or :mod:`hyperball.layers`), so their
forward values double as an independent check on the direct numpy code.
Arguments may be :class:`~hyperball.autodiff.tape.Node` objects or arrays.
Tangent/ball arrays keep the coordinate axis last; scalar-per-point results
keep a trailing singleton axis unless noted.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..errors import DomainError
from ..gyro import ATANH_EPS, BALL_EPS, MAX_SINH_ARG
from ..layers.beta import beta_coefficient
from . import ops
from .ops import value

TINY = 1e-150


def _unit(x):
    return x / ops.clamp(ops.norm(x), TINY)


def _safe_norm(x):
    # f(|x|) x / |x| written as (f(t) / t) x with t floored away from zero, so
    # the derivative at the origin comes out as f'(0) I instead of 0
    return ops.clamp(ops.norm(x), TINY)


def _artanh(u):
    return ops.artanh(ops.clamp(u, -1.0 + ATANH_EPS, 1.0 - ATANH_EPS))


def _hyp(u):
    return ops.clamp(u, -MAX_SINH_ARG, MAX_SINH_ARG)


def project(x, c: float):
    max_norm = (1.0 - BALL_EPS) / math.sqrt(c)
    return x * (max_norm / ops.clamp(ops.norm(x), max_norm))


def conformal_factor(x, c: float):
    return 2.0 / (1.0 - c * ops.dot(x, x))


def mobius_add(x, y, c: float):
    x2 = ops.dot(x, x)
    y2 = ops.dot(y, y)
    xy = ops.dot(x, y)
    num = (1.0 + 2.0 * c * xy + c * y2) * x + (1.0 - c * x2) * y
    den = 1.0 + 2.0 * c * xy + c * c * x2 * y2
    return project(num / den, c)


def mobius_scalar_mul(r, x, c: float):
    sc = math.sqrt(c)
    t = sc * _safe_norm(x)
    return project(ops.tanh(r * _artanh(t)) / t * x, c)


def gyration(x, y, z, c: float):
    x2 = ops.dot(x, x)
    y2 = ops.dot(y, y)
    xy = ops.dot(x, y)
    xz = ops.dot(x, z)
    yz = ops.dot(y, z)
    a = c * xz * y2 - yz * (1.0 + 2.0 * c * xy)
    b = c * yz * x2 + xz
    den = 1.0 + 2.0 * c * xy + c * c * x2 * y2
    return z - 2.0 * c * (a * x + b * y) / den


def expmap0(v, c: float):
    t = math.sqrt(c) * _safe_norm(v)
    return project(ops.tanh(t) / t * v, c)


def logmap0(y, c: float):
    y = project(y, c)
    t = math.sqrt(c) * _safe_norm(y)
    return _artanh(t) / t * y


def expmap(x, v, c: float):
    sc = math.sqrt(c)
    lam = conformal_factor(x, c)
    n = _safe_norm(v)
    return mobius_add(x, ops.tanh(sc * lam * n / 2.0) / (sc * n) * v, c)


def logmap(x, y, c: float):
    sc = math.sqrt(c)
    u = mobius_add(-x, project(y, c), c)
    lam = conformal_factor(x, c)
    n = _safe_norm(u)
    return 2.0 / (sc * lam) * _artanh(sc * n) / n * u


def distance(x, y, c: float):
    """d_c(x, y) with a trailing singleton axis."""
    sc = math.sqrt(c)
    return 2.0 / sc * _artanh(sc * ops.norm(mobius_add(-x, y, c)))


def parallel_transport(x, y, v, c: float):
    return conformal_factor(x, c) / conformal_factor(y, c) * gyration(y, -x, v, c)


def dist_to_hyperplane(x, p, a, c: float, signed: bool = False):
    sc = math.sqrt(c)
    w = mobius_add(-p, x, c)
    arg = 2.0 * sc * ops.dot(w, a) / ((1.0 - c * ops.dot(w, w)) * ops.norm(a))
    return ops.asinh(arg if signed else ops.absolute(arg)) / sc


def gyromidpoint(points, weights, c: float):
    """Signed-weight gyromidpoint of points (..., N, n) with weights (..., N)."""
    w = ops.reshape(weights, value(weights).shape + (1,))
    lam = conformal_factor(points, c)
    num = ops.sum(w * lam * points, axis=-2)
    den = ops.sum(ops.absolute(w) * (lam - 1.0), axis=-2)
    u = num / den
    half = u / (1.0 + ops.sqrt(ops.clamp(1.0 - c * ops.dot(u, u), 0.0)))
    return project(half, c)


def gyrometric_objective(points, weights, candidate, c: float):
    shape = value(candidate).shape
    cand = ops.reshape(candidate, shape[:-1] + (1, shape[-1]))
    u = mobius_add(-cand, points, c)
    u2 = ops.dot(u, u)
    w = ops.reshape(weights, value(weights).shape + (1,))
    return ops.sum(w * 2.0 / (1.0 - c * u2) * u2, axis=-2)


def transport_orientation(z, r, c: float):
    sc = math.sqrt(c)
    r1 = ops.reshape(r, value(r).shape + (1,))
    q = expmap0(r1 * _unit(z), c)
    a = z * ops.sech(_hyp(sc * r1)) * ops.sech(_hyp(sc * r1))
    return a, q


def mlr_score(x, Z, r, c: float):
    """Unidirectional Poincaré MLR scores, shape (..., m)."""
    sc = math.sqrt(c)
    m = value(Z).shape[0]
    z_norm = ops.norm(Z)
    xz = ops.matmul(x, ops.swapaxes(Z / ops.clamp(z_norm, TINY)))
    lam = conformal_factor(x, c)
    two_r = _hyp(2.0 * sc * r)
    arg = lam * sc * xz * ops.cosh(two_r) - (lam - 1.0) * ops.sinh(two_r)
    return 2.0 / sc * ops.reshape(z_norm, (m,)) * ops.asinh(arg)


def poincare_fc(x, Z, r, c: float):
    sc = math.sqrt(c)
    w = ops.sinh(_hyp(sc * mlr_score(x, Z, r, c))) / sc
    return project(w / (1.0 + ops.sqrt(1.0 + c * ops.dot(w, w))), c)


def beta_split(x, sizes: Sequence[int], c: float):
    v = logmap0(x, c)
    n = value(x).shape[-1]
    out, start = [], 0
    for s in sizes:
        piece = ops.take(v, (Ellipsis, slice(start, start + s)))
        out.append(expmap0(piece * (beta_coefficient(s) / beta_coefficient(n)), c))
        start += s
    return out


def beta_concat(xs, c: float):
    n = sum(value(x).shape[-1] for x in xs)
    bn = beta_coefficient(n)
    pieces = [logmap0(x, c) * (bn / beta_coefficient(value(x).shape[-1])) for x in xs]
    return expmap0(ops.concat(pieces, axis=-1), c)


def _gather_index(spatial: tuple, kernel, dilation, stride):
    d = len(kernel)
    out = []
    for i in range(d):
        span = (kernel[i] - 1) * dilation[i] + 1
        n_out = (spatial[i] - span) // stride[i] + 1
        o = np.arange(n_out) * stride[i]
        k = np.arange(kernel[i]) * dilation[i]
        shape_o = [1] * (2 * d)
        shape_o[i] = n_out
        shape_k = [1] * (2 * d)
        shape_k[d + i] = kernel[i]
        out.append(o.reshape(shape_o) + k.reshape(shape_k))
    return out


def poincare_conv(feature_map, Z, r, c: float, kernel_size, dilation=None, padding=None, stride=None):
    """Taped Poincaré convolution over (..., *spatial, n)."""
    d = len(kernel_size)
    dilation = tuple(dilation or (1,) * d)
    padding = tuple(padding or (0,) * d)
    stride = tuple(stride or (1,) * d)
    v = logmap0(feature_map, c)
    shape = value(feature_map).shape
    n = shape[-1]
    for i, p in enumerate(padding):
        if p:
            ax = len(shape) - 1 - d + i
            zshape = list(value(v).shape)
            zshape[ax] = p
            zeros = np.zeros(zshape)
            v = ops.concat([zeros, v, zeros], axis=ax)
    spatial = value(v).shape[-1 - d:-1]
    idx = _gather_index(spatial, kernel_size, dilation, stride)
    fields = ops.take(v, (Ellipsis, *idx, slice(None)))
    fshape = value(fields).shape
    K = int(np.prod(kernel_size))
    fields = ops.reshape(fields, fshape[: len(fshape) - d - 1] + (K * n,))
    x = expmap0(fields * (beta_coefficient(n * K) / beta_coefficient(n)), c)
    return poincare_fc(x, Z, r, c)


def poincare_attention(
    source,
    target,
    q_params,
    k_params,
    v_params,
    heads: int,
    head_dim: int,
    c: float,
    similarity: str = "neg_distance",
    activation: str = "exp",
    tau=1.0,
    gamma=0.0,
    mask=None,
):
    """Taped multi-head attention. ``*_params`` are (Z, r) pairs."""

    def split_heads(x):
        parts = beta_split(x, [head_dim] * heads, c)
        return ops.stack(parts, axis=-3)

    q = split_heads(poincare_fc(target, *q_params, c))
    k = split_heads(poincare_fc(source, *k_params, c))
    v = split_heads(poincare_fc(source, *v_params, c))
    qs, ks = value(q).shape, value(k).shape
    if similarity == "neg_distance":
        qe = ops.reshape(q, qs[:-1] + (1, qs[-1]))
        ke = ops.reshape(k, ks[:-2] + (1,) + ks[-2:])
        dist = distance(qe, ke, c)
        sim = -tau * ops.reshape(dist, value(dist).shape[:-1]) - gamma
    else:
        sim = ops.matmul(logmap0(q, c), ops.swapaxes(logmap0(k, c))) / math.sqrt(head_dim)

    keep = np.ones(value(sim).shape[-2:])
    if mask is not None:
        keep = 1.0 - np.asarray(mask, dtype=np.float64)
    if activation == "exp":
        sv = value(sim)
        shift = np.max(np.where(keep > 0, sv, -np.inf), axis=-1, keepdims=True)
        shift = np.where(np.isfinite(shift), shift, 0.0)
        w = ops.exp((sim - shift) * keep) * keep
    elif activation == "sigmoid":
        w = ops.sigmoid(sim) * keep
    else:
        w = sim * keep
        dead = np.all(value(w) <= 0, axis=-1)
        if np.any(dead):
            rows = sorted({int(i) for i in np.nonzero(dead)[-1]})
            raise DomainError(f"attention weights vanish for target rows {rows}")

    vs = value(v).shape
    agg = gyromidpoint(ops.reshape(v, vs[:-2] + (1,) + vs[-2:]), w, c)
    return beta_concat([ops.take(agg, (Ellipsis, i, slice(None), slice(None))) for i in range(heads)], c)
