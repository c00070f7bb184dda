"""Parameter initialization and adaptive-moment optimizers.

Euclidean (tangent) parameters use the standard bias-corrected Adam update.
Ball-resident parameters use a Riemannian variant: the Euclidean gradient is
rescaled by the inverse metric, the update is retracted with the exponential
map, and the first moment is parallel-transported to the new point. The
second moment is kept per row as the squared Riemannian gradient norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import gyro
from .errors import ContractViolation, DomainError
from .layers.linear import LinearParams

__all__ = [
    "ParamGroup",
    "MomentConfig",
    "InitSpec",
    "init_params",
    "euclidean_adam_step",
    "riemannian_step",
    "group_state",
    "group_from_state",
]

KINDS = ("euclidean", "ball")
INIT_KINDS = ("mlr", "fc", "conv", "embedding")


@dataclass
class ParamGroup:
    """Values plus optimizer state. Ball groups store points row-wise (..., n)."""

    kind: str
    values: np.ndarray
    c: float = 1.0
    m: np.ndarray | None = None
    v: np.ndarray | None = None
    step: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ContractViolation(f"kind must be one of {KINDS}, got {self.kind!r}")
        self.values = np.asarray(self.values, dtype=np.float64)
        self.c = gyro.check_curvature(self.c)
        if self.kind == "ball":
            self.values = gyro.project(self.values, c=self.c)


@dataclass(frozen=True)
class MomentConfig:
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


def _check_grads(group: ParamGroup, grads) -> np.ndarray:
    g = np.asarray(grads, dtype=np.float64)
    if g.shape != group.values.shape:
        raise ContractViolation(f"gradient shape {g.shape} != parameter shape {group.values.shape}")
    if not np.all(np.isfinite(g)):
        raise DomainError("non-finite gradient; step rejected")
    return g


def euclidean_adam_step(
    group: ParamGroup, grads, lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8
) -> ParamGroup:
    if group.kind != "euclidean":
        raise ContractViolation("euclidean_adam_step needs a euclidean group")
    g = _check_grads(group, grads)
    m = np.zeros_like(g) if group.m is None else group.m
    v = np.zeros_like(g) if group.v is None else group.v
    t = group.step + 1
    m = beta1 * m + (1.0 - beta1) * g
    v = beta2 * v + (1.0 - beta2) * g * g
    m_hat = m / (1.0 - beta1**t)
    v_hat = v / (1.0 - beta2**t)
    values = group.values - lr * m_hat / (np.sqrt(v_hat) + eps)
    return replace(group, values=values, m=m, v=v, step=t)


def riemannian_step(group: ParamGroup, grads, lr: float = 1e-3, moments: MomentConfig | None = MomentConfig()) -> ParamGroup:
    """One retraction step on the ball. ``moments=None`` gives plain Riemannian SGD."""
    if group.kind != "ball":
        raise ContractViolation("riemannian_step needs a ball group")
    g = _check_grads(group, grads)
    c, x = group.c, group.values
    lam = gyro.conformal_factor(x, c=c)
    rgrad = g / lam**2
    t = group.step + 1
    if moments is None:
        x_new = gyro.project(gyro.expmap(x, -lr * rgrad, c=c), c=c)
        return replace(group, values=x_new, step=t)

    b1, b2 = moments.beta1, moments.beta2
    m = np.zeros_like(g) if group.m is None else group.m
    v = np.zeros(g.shape[:-1] + (1,)) if group.v is None else group.v
    m = b1 * m + (1.0 - b1) * rgrad
    v = b2 * v + (1.0 - b2) * lam**2 * np.sum(rgrad * rgrad, axis=-1, keepdims=True)
    m_hat = m / (1.0 - b1**t)
    v_hat = v / (1.0 - b2**t)
    # eps is added to the Riemannian (metric-rescaled) root second moment
    direction = m_hat / (np.sqrt(v_hat) + moments.eps)
    x_new = gyro.project(gyro.expmap(x, -lr * direction, c=c), c=c)
    m = gyro.parallel_transport(x, x_new, m, c=c)
    return replace(group, values=x_new, m=m, v=v, step=t)


@dataclass(frozen=True)
class InitSpec:
    """Layer kind and fan sizes. ``count`` is the number of points for embeddings."""

    kind: str
    n: int
    m: int = 1
    K: int = 1
    eps_E: float = 1e-2
    c: float = 1.0
    count: int = 1

    def __post_init__(self):
        if self.kind not in INIT_KINDS:
            raise ContractViolation(f"kind must be one of {INIT_KINDS}, got {self.kind!r}")
        if min(self.n, self.m, self.K, self.count) < 1:
            raise ContractViolation("fan sizes must be positive")
        if not self.eps_E > 0:
            raise ContractViolation("eps_E must be positive")


def init_params(spec: InitSpec, seed: int):
    """LinearParams for layer kinds; a (count, n) array of ball points for embeddings."""
    rng = np.random.default_rng(seed)
    n, m, K = spec.n, spec.m, spec.K
    if spec.kind == "embedding":
        d = rng.normal(size=(spec.count, n))
        d /= np.linalg.norm(d, axis=-1, keepdims=True)
        radius = spec.eps_E * rng.uniform(size=(spec.count, 1))
        return gyro.project(d * radius, c=spec.c)
    std = {
        "mlr": 1.0 / math.sqrt(n),
        "fc": 1.0 / math.sqrt(2 * n * m),
        "conv": 1.0 / math.sqrt(2 * n * K * m),
    }[spec.kind]
    in_dim = n * K if spec.kind == "conv" else n
    return LinearParams(rng.normal(scale=std, size=(m, in_dim)), np.zeros(m), spec.c)


def _floats(a):
    return None if a is None else [float(x) for x in np.ravel(a)]


def group_state(group: ParamGroup) -> dict:
    """JSON-ready optimizer state (values included so a group restores fully)."""
    return {
        "kind": group.kind,
        "c": group.c,
        "step": group.step,
        "shape": list(group.values.shape),
        "values": _floats(group.values),
        "m": _floats(group.m),
        "v": _floats(group.v),
        "v_shape": None if group.v is None else list(group.v.shape),
    }


def group_from_state(d: dict) -> ParamGroup:
    shape = tuple(d["shape"])
    m = None if d["m"] is None else np.array(d["m"], dtype=np.float64).reshape(shape)
    v = None if d["v"] is None else np.array(d["v"], dtype=np.float64).reshape(d["v_shape"])
    group = ParamGroup(d["kind"], np.array(d["values"], dtype=np.float64).reshape(shape), d["c"], m, v, d["step"])
    return group
