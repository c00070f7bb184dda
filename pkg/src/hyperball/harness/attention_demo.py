"""Toy task for Poincaré attention: predict the gyromidpoint of a marked subset.

Every source token is the β-concatenation of a ball point with a one-coordinate
mark (+mark_value for members, -mark_value otherwise). A single constant query
token attends over the sources and a Poincaré FC layer reads out a point of the
original dimension. The loss is the mean squared geodesic distance to the true
midpoint. ``model="euclidean"`` trains the plain-vector limit of the same network.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .. import atlas
from ..autodiff import Tape, ops
from ..autodiff import functional as F
from ..errors import ContractViolation, DomainError
from ..euclid import attention_reference, fc_limit
from ..layers.attention import AttentionParams
from ..layers.beta import beta_coefficient, beta_concat
from ..layers.linear import LinearParams
from ..optim import InitSpec, ParamGroup, euclidean_adam_step, group_state, init_params
from .common import config_hash

MODELS = ("poincare", "euclidean")
LAYERS = ("query", "key", "value", "readout")


@dataclass(frozen=True)
class AttentionDemoConfig:
    c: float = 1.0
    dim: int = 2
    seq_len: int = 8
    heads: int = 2
    head_dim: int = 2
    samples: int = 128
    point_radius: float = 0.5
    mark_value: float = 0.5
    epochs: int = 30
    batch_size: int = 16
    lr: float = 0.01
    tau: float = 1.0
    seeds: tuple = (0, 1, 2)
    model: str = "poincare"
    workers: int = 1

    def __post_init__(self):
        if self.dim < 2 or self.epochs < 0 or self.seq_len < 1:
            raise ContractViolation("need dim >= 2, epochs >= 0 and seq_len >= 1")
        if self.model not in MODELS:
            raise ContractViolation(f"model must be one of {MODELS}")
        if not self.tau > 0:
            raise ContractViolation("tau must be positive")
        object.__setattr__(self, "seeds", tuple(self.seeds))


def make_dataset(cfg: AttentionDemoConfig, seed: int):
    """Return (points, marks, targets); targets use the model's own midpoint."""
    rng = np.random.default_rng([seed, 7])
    d = rng.normal(size=(cfg.samples, cfg.seq_len, cfg.dim))
    d /= np.linalg.norm(d, axis=-1, keepdims=True)
    points = d * cfg.point_radius * rng.uniform(size=(cfg.samples, cfg.seq_len, 1))
    marks = rng.uniform(size=(cfg.samples, cfg.seq_len)) < 0.5
    marks[np.arange(cfg.samples), rng.integers(cfg.seq_len, size=cfg.samples)] = True
    weights = marks.astype(np.float64)
    if cfg.model == "poincare":
        targets = atlas.mobius_gyromidpoint(points, weights, c=cfg.c)
    else:
        targets = np.sum(weights[..., None] * points, axis=-2) / np.sum(weights, axis=-1, keepdims=True)
    return points, marks, targets


def tokens(points: np.ndarray, marks: np.ndarray, cfg: AttentionDemoConfig) -> np.ndarray:
    m = np.where(marks, cfg.mark_value, -cfg.mark_value)[..., None]
    if cfg.model == "poincare":
        return beta_concat([points, m], c=cfg.c)
    n = cfg.dim + 1
    return np.concatenate(
        [points * (beta_coefficient(n) / beta_coefficient(cfg.dim)), m * (beta_coefficient(n) / beta_coefficient(1))],
        axis=-1,
    )


def init_groups(cfg: AttentionDemoConfig, seed: int) -> list[ParamGroup]:
    width = cfg.heads * cfg.head_dim
    fans = {"query": (cfg.dim + 1, width), "key": (cfg.dim + 1, width), "value": (cfg.dim + 1, width), "readout": (width, cfg.dim)}
    groups = []
    for i, name in enumerate(LAYERS):
        n, m = fans[name]
        p = init_params(InitSpec("fc", n=n, m=m, c=cfg.c if cfg.model == "poincare" else 1.0), seed * 16 + i)
        groups += [ParamGroup("euclidean", p.Z), ParamGroup("euclidean", p.r)]
    groups.append(ParamGroup("euclidean", np.array(math.log(cfg.tau))))
    return groups


def forward(p, src, tgt, cfg: AttentionDemoConfig):
    """Predicted points (B, dim) for parameter list ``p`` (arrays or nodes)."""
    q, k, v, out = (p[0], p[1]), (p[2], p[3]), (p[4], p[5]), (p[6], p[7])
    tau = ops.exp(p[8])
    if cfg.model == "poincare":
        h = F.poincare_attention(src, tgt, q, k, v, cfg.heads, cfg.head_dim, cfg.c, tau=tau)
        y = F.poincare_fc(h, *out, cfg.c)
    else:
        h = attention_reference(src, tgt, q, k, v, cfg.heads, cfg.head_dim, tau=tau)
        y = fc_limit(h, *out)
    return ops.reshape(y, (ops.value(y).shape[0], cfg.dim))


def loss_fn(p, src, tgt, targets, cfg: AttentionDemoConfig):
    pred = forward(p, src, tgt, cfg)
    if cfg.model == "poincare":
        d = F.distance(pred, targets, cfg.c)
    else:
        d = 2.0 * ops.norm(pred - targets)
    return ops.sum(d * d) / len(targets)


def run_seed(cfg: AttentionDemoConfig, seed: int):
    """Return (loss per epoch starting with the initial loss, final groups)."""
    points, marks, targets = make_dataset(cfg, seed)
    src = tokens(points, marks, cfg)
    tgt = np.zeros((cfg.samples, 1, cfg.dim + 1))
    groups = init_groups(cfg, seed)
    rng = np.random.default_rng(seed)

    def full_loss(epoch):
        value = float(ops.value(loss_fn([g.values for g in groups], src, tgt, targets, cfg)))
        if not math.isfinite(value):
            raise DomainError(f"non-finite loss at epoch {epoch}, seed {seed}, model {cfg.model}")
        return value

    losses = [full_loss(0)]
    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(cfg.samples)
        for start in range(0, cfg.samples, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            tape = Tape()
            leaves = [tape.leaf(g.values) for g in groups]
            loss = loss_fn(leaves, src[idx], tgt[idx], targets[idx], cfg)
            grads = tape.backward(loss)
            if not np.isfinite(loss.value).all():
                raise DomainError(f"non-finite batch loss at epoch {epoch}, seed {seed}, batch start {start}")
            groups = [euclidean_adam_step(g, dg, lr=cfg.lr) for g, dg in zip(groups, grads)]
        losses.append(full_loss(epoch))
    return losses, groups


def trained_layer(groups: list[ParamGroup], cfg: AttentionDemoConfig) -> tuple[AttentionParams, LinearParams]:
    c = cfg.c if cfg.model == "poincare" else 1.0
    lin = [LinearParams(groups[2 * i].values, groups[2 * i + 1].values, c) for i in range(4)]
    attn = AttentionParams(cfg.heads, cfg.head_dim, lin[0], lin[1], lin[2], tau=float(np.exp(groups[8].values)))
    return attn, lin[3]


def optimizer_state(groups: list[ParamGroup]) -> dict:
    names = [f"{layer}.{p}" for layer in LAYERS for p in ("Z", "r")] + ["log_tau"]
    return {name: group_state(g) for name, g in zip(names, groups)}


def attention_demo(cfg: AttentionDemoConfig) -> dict:
    """Loss curve rows (seed, epoch, loss, config_hash) plus the per-seed final groups."""
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(run_seed, [cfg] * len(cfg.seeds), cfg.seeds))
    else:
        results = [run_seed(cfg, s) for s in cfg.seeds]
    h = config_hash(cfg)
    rows = [
        {"seed": s, "epoch": e, "loss": loss, "config_hash": h}
        for s, (losses, _) in zip(cfg.seeds, results)
        for e, loss in enumerate(losses)
    ]
    return {"rows": rows, "groups": {s: g for s, (_, g) in zip(cfg.seeds, results)}, "config_hash": h}
