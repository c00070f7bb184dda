"""Binary subtree membership with the Poincaré MLR against a Euclidean MLR.

Both models read the same ball coordinates and have the same parameter count.
The default roots are the nine grandchildren of the root of a depth-5,
branching-3 tree.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ..autodiff import Tape, ops
from ..autodiff import functional as F
from ..errors import ContractViolation, DomainError
from ..euclid import affine_logits
from ..optim import InitSpec, ParamGroup, euclidean_adam_step, init_params
from .common import config_hash
from .trees import TreeSpec, embed_tree

MODELS = ("poincare", "euclidean")


@dataclass(frozen=True)
class SubtreeConfig:
    depth: int = 5
    branching: int = 3
    edge_length: float = 1.0
    tree_seed: int = 0
    c: float = 1.0
    dim: int = 2
    subtree_roots: tuple = (4, 5, 6, 7, 8, 9, 10, 11, 12)
    epochs: int = 300
    batch_size: int = 16
    lr: float = 0.02
    train_fraction: float = 0.8
    seeds: tuple = (0, 1, 2)
    workers: int = 1

    def __post_init__(self):
        if self.dim < 2 or self.epochs < 1:
            raise ContractViolation("need dim >= 2 and epochs >= 1")
        if self.batch_size < 1 or not 0 < self.train_fraction < 1:
            raise ContractViolation("bad batch_size or train_fraction")
        object.__setattr__(self, "subtree_roots", tuple(self.subtree_roots))
        object.__setattr__(self, "seeds", tuple(self.seeds))


def f1_score(y_true: np.ndarray, y_pred: np.ndarray) -> float:
    """Binary F1 of the positive class (0 when there are no true positives)."""
    tp = int(np.sum(y_true & y_pred))
    fp = int(np.sum(~y_true & y_pred))
    fn = int(np.sum(y_true & ~y_pred))
    return 0.0 if tp == 0 else 2 * tp / (2 * tp + fp + fn)


def split(labels: np.ndarray, fraction: float, rng, name: str):
    """Stratified split: each class is divided by ``fraction`` separately."""
    train, test = [], []
    for cls in (True, False):
        idx = rng.permutation(np.nonzero(labels == cls)[0])
        if len(idx) < 2:
            raise DomainError(f"subtree {name}: too few {'positive' if cls else 'negative'} nodes to split")
        n_train = min(max(int(round(fraction * len(idx))), 1), len(idx) - 1)
        train.append(idx[:n_train])
        test.append(idx[n_train:])
    return np.sort(np.concatenate(train)), np.sort(np.concatenate(test))


def _cross_entropy(logits, y: np.ndarray):
    onehot = np.eye(2)[y.astype(int)]
    lse = ops.logsumexp(logits, axis=-1)
    return ops.sum(lse - ops.sum(logits * onehot, axis=-1, keepdims=True)) / len(y)


def _logits(model: str, x: np.ndarray, params, c: float):
    if model == "poincare":
        return F.mlr_score(x, params[0], params[1], c)
    return affine_logits(x, params[0], params[1])


def train_mlr(model: str, x, y, cfg: SubtreeConfig, seed: int):
    """Fit a two-class MLR with Adam; returns the learned parameter arrays."""
    lin = init_params(InitSpec("mlr", n=x.shape[-1], m=2, c=cfg.c), seed)
    groups = [ParamGroup("euclidean", lin.Z), ParamGroup("euclidean", lin.r)]
    rng = np.random.default_rng(seed)
    for _ in range(cfg.epochs):
        order = rng.permutation(len(y))
        for start in range(0, len(y), cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            tape = Tape()
            leaves = [tape.leaf(g.values) for g in groups]
            loss = _cross_entropy(_logits(model, x[idx], leaves, cfg.c), y[idx])
            grads = tape.backward(loss)
            groups = [euclidean_adam_step(g, dg, lr=cfg.lr) for g, dg in zip(groups, grads)]
    return [g.values for g in groups]


def run_seed(cfg: SubtreeConfig, seed: int) -> list[dict]:
    tree = embed_tree(TreeSpec(cfg.depth, cfg.branching, cfg.tree_seed, cfg.edge_length), cfg.c, cfg.dim)
    rows = []
    for root in cfg.subtree_roots:
        if not 0 < root < len(tree):
            raise ContractViolation(f"subtree root {root} is not a non-root node")
        labels = tree.subtree(root)
        rng = np.random.default_rng([seed, root])
        train, test = split(labels, cfg.train_fraction, rng, str(root))
        x = tree.points
        for model in MODELS:
            params = train_mlr(model, x[train], labels[train], cfg, seed)
            pred = np.argmax(_logits(model, x[test], params, cfg.c), axis=-1) == 1
            rows.append({"seed": seed, "subtree": root, "model": model, "f1": f1_score(labels[test], pred)})
    return rows


def run_subtree_mlr(cfg: SubtreeConfig) -> dict:
    """Per-seed F1 rows plus per-model mean and range over seeds."""
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            per_seed = list(pool.map(run_seed, [cfg] * len(cfg.seeds), cfg.seeds))
    else:
        per_seed = [run_seed(cfg, s) for s in cfg.seeds]
    rows = [r for seed_rows in per_seed for r in seed_rows]
    h = config_hash(cfg)
    for r in rows:
        r["config_hash"] = h
    summary = {}
    for model in MODELS:
        seed_means = [np.mean([r["f1"] for r in rows if r["model"] == model and r["seed"] == s]) for s in cfg.seeds]
        summary[model] = {
            "mean_f1": float(np.mean(seed_means)),
            "min_f1": float(np.min(seed_means)),
            "max_f1": float(np.max(seed_means)),
        }
    summary["margin_points"] = 100.0 * (summary["poincare"]["mean_f1"] - summary["euclidean"]["mean_f1"])
    return {"rows": rows, "summary": summary, "config_hash": h}
