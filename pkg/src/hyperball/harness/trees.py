"""Deterministic geodesic embedding of complete trees in the 2-D ball."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import gyro
from ..errors import ContractViolation


@dataclass(frozen=True)
class TreeSpec:
    """Complete tree: ``depth`` levels including the root, ``branching`` children per node."""

    depth: int = 5
    branching: int = 3
    seed: int = 0
    edge_length: float = 1.0

    def __post_init__(self):
        if self.depth < 2 or self.branching < 2:
            raise ContractViolation("tree needs depth >= 2 and branching >= 2")
        if not self.edge_length > 0:
            raise ContractViolation("edge_length must be positive")


@dataclass
class EmbeddedTree:
    """Nodes in breadth-first order; ``parent[0] == -1`` is the root."""

    points: np.ndarray
    parent: np.ndarray
    depth: np.ndarray
    c: float

    def __len__(self) -> int:
        return len(self.parent)

    def children(self, node: int) -> np.ndarray:
        return np.nonzero(self.parent == node)[0]

    def subtree(self, node: int) -> np.ndarray:
        """Boolean membership mask of the subtree rooted at ``node`` (inclusive)."""
        inside = np.zeros(len(self), dtype=bool)
        inside[node] = True
        # parents precede children in breadth-first order
        for i in range(node + 1, len(self)):
            if self.parent[i] >= 0 and inside[self.parent[i]]:
                inside[i] = True
        return inside


def _rotate(u: np.ndarray, theta: float) -> np.ndarray:
    ct, st = math.cos(theta), math.sin(theta)
    return np.array([ct * u[0] - st * u[1], st * u[0] + ct * u[1]])


def embed_tree(spec: TreeSpec, c: float = 1.0, dim: int = 2) -> EmbeddedTree:
    """Place every child at geodesic distance ``edge_length`` from its parent.

    The root sits at the origin with its children evenly spread starting from
    a seed-dependent angle. Any other node reserves the direction back to its
    parent and spreads its children evenly over the remaining directions.
    """
    if dim != 2:
        raise ContractViolation("embed_tree supports dim = 2 only")
    c = gyro.check_curvature(c)
    b, ell = spec.branching, spec.edge_length
    start = np.random.default_rng(spec.seed).uniform(0.0, 2.0 * math.pi)

    points = [np.zeros(2)]
    parent = [-1]
    depth = [0]
    frontier = [0]
    for level in range(1, spec.depth):
        nxt = []
        for p in frontier:
            x = points[p]
            if parent[p] < 0:
                base = np.array([math.cos(start), math.sin(start)])
                dirs = [_rotate(base, 2.0 * math.pi * j / b) for j in range(b)]
            else:
                back = gyro.logmap(x, points[parent[p]], c=c)
                back = back / np.linalg.norm(back)
                dirs = [_rotate(back, 2.0 * math.pi * j / (b + 1)) for j in range(1, b + 1)]
            lam = float(gyro.conformal_factor(x, c=c)[0])
            for u in dirs:
                points.append(gyro.expmap(x, u * (ell / lam), c=c))
                parent.append(p)
                depth.append(level)
                nxt.append(len(points) - 1)
        frontier = nxt
    return EmbeddedTree(np.array(points), np.array(parent), np.array(depth), c)
