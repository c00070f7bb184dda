"""Differential fuzzing of the three midpoint formulations."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import atlas, gyro
from ..errors import ContractViolation

THRESHOLD = 1e-9


@dataclass(frozen=True)
class FuzzConfig:
    trials: int = 1000
    dims: tuple = (1, 2, 4, 8, 16)
    cs: tuple = (0.5, 1.0, 2.0)
    max_points: int = 32
    max_radius: float = 3.0
    perturbations: int = 100
    perturbation_radius: float = 0.05
    seed: int = 0
    inject_fault: bool = False

    def __post_init__(self):
        if self.trials < 1:
            raise ContractViolation("trials must be >= 1")
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "cs", tuple(float(c) for c in self.cs))


def random_ball_points(rng, count: int, n: int, c: float, max_radius: float) -> np.ndarray:
    """Uniform directions with geodesic distance from the origin uniform in [0, max_radius]."""
    d = rng.normal(size=(count, n))
    d /= np.linalg.norm(d, axis=-1, keepdims=True)
    dist = rng.uniform(0.0, max_radius, size=(count, 1))
    return d * np.tanh(math.sqrt(c) * dist / 2.0) / math.sqrt(c)


def _midpoints(points, weights, c, inject_fault):
    mob = atlas.mobius_gyromidpoint(points, weights, c=c)
    ein = atlas.einstein_gyromidpoint(atlas.ball_to_klein(points, c=c), weights, c=c)
    if inject_fault:
        ein = ein * (1.0 + 1e-6)
    ein = atlas.klein_to_ball(ein, c=c)
    lor = atlas.hyperboloid_to_ball(
        atlas.lorentzian_centroid(atlas.ball_to_hyperboloid(points, c=c), weights, c=c), c=c
    )
    return mob, ein, lor


def fuzz_midpoints(cfg: FuzzConfig) -> dict:
    """Max pairwise midpoint divergence and max minimizer-objective violation."""
    rng = np.random.default_rng(cfg.seed)
    max_div = 0.0
    max_violation = 0.0
    for _ in range(cfg.trials):
        n = int(rng.choice(cfg.dims))
        c = float(rng.choice(cfg.cs))
        count = int(rng.integers(1, cfg.max_points + 1))
        points = random_ball_points(rng, count, n, c, cfg.max_radius)
        weights = rng.uniform(0.0, 1.0, size=count)
        weights[rng.integers(count)] += 0.1  # keep the set non-degenerate
        mob, ein, lor = _midpoints(points, weights, c, cfg.inject_fault)
        div = max(np.linalg.norm(mob - ein), np.linalg.norm(mob - lor), np.linalg.norm(ein - lor))
        max_div = max(max_div, float(div))

        step = rng.normal(size=(cfg.perturbations, n))
        step *= cfg.perturbation_radius / np.linalg.norm(step, axis=-1, keepdims=True)
        others = gyro.project(mob + step, c=c)
        at_mid = atlas.gyrometric_objective(points, weights, mob, c=c)
        nearby = atlas.gyrometric_objective(points, weights, others, c=c)
        max_violation = max(max_violation, float(at_mid - np.min(nearby)))
    return {
        "trials": cfg.trials,
        "max_divergence": max_div,
        "max_objective_violation": max(max_violation, 0.0),
        "threshold": THRESHOLD,
        "passed": max_div <= THRESHOLD and max_violation <= THRESHOLD,
    }
