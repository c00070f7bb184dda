"""Contour grids of one FC output unit over the 2-D ball, plus a zero-set checker.

Two maps are sampled on a polar grid: the Poincaré FC layer and the older
construction exp_0(A log_0 x) ⊕ b, which is kept here only as a comparison
baseline.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import gyro
from ..errors import ContractViolation
from ..layers.linear import LinearParams, poincare_fc, transport_orientation
from .common import config_hash, write_csv

HEADER = ("x1", "x2", "value_prev_fc", "value_ours", "config_hash")


@dataclass(frozen=True)
class ContourConfig:
    c: float = 1.0
    resolution: int = 256
    unit: int = 0
    Z: tuple = ((1.0, 0.5), (-0.3, 0.8))
    r: tuple = (0.4, -0.2)
    bias: tuple | None = None
    seed: int = 0
    random_params: bool = False

    def __post_init__(self):
        object.__setattr__(self, "Z", tuple(tuple(float(v) for v in row) for row in self.Z))
        object.__setattr__(self, "r", tuple(float(v) for v in self.r))
        if self.bias is not None:
            object.__setattr__(self, "bias", tuple(float(v) for v in self.bias))
        if self.resolution < 4:
            raise ContractViolation("resolution must be at least 4")


def resolve_params(cfg: ContourConfig) -> tuple[LinearParams, np.ndarray]:
    """Layer parameters and the baseline's bias point b (defaults to exp_0(r))."""
    if cfg.random_params:
        rng = np.random.default_rng(cfg.seed)
        Z, r = rng.normal(size=(2, 2)), rng.uniform(-0.5, 0.5, size=2)
    else:
        Z, r = np.array(cfg.Z), np.array(cfg.r)
    params = LinearParams(Z, r, cfg.c)
    if params.in_dim != 2:
        raise ContractViolation("contour grids need a 2-D input ball")
    if not 0 <= cfg.unit < params.out_dim:
        raise ContractViolation(f"unit {cfg.unit} out of range")
    bias = gyro.expmap0(params.r, c=cfg.c) if cfg.bias is None else gyro.project(np.array(cfg.bias), c=cfg.c)
    return params, bias


def previous_fc(x: np.ndarray, A: np.ndarray, b: np.ndarray, *, c: float) -> np.ndarray:
    """exp_0(A log_0 x) ⊕ b (comparison baseline only)."""
    return gyro.mobius_add(gyro.expmap0(gyro.logmap0(x, c=c) @ A.T, c=c), b, c=c)


def polar_grid(resolution: int, c: float) -> tuple[np.ndarray, float, float]:
    """Points (R, T, 2) on a polar grid plus radial and angular steps."""
    rmax = (1.0 - 1e-3) / math.sqrt(c)
    dr = rmax / resolution
    dt = 2.0 * math.pi / resolution
    radii = (np.arange(resolution) + 0.5) * dr
    angles = np.arange(resolution) * dt
    rr, tt = np.meshgrid(radii, angles, indexing="ij")
    return np.stack([rr * np.cos(tt), rr * np.sin(tt)], axis=-1), dr, dt


def sample_grid(cfg: ContourConfig):
    params, bias = resolve_params(cfg)
    grid, dr, dt = polar_grid(cfg.resolution, cfg.c)
    ours = poincare_fc(grid, params)[..., cfg.unit]
    prev = previous_fc(grid, params.Z, bias, c=cfg.c)[..., cfg.unit]
    return grid, prev, ours, dr, dt


def emit_fc_contours(cfg: ContourConfig, out_path) -> dict:
    grid, prev, ours, _, _ = sample_grid(cfg)
    h = config_hash(cfg)
    flat = grid.reshape(-1, 2)
    rows = ((float(x[0]), float(x[1]), float(p), float(o), h) for x, p, o in zip(flat, prev.ravel(), ours.ravel()))
    write_csv(out_path, HEADER, rows)
    return check_report(cfg)


def zero_crossings(grid: np.ndarray, values: np.ndarray, dr: float, dt: float):
    """Linear-interpolated sign changes between grid neighbours.

    Returns crossing points (k, 2) and the Euclidean size of the cell each
    crossing came from.
    """
    pts, sizes = [], []
    radii = np.linalg.norm(grid[:, 0], axis=-1)
    pairs = [
        (values[:-1, :], values[1:, :], grid[:-1, :], grid[1:, :], np.full(values[:-1].shape, dr)),
        # the angular direction wraps around
        (values, np.roll(values, -1, axis=1), grid, np.roll(grid, -1, axis=1), radii[:, None] * dt + 0 * values),
    ]
    for v0, v1, g0, g1, size in pairs:
        hit = (np.sign(v0) != np.sign(v1)) & (v0 != v1)
        t = (v0[hit] / (v0[hit] - v1[hit]))[:, None]
        pts.append(g0[hit] + t * (g1[hit] - g0[hit]))
        sizes.append(size[hit])
    return np.concatenate(pts), np.concatenate(sizes)


def fit_geodesic(points: np.ndarray, *, c: float) -> tuple[np.ndarray, np.ndarray]:
    """Least-squares Poincaré geodesic through 2-D points, as (p, a) for dist_to_hyperplane.

    Geodesics are the circles alpha (|x|^2 + 1/c) - 2 <o, x> = 0 (orthogonal to
    the boundary) and the diameters (alpha = 0), so one SVD null vector fits both.
    """
    M = np.column_stack([np.sum(points**2, axis=-1) + 1.0 / c, -2.0 * points])
    alpha, o1, o2 = np.linalg.svd(M, full_matrices=False)[2][-1]
    o = np.array([o1, o2])
    if abs(alpha) < 1e-12 * np.linalg.norm(o):
        return np.zeros(2), o
    center = o / alpha
    dist = np.linalg.norm(center)
    rho = math.sqrt(max(dist**2 - 1.0 / c, 0.0))
    direction = center / dist
    return direction * (dist - rho), direction


def zero_set_deviation(grid, values, dr, dt, p, a, *, c: float) -> float:
    """Max over zero crossings of hyperbolic distance to (p, a) in units of local cell size."""
    pts, sizes = zero_crossings(grid, values, dr, dt)
    if len(pts) == 0:
        return 0.0
    d = gyro.dist_to_hyperplane(pts, p, a, c=c)
    cell = gyro.conformal_factor(pts, c=c)[..., 0] * sizes
    return float(np.max(d / cell))


def check_report(cfg: ContourConfig, tolerance_cells: float = 2.0) -> dict:
    """Check the FC zero set against its predicted hyperplane and the baseline against its best-fit geodesic."""
    params, _ = resolve_params(cfg)
    grid, prev, ours, dr, dt = sample_grid(cfg)
    k = cfg.unit
    a, q = transport_orientation(params.Z[k], params.r[k], c=cfg.c)
    ours_dev = zero_set_deviation(grid, ours, dr, dt, q, a, c=cfg.c)
    pts, _ = zero_crossings(grid, prev, dr, dt)
    if len(pts) >= 3:
        p_fit, a_fit = fit_geodesic(pts, c=cfg.c)
        prev_dev = zero_set_deviation(grid, prev, dr, dt, p_fit, a_fit, c=cfg.c)
    else:
        prev_dev = 0.0
    return {
        "tolerance_cells": tolerance_cells,
        "ours_max_deviation_cells": ours_dev,
        "ours_on_hyperplane": ours_dev < tolerance_cells,
        "prev_max_deviation_cells": prev_dev,
        "prev_on_geodesic": prev_dev < tolerance_cells,
        "config_hash": config_hash(cfg),
    }
