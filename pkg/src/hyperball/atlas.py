"""Coordinate conversions between the Poincaré ball, hyperboloid and
Beltrami-Klein models, and the three closed-form weighted midpoints.

Point sets are arrays of shape ``(..., N, n)`` with weights ``(..., N)``;
the midpoint drops the ``N`` axis.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import gyro
from .errors import ContractViolation, DomainError

__all__ = [
    "ball_to_hyperboloid",
    "hyperboloid_to_ball",
    "ball_to_klein",
    "klein_to_ball",
    "lorentz_inner",
    "compensated_sum",
    "mobius_gyromidpoint",
    "einstein_gyromidpoint",
    "lorentzian_centroid",
    "gyrometric_objective",
    "write_midpoint_fixtures",
    "read_midpoint_fixtures",
]


def _arr(x):
    return np.asarray(x, dtype=np.float64)


def lorentz_inner(u, v) -> np.ndarray:
    """<u, v>_L with metric diag(-1, 1, ..., 1); trailing axis removed."""
    u, v = _arr(u), _arr(v)
    return -u[..., 0] * v[..., 0] + np.sum(u[..., 1:] * v[..., 1:], axis=-1)


def ball_to_hyperboloid(b, *, c: float) -> np.ndarray:
    c = gyro.check_curvature(c)
    b = _arr(b)
    b2 = np.sum(b * b, axis=-1, keepdims=True)
    den = 1.0 - c * b2
    z = (1.0 + c * b2) / den / math.sqrt(c)
    k = 2.0 * b / den
    return np.concatenate([z, k], axis=-1)


def hyperboloid_to_ball(h, *, c: float) -> np.ndarray:
    c = gyro.check_curvature(c)
    h = _arr(h)
    z, k = h[..., :1], h[..., 1:]
    return gyro.project(k / (1.0 + math.sqrt(c) * z), c=c)


def ball_to_klein(b, *, c: float) -> np.ndarray:
    c = gyro.check_curvature(c)
    b = _arr(b)
    b2 = np.sum(b * b, axis=-1, keepdims=True)
    return 2.0 * b / (1.0 + c * b2)


def klein_to_ball(n, *, c: float) -> np.ndarray:
    c = gyro.check_curvature(c)
    n = _arr(n)
    n2 = np.sum(n * n, axis=-1, keepdims=True)
    return gyro.project(n / (1.0 + np.sqrt(np.maximum(1.0 - c * n2, 0.0))), c=c)


def compensated_sum(terms, axis: int) -> np.ndarray:
    """Sum along ``axis`` in index order with Neumaier compensation."""
    terms = np.moveaxis(_arr(terms), axis, 0)
    total = np.zeros(terms.shape[1:])
    comp = np.zeros(terms.shape[1:])
    for t in terms:
        s = total + t
        big = np.abs(total) >= np.abs(t)
        comp += np.where(big, (total - s) + t, (t - s) + total)
        total = s
    return total + comp


def _half(u: np.ndarray, c: float) -> np.ndarray:
    # (1/2) ⊗_c u in closed form
    u2 = np.sum(u * u, axis=-1, keepdims=True)
    return u / (1.0 + np.sqrt(np.maximum(1.0 - c * u2, 0.0)))


def _check_set(points: np.ndarray, weights: np.ndarray) -> None:
    if points.ndim < 2:
        raise ContractViolation("points must have shape (..., N, n)")
    if weights.shape[-1] != points.shape[-2]:
        raise ContractViolation(
            f"{points.shape[-2]} points but {weights.shape[-1]} weights"
        )


def mobius_gyromidpoint(points, weights, *, c: float) -> np.ndarray:
    """Weighted Möbius gyromidpoint with real (possibly negative) weights.

    A negative weight acts as the additive inverse of its point. Positive
    rescaling of the weights leaves the result unchanged.
    """
    c = gyro.check_curvature(c)
    points, weights = _arr(points), _arr(weights)
    _check_set(points, weights)
    lam = gyro.conformal_factor(points, c=c)[..., 0]
    num = compensated_sum((weights * lam)[..., None] * points, axis=-2)
    den = compensated_sum(np.abs(weights) * (lam - 1.0), axis=-1)
    if np.any(den <= 0):
        raise DomainError("midpoint weights are all zero")
    return gyro.project(_half(num / den[..., None], c), c=c)


def _check_nonnegative(weights: np.ndarray) -> None:
    if np.any(weights < 0):
        raise DomainError("negative weights are only defined for the Möbius gyromidpoint")


def einstein_gyromidpoint(points, weights, *, c: float) -> np.ndarray:
    """Einstein gyromidpoint in Klein coordinates (non-negative weights)."""
    c = gyro.check_curvature(c)
    points, weights = _arr(points), _arr(weights)
    _check_set(points, weights)
    _check_nonnegative(weights)
    gam = 1.0 / np.sqrt(1.0 - c * np.sum(points * points, axis=-1))
    den = compensated_sum(weights * gam, axis=-1)
    if np.any(den <= 0):
        raise DomainError("midpoint weights are all zero")
    num = compensated_sum((weights * gam)[..., None] * points, axis=-2)
    return num / den[..., None]


def lorentzian_centroid(points, weights, *, c: float) -> np.ndarray:
    """Minimiser of the weighted squared Lorentzian distance on the hyperboloid."""
    c = gyro.check_curvature(c)
    points, weights = _arr(points), _arr(weights)
    _check_set(points, weights)
    _check_nonnegative(weights)
    if np.all(weights == 0, axis=-1).any():
        raise DomainError("midpoint weights are all zero")
    h = compensated_sum(weights[..., None] * points, axis=-2)
    sq = -lorentz_inner(h, h)
    if np.any(sq <= 0) or np.any(h[..., 0] <= 0):
        raise DomainError("weighted sum is not time-like")
    return h / (math.sqrt(c) * np.sqrt(sq))[..., None]


def gyrometric_objective(points, weights, candidate, *, c: float) -> np.ndarray:
    """sum_i w_i * lambda(-b ⊕ b_i) * |-b ⊕ b_i|^2 for candidate b."""
    c = gyro.check_curvature(c)
    points, weights = _arr(points), _arr(weights)
    _check_set(points, weights)
    candidate = _arr(candidate)[..., None, :]
    u = gyro.mobius_add(-candidate, points, c=c)
    u2 = np.sum(u * u, axis=-1)
    lam = 2.0 / (1.0 - c * u2)
    return compensated_sum(weights * lam * u2, axis=-1)


def write_midpoint_fixtures(path, records) -> None:
    """Write conformance records ``{c, points, weights, expected_midpoint}``."""
    out = []
    for rec in records:
        out.append(
            {
                "c": float(rec["c"]),
                "points": _arr(rec["points"]).tolist(),
                "weights": _arr(rec["weights"]).tolist(),
                "expected_midpoint": _arr(rec["expected_midpoint"]).tolist(),
            }
        )
    Path(path).write_text(json.dumps(out, indent=1))


def read_midpoint_fixtures(path) -> list[dict]:
    records = json.loads(Path(path).read_text())
    for rec in records:
        missing = {"c", "points", "weights", "expected_midpoint"} - rec.keys()
        if missing:
            raise ContractViolation(f"fixture record missing {sorted(missing)}")
        rec["points"] = _arr(rec["points"])
        rec["weights"] = _arr(rec["weights"])
        rec["expected_midpoint"] = _arr(rec["expected_midpoint"])
    return records
