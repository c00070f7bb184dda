"""Norm-preserving split and concatenation of gyrovectors."""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Sequence

import numpy as np

from .. import gyro
from ..errors import ContractViolation, DomainError

__all__ = ["beta_coefficient", "beta_split", "beta_concat"]


@lru_cache(maxsize=None)
def beta_coefficient(n: int) -> float:
    """B(n/2, 1/2), evaluated through log-gamma so large n does not overflow."""
    if n < 1:
        raise ContractViolation(f"dimension must be >= 1, got {n}")
    return math.exp(math.lgamma(n / 2) + math.lgamma(0.5) - math.lgamma((n + 1) / 2))


def beta_split(x, sizes: Sequence[int], *, c: float) -> list[np.ndarray]:
    """Split x in B^n into pieces in B^{n_i}, rescaling each tangent piece by
    beta(n_i) / beta(n)."""
    c = gyro.check_curvature(c)
    x = np.asarray(x, dtype=np.float64)
    sizes = [int(s) for s in sizes]
    n = x.shape[-1]
    if any(s < 1 for s in sizes) or sum(sizes) != n:
        raise ContractViolation(f"split sizes {sizes} do not partition dimension {n}")
    v = gyro.logmap0(x, c=c)
    bn = beta_coefficient(n)
    out = []
    start = 0
    for s in sizes:
        piece = v[..., start:start + s] * (beta_coefficient(s) / bn)
        out.append(gyro.expmap0(piece, c=c))
        start += s
    return out


def beta_concat(xs: Sequence, *, c: float) -> np.ndarray:
    """Inverse of :func:`beta_split`."""
    c = gyro.check_curvature(c)
    if len(xs) == 0:
        raise DomainError("nothing to concatenate")
    xs = [np.asarray(x, dtype=np.float64) for x in xs]
    n = sum(x.shape[-1] for x in xs)
    bn = beta_coefficient(n)
    pieces = [gyro.logmap0(x, c=c) * (bn / beta_coefficient(x.shape[-1])) for x in xs]
    return gyro.expmap0(np.concatenate(pieces, axis=-1), c=c)
