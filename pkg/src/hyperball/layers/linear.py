"""Unidirectional Poincaré MLR and the Poincaré fully-connected layer."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .. import gyro
from ..errors import ContractViolation

__all__ = [
    "LinearParams",
    "transport_orientation",
    "mlr_score",
    "mlr_predict",
    "poincare_fc",
    "softmax",
]


@dataclass
class LinearParams:
    """Orientation vectors ``Z`` (m, n) living in T_0 B^n and scalar biases ``r`` (m,).

    Shared by the MLR, FC and convolutional layers.
    """

    Z: np.ndarray
    r: np.ndarray
    c: float = 1.0

    def __post_init__(self):
        self.Z = np.atleast_2d(np.asarray(self.Z, dtype=np.float64))
        self.r = np.atleast_1d(np.asarray(self.r, dtype=np.float64))
        self.c = gyro.check_curvature(self.c)
        if self.Z.ndim != 2 or self.Z.shape[0] < 1:
            raise ContractViolation(f"Z must have shape (m, n) with m >= 1, got {self.Z.shape}")
        if self.r.shape != (self.Z.shape[0],):
            raise ContractViolation(f"r has shape {self.r.shape}, expected ({self.Z.shape[0]},)")
        if not (np.all(np.isfinite(self.Z)) and np.all(np.isfinite(self.r))):
            raise ContractViolation("layer parameters must be finite")

    @property
    def in_dim(self) -> int:
        return self.Z.shape[1]

    @property
    def out_dim(self) -> int:
        return self.Z.shape[0]


def _check_input(x: np.ndarray, params: LinearParams) -> None:
    if x.shape[-1] != params.in_dim:
        raise ContractViolation(f"input dimension {x.shape[-1]} != layer input {params.in_dim}")


def transport_orientation(z, r, *, c: float):
    """Return ``(a, q)``: the bias point q = exp_0(r ẑ) and z transported to it.

    Equivalent to ``parallel_transport(0, q, z)``, which reduces to
    sech^2(sqrt(c) r) z.
    """
    c = gyro.check_curvature(c)
    z = np.asarray(z, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)[..., None]
    sc = math.sqrt(c)
    q = gyro.expmap0(r * gyro._unit(z), c=c)
    a = z / np.cosh(gyro._clip_hyp(sc * r)) ** 2
    return a, q


def mlr_score(x, params: LinearParams) -> np.ndarray:
    """Class scores v_k(x) of the unidirectional Poincaré MLR, shape (..., m).

    Each score is the signed distance from x to the k-th Poincaré hyperplane
    scaled by the Riemannian norm of its orientation.
    """
    x = np.asarray(x, dtype=np.float64)
    _check_input(x, params)
    c = params.c
    sc = math.sqrt(c)
    z_norm = np.linalg.norm(params.Z, axis=-1)
    z_unit = gyro._unit(params.Z)
    lam = gyro.conformal_factor(x, c=c)
    two_r = gyro._clip_hyp(2.0 * sc * params.r)
    arg = lam * sc * (x @ z_unit.T) * np.cosh(two_r) - (lam - 1.0) * np.sinh(two_r)
    return 2.0 / sc * z_norm * np.arcsinh(arg)


def softmax(v, axis: int = -1) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    e = np.exp(v - np.max(v, axis=axis, keepdims=True))
    return e / np.sum(e, axis=axis, keepdims=True)


def mlr_predict(x, params: LinearParams):
    """Predicted class index (ties go to the lowest index) and probabilities."""
    if params.out_dim < 2:
        raise ContractViolation("classification needs at least two classes")
    probs = softmax(mlr_score(x, params))
    return np.argmax(probs, axis=-1), probs


def poincare_fc(x, params: LinearParams) -> np.ndarray:
    """Poincaré FC layer B^n -> B^m.

    The k-th output coordinate is chosen so that the signed distance from
    the output to the hyperplane {y_k = 0} equals ``mlr_score(x)[k]``.
    """
    c = params.c
    sc = math.sqrt(c)
    v = mlr_score(x, params)
    w = np.sinh(gyro._clip_hyp(sc * v)) / sc
    w2 = np.sum(w * w, axis=-1, keepdims=True)
    return gyro.project(w / (1.0 + np.sqrt(1.0 + c * w2)), c=c)
