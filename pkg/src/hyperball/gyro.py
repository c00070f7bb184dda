r"""Möbius gyrovector algebra on the Poincaré ball :math:`\mathbb{B}^n_c`.

All functions operate on float64 numpy arrays whose last axis holds the
coordinates; leading axes broadcast. The curvature of the ball is ``-c``
with ``c > 0`` passed explicitly as a keyword.

Numerical policy
----------------
* Every function returning a ball point projects it onto the closed ball of
  radius ``(1 - BALL_EPS) / sqrt(c)``.
* ``artanh`` arguments are clipped to ``[-1 + ATANH_EPS, 1 - ATANH_EPS]``.
* ``sinh`` / ``cosh`` arguments are clipped to ``[-MAX_SINH_ARG, MAX_SINH_ARG]``.
* The unit vector of the zero vector is the zero vector.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ContractViolation, DomainError

BALL_EPS = 1e-5
ATANH_EPS = 1e-15
MAX_SINH_ARG = 85.0

__all__ = [
    "BALL_EPS",
    "ATANH_EPS",
    "MAX_SINH_ARG",
    "check_curvature",
    "project",
    "conformal_factor",
    "gamma_factor",
    "mobius_add",
    "mobius_sub",
    "mobius_coadd",
    "mobius_scalar_mul",
    "gyration",
    "expmap",
    "logmap",
    "expmap0",
    "logmap0",
    "distance",
    "addition_norm",
    "dist_to_hyperplane",
    "parallel_transport",
    "riemannian_norm",
]


def check_curvature(c) -> float:
    c = float(c)
    if not (c > 0.0 and math.isfinite(c)):
        raise ContractViolation(f"curvature must be positive and finite, got {c!r}")
    return c


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=np.float64)


def _same_dim(*arrays: np.ndarray) -> None:
    dims = {a.shape[-1] if a.ndim else None for a in arrays}
    if len(dims) != 1 or None in dims:
        shapes = ", ".join(str(a.shape) for a in arrays)
        raise ContractViolation(f"dimension mismatch between operands: {shapes}")


def _sqnorm(x: np.ndarray) -> np.ndarray:
    return np.sum(x * x, axis=-1, keepdims=True)


def _norm(x: np.ndarray) -> np.ndarray:
    return np.sqrt(_sqnorm(x))


def _unit(x: np.ndarray) -> np.ndarray:
    n = _norm(x)
    return np.divide(x, n, out=np.zeros(np.broadcast_shapes(x.shape, n.shape)), where=n > 0)


def artanh(u):
    u = np.clip(u, -1.0 + ATANH_EPS, 1.0 - ATANH_EPS)
    return np.arctanh(u)


def _clip_hyp(u):
    return np.clip(u, -MAX_SINH_ARG, MAX_SINH_ARG)


def project(x, *, c: float) -> np.ndarray:
    """Pull ``x`` back inside the stability radius ``(1 - BALL_EPS)/sqrt(c)``."""
    x = _arr(x)
    max_norm = (1.0 - BALL_EPS) / math.sqrt(c)
    n = _norm(x)
    scale = np.where(n > max_norm, max_norm / np.where(n > 0, n, 1.0), 1.0)
    return x * scale


def conformal_factor(x, *, c: float) -> np.ndarray:
    """lambda_x = 2 / (1 - c|x|^2), with a trailing singleton axis."""
    x = _arr(x)
    return 2.0 / (1.0 - c * _sqnorm(x))


def gamma_factor(x, *, c: float) -> np.ndarray:
    x = _arr(x)
    return 1.0 / np.sqrt(1.0 - c * _sqnorm(x))


def mobius_add(x, y, *, c: float) -> np.ndarray:
    """Möbius addition x ⊕_c y."""
    c = check_curvature(c)
    x, y = _arr(x), _arr(y)
    _same_dim(x, y)
    x2 = _sqnorm(x)
    y2 = _sqnorm(y)
    xy = np.sum(x * y, axis=-1, keepdims=True)
    num = (1.0 + 2.0 * c * xy + c * y2) * x + (1.0 - c * x2) * y
    den = 1.0 + 2.0 * c * xy + c * c * x2 * y2
    return project(num / den, c=c)


def mobius_sub(x, y, *, c: float) -> np.ndarray:
    """x ⊖_c y = x ⊕_c (-y)."""
    return mobius_add(x, -_arr(y), c=c)


def mobius_coadd(x, y, *, c: float) -> np.ndarray:
    """Möbius coaddition x ⊞_c y.

    The arithmetic is arranged symmetrically so that swapping the operands
    gives a bit-identical result.
    """
    c = check_curvature(c)
    x, y = _arr(x), _arr(y)
    _same_dim(x, y)
    x2 = _sqnorm(x)
    y2 = _sqnorm(y)
    num = (1.0 - c * y2) * x + (1.0 - c * x2) * y
    den = 1.0 - (c * c) * (x2 * y2)
    return project(num / den, c=c)


def mobius_scalar_mul(r, x, *, c: float) -> np.ndarray:
    """r ⊗_c x = exp_0(r log_0(x))."""
    c = check_curvature(c)
    x = _arr(x)
    r = _arr(r)
    if r.ndim and r.shape[-1] != 1:
        r = r[..., None]
    sc = math.sqrt(c)
    n = _norm(x)
    out = np.tanh(r * artanh(sc * n)) / sc * _unit(x)
    return project(out, c=c)


def gyration(x, y, z, *, c: float) -> np.ndarray:
    """gyr[x, y] z, valid for any real vector z."""
    c = check_curvature(c)
    x, y, z = _arr(x), _arr(y), _arr(z)
    _same_dim(x, y, z)
    x2 = _sqnorm(x)
    y2 = _sqnorm(y)
    xy = np.sum(x * y, axis=-1, keepdims=True)
    xz = np.sum(x * z, axis=-1, keepdims=True)
    yz = np.sum(y * z, axis=-1, keepdims=True)
    a = c * xz * y2 - yz * (1.0 + 2.0 * c * xy)
    b = c * yz * x2 + xz
    den = 1.0 + 2.0 * c * xy + c * c * x2 * y2
    return z - 2.0 * c * (a * x + b * y) / den


def expmap(x, v, *, c: float) -> np.ndarray:
    """Exponential map at base point x applied to tangent vector v."""
    c = check_curvature(c)
    x, v = _arr(x), _arr(v)
    _same_dim(x, v)
    sc = math.sqrt(c)
    lam = conformal_factor(x, c=c)
    step = np.tanh(sc * lam * _norm(v) / 2.0) / sc * _unit(v)
    return mobius_add(x, step, c=c)


def logmap(x, y, *, c: float) -> np.ndarray:
    """Logarithmic map at base point x; inverse of :func:`expmap`."""
    c = check_curvature(c)
    x, y = _arr(x), _arr(y)
    _same_dim(x, y)
    y = project(y, c=c)
    sc = math.sqrt(c)
    u = mobius_add(-x, y, c=c)
    lam = conformal_factor(x, c=c)
    return 2.0 / (sc * lam) * artanh(sc * _norm(u)) * _unit(u)


def expmap0(v, *, c: float) -> np.ndarray:
    c = check_curvature(c)
    v = _arr(v)
    sc = math.sqrt(c)
    return project(np.tanh(sc * _norm(v)) / sc * _unit(v), c=c)


def logmap0(y, *, c: float) -> np.ndarray:
    c = check_curvature(c)
    y = project(_arr(y), c=c)
    sc = math.sqrt(c)
    return artanh(sc * _norm(y)) / sc * _unit(y)


def addition_norm(x, y, *, c: float) -> np.ndarray:
    """Euclidean norm of x ⊕_c y from the symmetric closed form.

    Returns an array with the trailing coordinate axis removed.
    """
    c = check_curvature(c)
    x, y = _arr(x), _arr(y)
    _same_dim(x, y)
    s = x + y
    x2 = _sqnorm(x)
    y2 = _sqnorm(y)
    xy = np.sum(x * y, axis=-1, keepdims=True)
    den = 1.0 + 2.0 * c * xy + c * c * x2 * y2
    return np.sqrt(_sqnorm(s) / den)[..., 0]


def distance(x, y, *, c: float) -> np.ndarray:
    """Geodesic distance d_c(x, y); trailing axis removed."""
    c = check_curvature(c)
    sc = math.sqrt(c)
    return 2.0 / sc * artanh(sc * addition_norm(-_arr(x), y, c=c))


def riemannian_norm(x, v, *, c: float) -> np.ndarray:
    """||v||_x = lambda_x ||v|| for v tangent at x; trailing axis removed."""
    return (conformal_factor(x, c=c) * _norm(_arr(v)))[..., 0]


def dist_to_hyperplane(x, p, a, *, c: float, signed: bool = False) -> np.ndarray:
    """Distance from x to the Poincaré hyperplane through p orthogonal to a.

    With ``signed=True`` the sign of <-p ⊕ x, a> is attached.
    """
    c = check_curvature(c)
    x, p, a = _arr(x), _arr(p), _arr(a)
    _same_dim(x, p, a)
    a_norm = _norm(a)
    if np.any(a_norm == 0):
        raise DomainError("hyperplane orientation must be non-zero")
    sc = math.sqrt(c)
    w = mobius_add(-p, x, c=c)
    wa = np.sum(w * a, axis=-1, keepdims=True)
    arg = 2.0 * sc * wa / ((1.0 - c * _sqnorm(w)) * a_norm)
    d = np.arcsinh(arg if signed else np.abs(arg)) / sc
    return d[..., 0]


def parallel_transport(x, y, v, *, c: float) -> np.ndarray:
    """Transport v from the tangent space at x to the one at y."""
    c = check_curvature(c)
    x, y, v = _arr(x), _arr(y), _arr(v)
    _same_dim(x, y, v)
    ratio = conformal_factor(x, c=c) / conformal_factor(y, c=c)
    return ratio * gyration(y, -x, v, c=c)
