"""Central finite-difference verification of tape gradients."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np

from .tape import Tape


def tape_gradients(f: Callable, point: Sequence) -> tuple[float, list[np.ndarray]]:
    """Evaluate ``f`` on fresh leaves built from ``point``; return (value, grads)."""
    tape = Tape()
    leaves = [tape.leaf(p) for p in point]
    out = f(*leaves)
    grads = tape.backward(out)
    return float(out.value.reshape(())), grads


def _eval(f: Callable, point: Sequence) -> float:
    return float(np.asarray(f(*point)).reshape(()))


def numeric_gradients(f: Callable, point: Sequence, step: float = 1e-5) -> list[np.ndarray]:
    """Central differences of scalar ``f`` at ``point`` (one array per argument)."""
    point = [np.array(p, dtype=np.float64) for p in point]
    out = []
    for p in point:
        g = np.zeros_like(p)
        flat, gflat = p.reshape(-1), g.reshape(-1)
        for j in range(flat.size):
            orig = flat[j]
            flat[j] = orig + step
            hi = _eval(f, point)
            flat[j] = orig - step
            lo = _eval(f, point)
            flat[j] = orig
            gflat[j] = (hi - lo) / (2.0 * step)
        out.append(g)
    return out


def grad_check(f: Callable, point: Sequence, step: float = 1e-5) -> float:
    """Max over coordinates of |analytic - fd| / (|fd| + 1e-8).

    ``f`` must accept either tape nodes or plain arrays, which holds for
    everything built from :mod:`hyperball.autodiff.ops`.
    """
    _, analytic = tape_gradients(f, point)
    numeric = numeric_gradients(f, point, step)
    worst = 0.0
    for a, n in zip(analytic, numeric):
        if a.size:
            worst = max(worst, float(np.max(np.abs(a - n) / (np.abs(n) + 1e-8))))
    return worst
