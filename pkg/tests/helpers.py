"""Random instance generators shared by the test modules."""

import math

import numpy as np


def ball_points(rng, shape, c, max_dist=3.0):
    """Points with uniform direction and geodesic distance from 0 uniform in [0, max_dist]."""
    *lead, n = shape
    d = rng.normal(size=shape)
    d /= np.linalg.norm(d, axis=-1, keepdims=True)
    dist = rng.uniform(0.0, max_dist, size=tuple(lead) + (1,))
    return d * np.tanh(math.sqrt(c) * dist / 2.0) / math.sqrt(c)


def rel_err(a, b, floor=1.0):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), floor)))
