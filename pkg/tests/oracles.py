"""Independent reference formulas evaluated in high precision with mpmath.

Nothing here imports the package; these are written straight from the
closed forms and serve as ground truth for fixtures and spot checks.
"""

import mpmath as mp

mp.mp.dps = 50


def _vec(x):
    return [mp.mpf(float(v)) for v in x]


def _dot(a, b):
    return mp.fsum(x * y for x, y in zip(a, b))


def mobius_add(x, y, c):
    x, y, c = _vec(x), _vec(y), mp.mpf(c)
    xy, x2, y2 = _dot(x, y), _dot(x, x), _dot(y, y)
    den = 1 + 2 * c * xy + c * c * x2 * y2
    return [((1 + 2 * c * xy + c * y2) * a + (1 - c * x2) * b) / den for a, b in zip(x, y)]


def distance(x, y, c):
    c = mp.mpf(c)
    u = mobius_add([-v for v in x], y, c)
    return 2 / mp.sqrt(c) * mp.atanh(mp.sqrt(c) * mp.sqrt(_dot(u, u)))


def gyromidpoint(points, weights, c):
    """Möbius gyromidpoint: half-scaling of the lambda-weighted average."""
    c = mp.mpf(c)
    pts = [_vec(p) for p in points]
    ws = [mp.mpf(float(w)) for w in weights]
    lams = [2 / (1 - c * _dot(p, p)) for p in pts]
    den = mp.fsum(abs(w) * (lam - 1) for w, lam in zip(ws, lams))
    n = len(pts[0])
    u = [mp.fsum(w * lam * p[i] for w, lam, p in zip(ws, lams, pts)) / den for i in range(n)]
    # (1/2) ⊗ u via tanh(artanh(s)/2) = s / (1 + sqrt(1 - s^2))
    s = mp.sqrt(c * _dot(u, u))
    if s == 0:
        return [mp.mpf(0)] * n
    scale = mp.tanh(mp.atanh(s) / 2) / s
    return [scale * v for v in u]


def einstein_midpoint_via_klein(points, weights, c):
    """Same midpoint computed through the Klein model, for cross-checking the oracle."""
    c = mp.mpf(c)
    pts = [_vec(p) for p in points]
    ws = [mp.mpf(float(w)) for w in weights]
    kl = [[2 * v / (1 + c * _dot(p, p)) for v in p] for p in pts]
    gam = [1 / mp.sqrt(1 - c * _dot(k, k)) for k in kl]
    den = mp.fsum(w * g for w, g in zip(ws, gam))
    n = len(pts[0])
    m = [mp.fsum(w * g * k[i] for w, g, k in zip(ws, gam, kl)) / den for i in range(n)]
    r = 1 + mp.sqrt(1 - c * _dot(m, m))
    return [v / r for v in m]


def to_floats(v):
    return [float(x) for x in v]
