"""Function-style access to the tape primitives.

Each wrapper records on the tape of its first :class:`Node` argument. With no
node among the arguments it just evaluates the forward value with numpy.
"""

from __future__ import annotations

import numpy as np

from .tape import PRIMITIVES, Node


def _tape_of(args):
    for a in args:
        if isinstance(a, Node):
            return a.tape
    return None


def apply(op: str, *inputs, **attrs):
    tape = _tape_of(inputs)
    if tape is None:
        vals = [np.asarray(x, dtype=np.float64) for x in inputs]
        return PRIMITIVES[op](*vals, **attrs)[0]
    return tape.record(op, list(inputs), **attrs)


def dot(a, b):
    return apply("dot", a, b)


def norm(a):
    return apply("norm", a)


def tanh(a):
    return apply("tanh", a)


def artanh(a):
    return apply("artanh", a)


def sinh(a):
    return apply("sinh", a)


def asinh(a):
    return apply("asinh", a)


def cosh(a):
    return apply("cosh", a)


def sech(a):
    return apply("sech", a)


def sqrt(a):
    return apply("sqrt", a)


def exp(a):
    return apply("exp", a)


def log(a):
    return apply("log", a)


def clamp(a, lo=-np.inf, hi=np.inf):
    return apply("clamp", a, lo=lo, hi=hi)


def concat(xs, axis=-1):
    return apply("concat", *xs, axis=axis)


def stack(xs, axis=0):
    return apply("stack", *xs, axis=axis)


def take(a, index):
    return apply("slice", a, index=index)


def scale(a, k: float):
    return apply("scale", a, k=float(k))


def absolute(a):
    return apply("abs", a)


def sum(a, axis=None, keepdims=False):  # noqa: A001 - mirrors numpy
    return apply("sum", a, axis=axis, keepdims=keepdims)


def reshape(a, shape):
    return apply("reshape", a, shape=tuple(shape))


def swapaxes(a, axis1=-1, axis2=-2):
    return apply("swapaxes", a, axis1=axis1, axis2=axis2)


def matmul(a, b):
    return apply("matmul", a, b)


def value(a) -> np.ndarray:
    return a.value if isinstance(a, Node) else np.asarray(a, dtype=np.float64)


def sigmoid(a):
    return 1.0 / (1.0 + exp(-a))


def logsumexp(a, axis=-1):
    # the shift is a constant: its gradient contributions cancel exactly
    shift = np.max(value(a), axis=axis, keepdims=True)
    return log(sum(exp(a - shift), axis=axis, keepdims=True)) + shift
