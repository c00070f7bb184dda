"""A small reverse-mode differentiation engine over numpy arrays.

Every operation is recorded on a :class:`Tape` in execution order, so the
tape itself is a topological order of the graph. ``backward`` sweeps it in
reverse and accumulates adjoints.

Example::

    tape = Tape()
    x = tape.leaf([1.0, 2.0])
    y = ad.sum(ad.tanh(x) * x)
    (gx,) = tape.backward(y)
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from ..errors import ContractViolation

__all__ = ["Node", "Tape", "PRIMITIVES", "backward", "constant_value"]


def _unbroadcast(g: np.ndarray, shape: tuple) -> np.ndarray:
    if g.shape == shape:
        return g
    while g.ndim > len(shape):
        g = g.sum(axis=0)
    for i, s in enumerate(shape):
        if s == 1 and g.shape[i] != 1:
            g = g.sum(axis=i, keepdims=True)
    return g


def constant_value(x):
    return x.value if isinstance(x, Node) else np.asarray(x, dtype=np.float64)


class Node:
    """A recorded value together with its adjoint accumulator."""

    __slots__ = ("value", "adjoint", "tape", "is_leaf")
    __array_ufunc__ = None  # make numpy defer to our reflected operators

    def __init__(self, value, tape: "Tape", is_leaf: bool = False):
        self.value = np.asarray(value, dtype=np.float64)
        self.adjoint = None
        self.tape = tape
        self.is_leaf = is_leaf

    @property
    def shape(self):
        return self.value.shape

    @property
    def ndim(self):
        return self.value.ndim

    @property
    def grad(self):
        return np.zeros_like(self.value) if self.adjoint is None else self.adjoint

    def __repr__(self):
        return f"Node({self.value!r})"

    def __add__(self, o):
        return self.tape.record("add", [self, o])

    def __radd__(self, o):
        return self.tape.record("add", [o, self])

    def __sub__(self, o):
        return self.tape.record("sub", [self, o])

    def __rsub__(self, o):
        return self.tape.record("sub", [o, self])

    def __mul__(self, o):
        return self.tape.record("mul", [self, o])

    def __rmul__(self, o):
        return self.tape.record("mul", [o, self])

    def __truediv__(self, o):
        return self.tape.record("div", [self, o])

    def __rtruediv__(self, o):
        return self.tape.record("div", [o, self])

    def __neg__(self):
        return self.tape.record("neg", [self])

    def __matmul__(self, o):
        return self.tape.record("matmul", [self, o])

    def __rmatmul__(self, o):
        return self.tape.record("matmul", [o, self])

    def __getitem__(self, index):
        return self.tape.record("slice", [self], index=index)


# Each primitive maps input values (+ attributes) to (output, vjp), where
# vjp(g) returns one gradient per input.
Primitive = Callable[..., tuple]


def _add(a, b):
    return a + b, lambda g: (_unbroadcast(g, a.shape), _unbroadcast(g, b.shape))


def _sub(a, b):
    return a - b, lambda g: (_unbroadcast(g, a.shape), _unbroadcast(-g, b.shape))


def _mul(a, b):
    return a * b, lambda g: (_unbroadcast(g * b, a.shape), _unbroadcast(g * a, b.shape))


def _div(a, b):
    out = a / b
    return out, lambda g: (_unbroadcast(g / b, a.shape), _unbroadcast(-g * out / b, b.shape))


def _neg(a):
    return -a, lambda g: (-g,)


def _scale(a, k):
    return a * k, lambda g: (g * k,)


def _dot(a, b):
    # inner product over the last axis, keeping it as a singleton
    out = np.sum(a * b, axis=-1, keepdims=True)
    return out, lambda g: (_unbroadcast(g * b, a.shape), _unbroadcast(g * a, b.shape))


def _norm(a):
    n = np.sqrt(np.sum(a * a, axis=-1, keepdims=True))
    unit = np.divide(a, n, out=np.zeros_like(a), where=n > 0)
    return n, lambda g: (g * unit,)


def _sum(a, axis=None, keepdims=False):
    out = np.sum(a, axis=axis, keepdims=keepdims)

    def vjp(g):
        if axis is not None and not keepdims:
            g = np.expand_dims(g, axis)
        return (np.broadcast_to(g, a.shape).copy(),)

    return out, vjp


def _unary(f, df):
    def prim(a):
        out = f(a)
        return out, lambda g: (g * df(a, out),)

    return prim


def _clamp(a, lo=-np.inf, hi=np.inf):
    # boundary points take the interior (pass-through) derivative
    active = (a >= lo) & (a <= hi)
    return np.clip(a, lo, hi), lambda g: (g * active,)


def _concat(*xs, axis=-1):
    out = np.concatenate(xs, axis=axis)
    bounds = np.cumsum([x.shape[axis] for x in xs])[:-1]
    return out, lambda g: tuple(np.split(g, bounds, axis=axis))


def _stack(*xs, axis=0):
    out = np.stack(xs, axis=axis)
    return out, lambda g: tuple(np.moveaxis(g, axis, 0))


def _slice(a, index=None):
    out = a[index]

    def vjp(g):
        full = np.zeros_like(a)
        np.add.at(full, index, g)
        return (full,)

    return out, vjp


def _reshape(a, shape=None):
    return a.reshape(shape), lambda g: (g.reshape(a.shape),)


def _swapaxes(a, axis1=-1, axis2=-2):
    return np.swapaxes(a, axis1, axis2), lambda g: (np.swapaxes(g, axis1, axis2),)


def _matmul(a, b):
    out = a @ b

    def vjp(g):
        ga = g @ np.swapaxes(b, -1, -2) if b.ndim > 1 else np.multiply.outer(g, b)
        gb = np.swapaxes(a, -1, -2) @ g if a.ndim > 1 else np.multiply.outer(a, g)
        return _unbroadcast(ga, a.shape), _unbroadcast(gb, b.shape)

    return out, vjp


def _sech(a):
    s = 1.0 / np.cosh(a)
    return s, lambda g: (-g * s * np.tanh(a),)


PRIMITIVES: dict[str, Primitive] = {
    "add": _add,
    "sub": _sub,
    "mul": _mul,
    "div": _div,
    "dot": _dot,
    "norm": _norm,
    "tanh": _unary(np.tanh, lambda a, o: 1.0 - o * o),
    "artanh": _unary(np.arctanh, lambda a, o: 1.0 / (1.0 - a * a)),
    "sinh": _unary(np.sinh, lambda a, o: np.cosh(a)),
    "asinh": _unary(np.arcsinh, lambda a, o: 1.0 / np.sqrt(1.0 + a * a)),
    "cosh": _unary(np.cosh, lambda a, o: np.sinh(a)),
    "sech": _sech,
    "sqrt": _unary(np.sqrt, lambda a, o: 0.5 / o),
    "exp": _unary(np.exp, lambda a, o: o),
    "log": _unary(np.log, lambda a, o: 1.0 / a),
    "clamp": _clamp,
    "concat": _concat,
    "slice": _slice,
    "scale": _scale,
    # structural helpers beyond the core set
    "neg": _neg,
    "abs": _unary(np.abs, lambda a, o: np.sign(a)),
    "sum": _sum,
    "stack": _stack,
    "reshape": _reshape,
    "swapaxes": _swapaxes,
    "matmul": _matmul,
}


class Tape:
    """Ordered record of operations; one tape per forward/backward pass."""

    def __init__(self):
        self.records: list[tuple] = []
        self.leaves: list[Node] = []

    def leaf(self, value) -> Node:
        node = Node(value, self, is_leaf=True)
        self.leaves.append(node)
        return node

    def record(self, op: str, inputs, **attrs) -> Node:
        prim = PRIMITIVES.get(op)
        if prim is None:
            raise ContractViolation(f"unsupported primitive {op!r}")
        for x in inputs:
            if isinstance(x, Node) and x.tape is not self:
                raise ContractViolation("operands belong to different tapes")
        values = [constant_value(x) for x in inputs]
        out, vjp = prim(*values, **attrs)
        node = Node(out, self)
        self.records.append((op, list(inputs), node, vjp))
        return node

    def backward(self, output: Node) -> list[np.ndarray]:
        """Accumulate d(output)/d(node) into every node; return the leaf gradients."""
        if not isinstance(output, Node) or output.tape is not self:
            raise ContractViolation("output must be a node of this tape")
        if output.value.size != 1:
            raise ContractViolation(f"backward needs a scalar output, got shape {output.shape}")
        output.adjoint = np.ones_like(output.value)
        for _, inputs, node, vjp in reversed(self.records):
            if node.adjoint is None:
                continue
            grads = vjp(node.adjoint)
            for x, g in zip(inputs, grads):
                if not isinstance(x, Node):
                    continue
                g = np.asarray(g, dtype=np.float64)
                x.adjoint = g.copy() if x.adjoint is None else x.adjoint + g
        return [leaf.grad for leaf in self.leaves]


def backward(tape: Tape, output: Node) -> list[np.ndarray]:
    return tape.backward(output)
