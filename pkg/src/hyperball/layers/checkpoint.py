"""JSON checkpoints for layer parameters (and optional optimizer state).

Floats are written with Python's shortest round-trip repr, which never needs
more than 17 significant digits and reads back bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import ContractViolation
from .attention import AttentionParams
from .conv import ConvParams
from .linear import LinearParams

__all__ = ["to_checkpoint", "from_checkpoint", "save_checkpoint", "load_checkpoint"]

LINEAR_TYPES = ("mlr", "fc")


def _linear_dict(layer_type: str, p: LinearParams) -> dict:
    return {
        "layer_type": layer_type,
        "c": p.c,
        "Z": [float(v) for v in p.Z.ravel()],
        "r": [float(v) for v in p.r],
        "shape": {"out_dim": p.out_dim, "in_dim": p.in_dim},
    }


def _linear_from(d: dict) -> LinearParams:
    shape = (d["shape"]["out_dim"], d["shape"]["in_dim"])
    return LinearParams(np.array(d["Z"], dtype=np.float64).reshape(shape), np.array(d["r"]), d["c"])


def to_checkpoint(layer_type: str, params, optimizer_state=None) -> dict:
    if layer_type in LINEAR_TYPES:
        out = _linear_dict(layer_type, params)
    elif layer_type == "conv":
        out = _linear_dict("conv", params.linear)
        out["shape"].update(
            kernel_size=list(params.kernel_size),
            dilation=list(params.dilation),
            padding=list(params.padding),
            stride=list(params.stride),
            in_channels=params.in_channels,
            out_channels=params.out_channels,
        )
    elif layer_type == "attention":
        out = {
            "layer_type": "attention",
            "c": params.c,
            "shape": {"heads": params.heads, "head_dim": params.head_dim},
            "similarity": params.similarity,
            "activation": params.activation,
            "tau": float(params.tau),
            "gamma": float(params.gamma),
        }
        for name in ("query", "key", "value"):
            out[name] = _linear_dict("fc", getattr(params, name))
    else:
        raise ContractViolation(f"unknown layer type {layer_type!r}")
    if optimizer_state is not None:
        out["optimizer"] = optimizer_state
    return out


def from_checkpoint(d: dict):
    """Return ``(layer_type, params)``."""
    kind = d.get("layer_type")
    if kind in LINEAR_TYPES:
        return kind, _linear_from(d)
    if kind == "conv":
        s = d["shape"]
        return kind, ConvParams(
            kernel_size=tuple(s["kernel_size"]),
            in_channels=s["in_channels"],
            out_channels=s["out_channels"],
            linear=_linear_from(d),
            dilation=tuple(s["dilation"]),
            padding=tuple(s["padding"]),
            stride=tuple(s["stride"]),
        )
    if kind == "attention":
        return kind, AttentionParams(
            heads=d["shape"]["heads"],
            head_dim=d["shape"]["head_dim"],
            query=_linear_from(d["query"]),
            key=_linear_from(d["key"]),
            value=_linear_from(d["value"]),
            similarity=d["similarity"],
            activation=d["activation"],
            tau=d["tau"],
            gamma=d["gamma"],
        )
    raise ContractViolation(f"unknown layer type {kind!r}")


def save_checkpoint(path, layer_type: str, params, optimizer_state=None) -> None:
    Path(path).write_text(json.dumps(to_checkpoint(layer_type, params, optimizer_state)))


def load_checkpoint(path):
    """Return ``(layer_type, params, optimizer_state_or_None)``."""
    d = json.loads(Path(path).read_text())
    kind, params = from_checkpoint(d)
    return kind, params, d.get("optimizer")
