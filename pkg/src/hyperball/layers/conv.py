"""Arbitrary-dimensional Poincaré convolution."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .. import gyro
from ..errors import ContractViolation
from .beta import beta_coefficient
from .linear import LinearParams, poincare_fc

__all__ = ["ConvParams", "receptive_fields", "poincare_conv"]


def _tuple(v, d: int, name: str) -> tuple[int, ...]:
    if np.isscalar(v):
        v = (int(v),) * d
    v = tuple(int(i) for i in v)
    if len(v) != d:
        raise ContractViolation(f"{name} needs {d} entries, got {v}")
    return v


@dataclass
class ConvParams:
    """Kernel geometry plus the inner FC parameters over n * K inputs.

    ``padding`` pads every spatial side with the ball origin.
    """

    kernel_size: tuple[int, ...]
    in_channels: int
    out_channels: int
    linear: LinearParams
    dilation: tuple[int, ...] = field(default=None)
    padding: tuple[int, ...] = field(default=None)
    stride: tuple[int, ...] = field(default=None)

    def __post_init__(self):
        d = len(self.kernel_size)
        self.kernel_size = _tuple(self.kernel_size, d, "kernel_size")
        self.dilation = _tuple(1 if self.dilation is None else self.dilation, d, "dilation")
        self.padding = _tuple(0 if self.padding is None else self.padding, d, "padding")
        self.stride = _tuple(1 if self.stride is None else self.stride, d, "stride")
        if min(self.kernel_size + self.dilation + self.stride) < 1 or min(self.padding) < 0:
            raise ContractViolation("kernel sizes, dilations and strides must be positive")
        if self.linear.in_dim != self.in_channels * self.kernel_volume:
            raise ContractViolation(
                f"inner layer expects {self.linear.in_dim} inputs, kernel gives "
                f"{self.in_channels} * {self.kernel_volume}"
            )
        if self.linear.out_dim != self.out_channels:
            raise ContractViolation("inner layer output size != out_channels")

    @property
    def kernel_volume(self) -> int:
        return int(np.prod(self.kernel_size))

    @property
    def c(self) -> float:
        return self.linear.c


def receptive_fields(v: np.ndarray, params: ConvParams) -> np.ndarray:
    """Gather receptive fields from a (..., *spatial, n) array.

    Returns (..., *out_spatial, K * n) with kernel positions in row-major
    order and channels innermost. Padding uses zeros.
    """
    d = len(params.kernel_size)
    if v.ndim < d + 1:
        raise ContractViolation(f"feature map needs {d} spatial axes plus channels")
    if v.shape[-1] != params.in_channels:
        raise ContractViolation(f"{v.shape[-1]} channels, layer expects {params.in_channels}")
    spatial_axes = tuple(range(v.ndim - 1 - d, v.ndim - 1))
    pad = [(0, 0)] * v.ndim
    for ax, p in zip(spatial_axes, params.padding):
        pad[ax] = (p, p)
    v = np.pad(v, pad)
    span = tuple((k - 1) * dl + 1 for k, dl in zip(params.kernel_size, params.dilation))
    for ax, s in zip(spatial_axes, span):
        if v.shape[ax] < s:
            raise ContractViolation(
                f"kernel extent {span} larger than padded input {v.shape[-1 - d:-1]}"
            )
    win = sliding_window_view(v, span, axis=spatial_axes)
    # win: (..., *out_spatial, n, *span)
    index = [slice(None)] * (win.ndim - d)
    for ax, st in zip(range(v.ndim - 1 - d, v.ndim - 1), params.stride):
        index[ax] = slice(None, None, st)
    index += [slice(None, None, dl) for dl in params.dilation]
    win = win[tuple(index)]
    win = np.moveaxis(win, win.ndim - d - 1, -1)
    out_shape = win.shape[: win.ndim - d - 1]
    return win.reshape(out_shape + (params.kernel_volume * params.in_channels,))


def poincare_conv(feature_map, params: ConvParams) -> np.ndarray:
    """Per output pixel: beta-concatenate the receptive field, then apply the FC layer."""
    c = params.c
    fm = np.asarray(feature_map, dtype=np.float64)
    v = gyro.logmap0(fm, c=c)
    fields = receptive_fields(v, params)
    n = params.in_channels
    scale = beta_coefficient(n * params.kernel_volume) / beta_coefficient(n)
    x = gyro.expmap0(fields * scale, c=c)
    return poincare_fc(x, params.linear)
