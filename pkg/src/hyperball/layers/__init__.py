from .attention import ACTIVATIONS, SIMILARITIES, AttentionParams, attention_weights, poincare_attention
from .beta import beta_coefficient, beta_concat, beta_split
from .checkpoint import from_checkpoint, load_checkpoint, save_checkpoint, to_checkpoint
from .conv import ConvParams, poincare_conv, receptive_fields
from .linear import LinearParams, mlr_predict, mlr_score, poincare_fc, softmax, transport_orientation

__all__ = [
    "ACTIVATIONS",
    "SIMILARITIES",
    "AttentionParams",
    "ConvParams",
    "LinearParams",
    "attention_weights",
    "beta_coefficient",
    "beta_concat",
    "beta_split",
    "from_checkpoint",
    "load_checkpoint",
    "mlr_predict",
    "mlr_score",
    "poincare_attention",
    "poincare_conv",
    "poincare_fc",
    "receptive_fields",
    "save_checkpoint",
    "softmax",
    "to_checkpoint",
    "transport_orientation",
]
