"""Response-scoring sidecar speaking the line-delimited JSON wire protocol."""

from .finetune import FineTuneConfig
from .model import HashModel, TinyEncoderConfig, TinyEncoderModel
from .protocol import ProtocolError, frame, parse_frame, round_scores

__all__ = [
    "FineTuneConfig",
    "HashModel",
    "TinyEncoderConfig",
    "TinyEncoderModel",
    "ProtocolError",
    "frame",
    "parse_frame",
    "round_scores",
]
