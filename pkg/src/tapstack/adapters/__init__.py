"""Uniform adapter layer over concrete protocols (TCP, UDP, MSGMUX, and
their simulated counterparts)."""

from tapstack.adapters.base import (
    FeatureSet,
    FEATURE_MATRIX,
    ProtocolId,
    PROTOCOL_RANK,
    features,
    supports_dropping,
)

__all__ = [
    "FeatureSet",
    "FEATURE_MATRIX",
    "ProtocolId",
    "PROTOCOL_RANK",
    "features",
    "supports_dropping",
]
