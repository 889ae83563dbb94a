"""Reference ECCs used for comparison: binary Hamming and single-symbol RS."""

from .hamming import HammingCodec
from .rs import ReedSolomonCodec

__all__ = ["HammingCodec", "ReedSolomonCodec"]
