"""Named codes and a common codec interface for MUSE and the baselines."""

from __future__ import annotations

from functools import lru_cache

from .baselines import HammingCodec, ReedSolomonCodec
from .code import (CodeError, CodeSpec, DecodeResult, ErrorModel, Form, build_elt, decode,
                   encode)
from .search import stride_assignment


class MuseCodec:
    """A :class:`CodeSpec` plus its remainder table, exposed like the baselines.

    Args:
        spec: the code.
        strict: refuse multipliers whose single-symbol remainders collide.
    """

    def __init__(self, spec: CodeSpec, strict: bool = True):
        self.spec = spec
        self.elt = build_elt(spec, strict=strict)
        self.name = spec.name or f"muse{spec.n}{spec.k}"
        self.n, self.k, self.symbol_size = spec.n, spec.k, spec.symbol_size
        self.symbols = [list(sym) for sym in spec.bit_assignment]

    def encode(self, data: int) -> int:
        return int(encode(self.spec, data))

    def decode(self, codeword: int) -> DecodeResult:
        return decode(self.spec, codeword, self.elt)


def _muse(name, n, k, m, s, model=ErrorModel.BIDIRECTIONAL, assignment=(),
          form=Form.NON_SYSTEMATIC, strict=True):
    return lambda: MuseCodec(CodeSpec(n, k, m, s, assignment, model, form, name), strict)


REGISTRY = {
    "muse7264": _muse("muse7264", 72, 64, 243, 1),
    "muse7264sys": _muse("muse7264sys", 72, 64, 243, 1, form=Form.SYSTEMATIC),
    # reference multipliers that collide under a true modulus; kept non-strict
    "muse144133": _muse("muse144133", 144, 133, 2005, 4, strict=False),
    "muse8070": _muse("muse8070", 80, 70, 1005, 4, strict=False),
    "muse8067": _muse("muse8067", 80, 67, 5621, 8, ErrorModel.UNIDIRECTIONAL,
                      stride_assignment(80, 8)),
    # smallest collision-free multipliers for the same geometries
    "muse144132": _muse("muse144132", 144, 132, 2397, 4),
    "muse8069": _muse("muse8069", 80, 69, 1491, 4),
    "hamming7264": lambda: HammingCodec(72, 64, extended=True, name="hamming7264"),
    "hamming7265": lambda: HammingCodec(72, 65, extended=False, name="hamming7265"),
    "hamming7264pos": lambda: HammingCodec(72, 64, extended=True, columns="positional",
                                           name="hamming7264pos"),
    "rs4032": lambda: ReedSolomonCodec(40, 4, "rs4032"),
    "rs8064": lambda: ReedSolomonCodec(80, 8, "rs8064"),
    "rs144128": lambda: ReedSolomonCodec(144, 8, "rs144128"),
}


@lru_cache(maxsize=None)
def get_codec(name: str):
    try:
        return REGISTRY[name]()
    except KeyError:
        raise CodeError(f"unknown code {name!r}; known: {', '.join(sorted(REGISTRY))}") from None
