"""Two-check-symbol Reed-Solomon codes correcting one symbol."""

from __future__ import annotations

from ..code import CodeError, DecodeResult, Status, pattern_from_change
from .gf import GaloisField


class ReedSolomonCodec:
    """Single-symbol-correcting RS code with syndromes ``sum c_i`` and ``sum c_i alpha^i``.

    Symbol ``i`` occupies bits ``i*w .. i*w+w-1``; symbols 0 and 1 are checks
    and the data fills the rest.
    """

    def __init__(self, n: int, w: int, name: str = ""):
        if n % w:
            raise CodeError("symbol width must divide the code length")
        self.gf = GaloisField(w)
        self.n, self.symbol_size = n, w
        self.n_sym = n // w
        if self.n_sym > self.gf.order:
            raise CodeError("code longer than the field allows")
        self.k = n - 2 * w
        self.name = name or f"rs{n}{self.k}"
        self.symbols = [list(range(i * w, (i + 1) * w)) for i in range(self.n_sym)]
        self._mask = (1 << w) - 1
        self._inv_1_alpha = self.gf.div(1, 1 ^ self.gf.pow_alpha(1))

    def _split(self, word: int) -> list[int]:
        w = self.symbol_size
        return [(word >> (i * w)) & self._mask for i in range(self.n_sym)]

    def _syndromes(self, syms, start: int = 0) -> tuple[int, int]:
        s0 = s1 = 0
        for i in range(start, self.n_sym):
            s0 ^= syms[i]
            s1 ^= self.gf.mul(syms[i], self.gf.pow_alpha(i))
        return s0, s1

    def encode(self, data: int) -> int:
        if data < 0 or data >> self.k:
            raise CodeError(f"data wider than {self.k} bits")
        word = data << (2 * self.symbol_size)
        p0, p1 = self._syndromes(self._split(word), 2)
        # c0 + c1 = p0 and c0 + alpha*c1 = p1
        c1 = self.gf.mul(p0 ^ p1, self._inv_1_alpha)
        c0 = p0 ^ c1
        return word | c0 | c1 << self.symbol_size

    def decode(self, codeword: int) -> DecodeResult:
        if codeword < 0 or codeword >> self.n:
            raise CodeError(f"codeword wider than {self.n} bits")
        w = self.symbol_size
        syms = self._split(codeword)
        s0, s1 = self._syndromes(syms)
        tag = s0 << w | s1
        data = codeword >> (2 * w)
        if s0 == 0 and s1 == 0:
            return DecodeResult(data, Status.CLEAN, 0, codeword=codeword)
        if s0 == 0 or s1 == 0:
            return DecodeResult(data, Status.DETECTED, tag)
        loc = (self.gf.log[s1] - self.gf.log[s0]) % self.gf.order
        if loc >= self.n_sym:
            return DecodeResult(data, Status.DETECTED, tag)
        fixed = codeword ^ (s0 << (loc * w))
        return DecodeResult(fixed >> (2 * w), Status.CORRECTED, tag,
                            pattern_from_change(fixed, codeword), fixed, table_hit=True)
