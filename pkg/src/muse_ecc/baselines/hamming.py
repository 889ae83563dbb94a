"""Binary Hamming codes: (72,64) SEC-DED and (72,65) SEC."""

from __future__ import annotations

from itertools import combinations

from ..code import CodeError, DecodeResult, Status, pattern_from_change


def _weighted_columns(r: int, count: int, min_weight: int) -> list[int]:
    # lowest-weight r-bit vectors first, ascending value within a weight
    cols = []
    for w in range(min_weight, r + 1):
        for bits in combinations(range(r), w):
            cols.append(sum(1 << b for b in bits))
    cols.sort(key=lambda c: (bin(c).count("1"), c))
    if len(cols) < count:
        raise CodeError("not enough distinct columns")
    return cols[:count]


class HammingCodec:
    """Hamming code over ``n`` bits with ``r`` inner check bits.

    Codeword layout: data in bits ``0..k-1``, inner check bits next, and, with
    ``extended=True``, an overall parity bit on top. Inner check bits own unit
    columns of H. Data columns are either the lowest-weight vectors of weight
    3 and up (``columns="balanced"``, SEC-DED), weight 2 and up (SEC), or the
    non-power-of-two position numbers (``columns="positional"``).

    Args:
        n: total codeword bits.
        k: data bits.
        extended: add an overall parity bit (SEC-DED).
        columns: "balanced" or "positional".
    """

    symbol_size = 1

    def __init__(self, n: int = 72, k: int = 64, extended: bool = True,
                 columns: str = "balanced", name: str = ""):
        self.n, self.k, self.extended = n, k, extended
        self.r = n - k - (1 if extended else 0)
        if self.r < 2:
            raise CodeError("too few check bits")
        if columns == "balanced":
            data_cols = _weighted_columns(self.r, k, 3 if extended else 2)
        elif columns == "positional":
            data_cols = [p for p in range(3, 1 << self.r) if p & (p - 1)][:k]
            if len(data_cols) < k:
                raise CodeError("not enough positional columns")
        else:
            raise CodeError(f"unknown column scheme {columns!r}")
        self.columns = data_cols + [1 << i for i in range(self.r)]
        self.column_index = {c: i for i, c in enumerate(self.columns)}
        self.name = name or f"hamming{n}{k}"
        self.symbols = [[i] for i in range(n)]
        # syndrome contribution of every byte value at every byte offset
        cols = self.columns
        self._byte_tables = []
        for base in range(0, len(cols), 8):
            table = [0] * 256
            for v in range(1, 256):
                low = v & -v
                i = base + low.bit_length() - 1
                table[v] = table[v ^ low] ^ (cols[i] if i < len(cols) else 0)
            self._byte_tables.append(table)

    def _syndrome(self, word: int) -> int:
        s = 0
        w = word & ((1 << (self.k + self.r)) - 1)
        for table in self._byte_tables:
            s ^= table[w & 0xFF]
            w >>= 8
        return s

    def encode(self, data: int) -> int:
        if data < 0 or data >> self.k:
            raise CodeError(f"data wider than {self.k} bits")
        word = data | self._syndrome(data) << self.k
        if self.extended:
            word |= (bin(word).count("1") & 1) << (self.n - 1)
        return word

    def decode(self, codeword: int) -> DecodeResult:
        if codeword < 0 or codeword >> self.n:
            raise CodeError(f"codeword wider than {self.n} bits")
        syn = self._syndrome(codeword)
        parity = bin(codeword).count("1") & 1 if self.extended else 1
        data_mask = (1 << self.k) - 1
        tag = syn << 1 | (parity if self.extended else 0)
        if syn == 0 and (not self.extended or parity == 0):
            return DecodeResult(codeword & data_mask, Status.CLEAN, 0, codeword=codeword)
        if self.extended and parity == 0:
            return DecodeResult(codeword & data_mask, Status.DETECTED, tag)
        if syn == 0:
            bit = self.n - 1
        elif syn in self.column_index:
            bit = self.column_index[syn]
        else:
            return DecodeResult(codeword & data_mask, Status.DETECTED, tag)
        fixed = codeword ^ (1 << bit)
        return DecodeResult(fixed & data_mask, Status.CORRECTED, tag,
                            pattern_from_change(fixed, codeword), fixed, table_hit=True)
