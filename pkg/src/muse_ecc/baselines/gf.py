"""Log/antilog tables for GF(2^w)."""

from __future__ import annotations

PRIMITIVE_POLYS = {4: 0b10011, 8: 0b100011101}


class GaloisField:
    """GF(2^w) built from a primitive polynomial, with ``alpha == 2``.

    The tables are checked against carry-less multiplication when built.
    """

    def __init__(self, w: int, poly: int | None = None):
        self.w = w
        self.poly = poly if poly is not None else PRIMITIVE_POLYS[w]
        self.size = 1 << w
        self.order = self.size - 1
        self.exp = [0] * (2 * self.order)
        self.log = [0] * self.size
        x = 1
        for i in range(self.order):
            self.exp[i] = self.exp[i + self.order] = x
            self.log[x] = i
            x <<= 1
            if x & self.size:
                x ^= self.poly
        if x != 1 or len(set(self.exp[:self.order])) != self.order:
            raise ValueError(f"polynomial {self.poly:#x} is not primitive for GF(2^{w})")
        for a in (1, 2, self.order, self.order // 2 + 1):
            for b in (1, 3, self.order - 1):
                if self.mul(a, b) != self._clmul_mod(a, b):
                    raise ValueError("log tables disagree with polynomial multiplication")

    def _clmul_mod(self, a: int, b: int) -> int:
        r = 0
        while b:
            if b & 1:
                r ^= a
            b >>= 1
            a <<= 1
            if a & self.size:
                a ^= self.poly
        return r

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def div(self, a: int, b: int) -> int:
        if b == 0:
            raise ZeroDivisionError("division by zero in GF")
        if a == 0:
            return 0
        return self.exp[(self.log[a] - self.log[b]) % self.order]

    def pow_alpha(self, i: int) -> int:
        return self.exp[i % self.order]
