"""Wide integer helpers and division by an invariant odd constant.

Codewords of the practical codes are up to 160 bits wide and the
reciprocal constants are about as wide, so products need up to 320 bits.
Python integers are unbounded; :class:`WideUint` and :class:`WideInt` add
the fixed-width overflow discipline on top of them.
"""

from __future__ import annotations

from dataclasses import dataclass

WIDTH = 320


class WideUint(int):
    """Unsigned integer confined to ``WIDTH`` bits.

    Arithmetic between wide values is exact; a result that does not fit
    raises :class:`OverflowError` instead of wrapping.
    """

    __slots__ = ()

    def __new__(cls, value=0):
        value = int(value)
        if value < 0 or value >> WIDTH:
            raise OverflowError(f"value does not fit in {WIDTH} unsigned bits")
        return super().__new__(cls, value)

    def __add__(self, other):
        return type(self)(int(self) + int(other))

    __radd__ = __add__

    def __sub__(self, other):
        return type(self)(int(self) - int(other))

    def __rsub__(self, other):
        return type(self)(int(other) - int(self))

    def __mul__(self, other):
        return type(self)(int(self) * int(other))

    __rmul__ = __mul__

    def __lshift__(self, bits):
        return type(self)(int(self) << int(bits))

    def __rshift__(self, bits):
        return type(self)(int(self) >> int(bits))

    def __divmod__(self, other):
        q, r = schoolbook_divmod(int(self), int(other))
        return type(self)(q), type(self)(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __repr__(self):
        return f"{type(self).__name__}({int(self)})"


class WideInt(int):
    """Signed two's-complement style integer confined to ``WIDTH`` bits."""

    __slots__ = ()

    def __new__(cls, value=0):
        value = int(value)
        if not -(1 << (WIDTH - 1)) <= value < (1 << (WIDTH - 1)):
            raise OverflowError(f"value does not fit in {WIDTH} signed bits")
        return super().__new__(cls, value)

    def __add__(self, other):
        return type(self)(int(self) + int(other))

    __radd__ = __add__

    def __sub__(self, other):
        return type(self)(int(self) - int(other))

    def __rsub__(self, other):
        return type(self)(int(other) - int(self))

    def __mul__(self, other):
        return type(self)(int(self) * int(other))

    __rmul__ = __mul__

    def __neg__(self):
        return type(self)(-int(self))

    def __repr__(self):
        return f"{type(self).__name__}({int(self)})"


def schoolbook_divmod(a: int, b: int) -> tuple[int, int]:
    """Binary restoring long division; the reference oracle for the fast paths."""
    if b <= 0:
        raise ZeroDivisionError("divisor must be positive")
    if a < 0:
        raise ValueError("dividend must be non-negative")
    q = 0
    r = 0
    for i in range(a.bit_length() - 1, -1, -1):
        r = (r << 1) | ((a >> i) & 1)
        q <<= 1
        if r >= b:
            r -= b
            q |= 1
    return q, r


class InvalidDivisorError(ValueError):
    pass


@dataclass(frozen=True)
class MagicConstants:
    """Reciprocal of an odd divisor scaled by ``2**shift``.

    ``inverse == ceil(2**shift / divisor)`` and, for every dividend of at most
    ``max_dividend_bits`` bits, ``(c * inverse) >> shift == c // divisor``.
    """

    divisor: int
    inverse: int
    shift: int
    max_dividend_bits: int

    @property
    def excess(self) -> int:
        # inverse * m overshoots 2**shift by this much, 0 <= excess < m
        return self.inverse * self.divisor - (1 << self.shift)


def _quotient_exact(m: int, shift: int, bits: int) -> bool:
    # floor(c*inv / 2^shift) == floor(c/m)  <=>  c*e < (m - c mod m) * 2^shift;
    # per residue class the largest dividend is the binding one.
    inv = -(-(1 << shift) // m)
    e = inv * m - (1 << shift)
    top = (1 << bits) - 1
    limit = 1 << shift
    for r in range(m):
        c = top - ((top - r) % m)
        if c < 0:
            continue
        if c * e >= (m - r) * limit:
            return False
    return True


def _remainder_exact(m: int, shift: int, bits: int) -> bool:
    # low bits times m, shifted, equals c mod m  <=>  c*e < 2^shift for all c
    inv = -(-(1 << shift) // m)
    e = inv * m - (1 << shift)
    return ((1 << bits) - 1) * e < (1 << shift)


def derive_magic(m: int, max_dividend_bits: int) -> MagicConstants:
    """Smallest (inverse, shift) pair dividing every ``max_dividend_bits`` value by ``m``.

    The shift is minimal subject to both the quotient identity and the
    low-bits remainder identity used by :func:`fast_mod`, so one constant
    serves both operations.

    Raises:
        InvalidDivisorError: ``m`` even or below 3.
        ValueError: dividend width outside 1..160.
    """
    if m < 3 or m % 2 == 0:
        raise InvalidDivisorError(f"divisor must be odd and >= 3, got {m}")
    if not 1 <= max_dividend_bits <= 160:
        raise ValueError("max_dividend_bits must be in 1..160")
    shift = max(1, (m - 1).bit_length())
    while not (_remainder_exact(m, shift, max_dividend_bits)
               and _quotient_exact(m, shift, max_dividend_bits)):
        shift += 1
    return MagicConstants(m, -(-(1 << shift) // m), shift, max_dividend_bits)


def constants_hold(magic: MagicConstants, bits: int | None = None) -> bool:
    """Whether ``magic`` divides (and reduces) every dividend of ``bits`` bits exactly."""
    bits = magic.max_dividend_bits if bits is None else bits
    m, shift = magic.divisor, magic.shift
    if magic.inverse != -(-(1 << shift) // m):
        return False
    return _quotient_exact(m, shift, bits) and _remainder_exact(m, shift, bits)


def _check_width(c: int, magic: MagicConstants) -> None:
    if c < 0 or c.bit_length() > magic.max_dividend_bits:
        raise ValueError(
            f"dividend has {c.bit_length()} bits, constants cover {magic.max_dividend_bits}")


def fast_div(c: int, magic: MagicConstants) -> WideUint:
    _check_width(c, magic)
    return WideUint((WideUint(c) * magic.inverse) >> magic.shift)


def fast_mod(c: int, magic: MagicConstants) -> WideUint:
    """Remainder from the bits the quotient shift discards, times the divisor."""
    _check_width(c, magic)
    product = WideUint(c) * magic.inverse
    low = int(product) & ((1 << magic.shift) - 1)
    return WideUint((low * magic.divisor) >> magic.shift)


def naive_mod(c: int, magic: MagicConstants) -> WideUint:
    """``c - m * floor(c / m)`` with the quotient taken from :func:`fast_div`."""
    return WideUint(c - magic.divisor * int(fast_div(c, magic)))
