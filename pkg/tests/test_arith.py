import random

import pytest
from hypothesis import given, settings, strategies as st

from muse_ecc.arith import (MagicConstants, WideInt, WideUint, InvalidDivisorError,
                            constants_hold, derive_magic, fast_div, fast_mod, naive_mod,
                            schoolbook_divmod)

TABLE_ROWS = [
    (243, 80, 9950006745799417075771, 81),
    (2005, 144, 11389507772217136207946421701342604579612941, 154),
    (1005, 80, 76986320851080862866861, 86),
    (5621, 80, 1761878725188230243585305, 93),
]


@pytest.mark.parametrize("m, bits, inverse, shift", TABLE_ROWS)
def test_published_constants(m, bits, inverse, shift):
    magic = derive_magic(m, bits)
    assert (magic.inverse, magic.shift) == (inverse, shift)


def test_243_at_72_bits_needs_only_shift_79():
    magic = derive_magic(243, 72)
    assert magic.shift == 79
    wider = MagicConstants(243, 9950006745799417075771, 81, 72)
    assert constants_hold(wider)


def test_small_divisor_exhaustive():
    magic = derive_magic(3, 8)
    for c in range(256):
        assert fast_div(c, magic) == c // 3
        assert fast_mod(c, magic) == c % 3


@pytest.mark.parametrize("m", [3, 5, 7, 35, 243, 1005, 2005, 5621, 65535])
@pytest.mark.parametrize("bits", [8, 16, 33, 72])
def test_shift_is_minimal(m, bits):
    magic = derive_magic(m, bits)
    assert constants_hold(magic)
    shorter = MagicConstants(m, -(-(1 << (magic.shift - 1)) // m), magic.shift - 1, bits)
    if magic.shift - 1 >= (m - 1).bit_length():
        assert not constants_hold(shorter)


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=1, max_value=4000).map(lambda x: 2 * x + 1),
       st.integers(min_value=1, max_value=144), st.data())
def test_fast_paths_match_schoolbook(m, bits, data):
    magic = derive_magic(m, bits)
    c = data.draw(st.integers(min_value=0, max_value=(1 << bits) - 1))
    q, r = schoolbook_divmod(c, m)
    assert fast_div(c, magic) == q
    assert fast_mod(c, magic) == r
    assert naive_mod(c, magic) == r


def test_random_wide_dividends():
    rng = random.Random(7)
    magic = derive_magic(2005, 144)
    for _ in range(2000):
        c = rng.getrandbits(144)
        assert (fast_div(c, magic), fast_mod(c, magic)) == schoolbook_divmod(c, 2005)


@pytest.mark.parametrize("m", [0, 1, 2, 244, -3])
def test_rejects_bad_divisor(m):
    with pytest.raises(InvalidDivisorError):
        derive_magic(m, 72)


def test_rejects_bad_width():
    with pytest.raises(ValueError):
        derive_magic(243, 0)
    with pytest.raises(ValueError):
        derive_magic(243, 161)
    magic = derive_magic(243, 72)
    with pytest.raises(ValueError):
        fast_div(1 << 72, magic)
    with pytest.raises(ValueError):
        fast_mod(-1, magic)


def test_wide_uint_overflow_is_checked():
    top = WideUint((1 << 320) - 1)
    with pytest.raises(OverflowError):
        top + 1
    with pytest.raises(OverflowError):
        WideUint(0) - 1
    with pytest.raises(OverflowError):
        WideUint(1 << 200) * (1 << 200)
    assert WideUint(1 << 200) * (1 << 100) == 1 << 300
    assert divmod(WideUint(10 ** 40), 2005) == divmod(10 ** 40, 2005)
    with pytest.raises(OverflowError):
        WideInt(1 << 319)
    assert -WideInt(5) == -5


def test_schoolbook_rejects_zero_divisor():
    with pytest.raises(ZeroDivisionError):
        schoolbook_divmod(5, 0)
