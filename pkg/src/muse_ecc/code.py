"""MUSE code definition, encoding, remainder-table correction and space harvesting."""

from __future__ import annotations

import enum
import hashlib
import itertools
from dataclasses import dataclass, field
from functools import cached_property

import yaml

from .arith import MagicConstants, WideInt, WideUint, derive_magic, fast_div, fast_mod


class ErrorModel(str, enum.Enum):
    #: flipped bits of one symbol move in the same direction: +/- pattern weight
    BIDIRECTIONAL = "bidirectional"
    #: every per-bit sign combination (3^s - 1 vectors per symbol)
    FULL = "full"
    UNIDIRECTIONAL = "unidirectional_0to1"


class Form(str, enum.Enum):
    SYSTEMATIC = "systematic"
    NON_SYSTEMATIC = "non_systematic"


class Status(str, enum.Enum):
    CLEAN = "clean"
    CORRECTED = "corrected"
    DETECTED = "detected_uncorrectable"
    MISCORRECTION_RISK = "miscorrection_risk"


class CodeError(ValueError):
    pass


class CapacityError(CodeError):
    pass


class InvalidMultiplierError(CodeError):
    pass


def sequential_assignment(n: int, s: int) -> tuple[tuple[int, ...], ...]:
    if s < 1 or n % s:
        raise CodeError(f"symbol size {s} does not divide code length {n}")
    return tuple(tuple(range(i * s, (i + 1) * s)) for i in range(n // s))


@dataclass(frozen=True)
class ErrorPattern:
    """A set of ``(bit_index, direction)`` flips; direction +1 means 0->1."""

    flips: frozenset = frozenset()

    def __post_init__(self):
        flips = frozenset((int(b), int(d)) for b, d in self.flips)
        bits = [b for b, _ in flips]
        if len(set(bits)) != len(bits):
            raise CodeError("error pattern names a bit twice")
        if any(d not in (-1, 1) for _, d in flips) or any(b < 0 for b in bits):
            raise CodeError("flip directions must be +1/-1 on non-negative bits")
        object.__setattr__(self, "flips", flips)

    @classmethod
    def of(cls, *flips: tuple[int, int]) -> "ErrorPattern":
        return cls(frozenset(flips))

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple(sorted(b for b, _ in self.flips))

    def __len__(self):
        return len(self.flips)

    def __str__(self):
        return ",".join(f"{b}{'+' if d > 0 else '-'}" for b, d in sorted(self.flips))


def error_value(pattern: ErrorPattern, weights=None) -> WideInt:
    """Signed codeword change caused by ``pattern``: sum of direction * 2**bit.

    ``weights`` optionally maps a bit index to its arithmetic weight
    (defaults to ``2**index``).
    """
    if weights is None:
        return WideInt(sum(d << b for b, d in pattern.flips))
    return WideInt(sum(d * weights[b] for b, d in pattern.flips))


def pattern_from_change(before: int, after: int) -> ErrorPattern:
    """Flips that turn ``before`` into ``after``."""
    diff = before ^ after
    flips = []
    while diff:
        low = diff & -diff
        b = low.bit_length() - 1
        flips.append((b, 1 if after & low else -1))
        diff ^= low
    return ErrorPattern(frozenset(flips))


def symbol_error_patterns(symbol, model: ErrorModel):
    """Yield ``(value, pattern)`` for every distinct error value of one symbol.

    Patterns are enumerated by bit mask then sign vector; the first pattern
    producing a value represents it.
    """
    model = ErrorModel(model)
    seen = set()
    s = len(symbol)
    for mask in range(1, 1 << s):
        bits = [symbol[t] for t in range(s) if mask >> t & 1]
        if model is ErrorModel.UNIDIRECTIONAL:
            signs = [(1,) * len(bits)]
        elif model is ErrorModel.BIDIRECTIONAL:
            signs = [(1,) * len(bits), (-1,) * len(bits)]
        else:
            signs = itertools.product((1, -1), repeat=len(bits))
        for sign in signs:
            value = sum(d << b for d, b in zip(sign, bits))
            if value not in seen:
                seen.add(value)
                yield value, ErrorPattern(frozenset(zip(bits, sign)))


@dataclass(frozen=True)
class CodeSpec:
    """One MUSE code: geometry, multiplier, bit-to-symbol assignment, model and form.

    ``bit_assignment`` lists the codeword bit indices of each symbol; bit
    ``i`` carries arithmetic weight ``2**i``.
    """

    n: int
    k: int
    m: int
    symbol_size: int = 1
    bit_assignment: tuple = ()
    error_model: ErrorModel = ErrorModel.BIDIRECTIONAL
    form: Form = Form.NON_SYSTEMATIC
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "error_model", ErrorModel(self.error_model))
        object.__setattr__(self, "form", Form(self.form))
        if not self.bit_assignment:
            assignment = sequential_assignment(self.n, self.symbol_size)
        else:
            assignment = tuple(tuple(int(b) for b in sym) for sym in self.bit_assignment)
        object.__setattr__(self, "bit_assignment", assignment)
        if self.m < 3 or self.m % 2 == 0:
            raise InvalidMultiplierError(f"multiplier must be odd and >= 3, got {self.m}")
        flat = sorted(b for sym in assignment for b in sym)
        if flat != list(range(self.n)):
            raise CodeError("bit assignment must partition bits 0..n-1")
        if any(len(sym) != self.symbol_size for sym in assignment):
            raise CodeError(f"every symbol must hold exactly {self.symbol_size} bits")
        if self.form is Form.SYSTEMATIC:
            if self.n != self.k + self.r_b:
                raise CodeError(f"systematic form needs n == k + r_b ({self.k} + {self.r_b})")
        elif (1 << self.k) - 1 > data_max(self):
            raise CapacityError(f"{self.k} data bits exceed the capacity of m={self.m} in {self.n} bits")

    @property
    def r_b(self) -> int:
        return (self.m - 1).bit_length()

    @property
    def n_symbols(self) -> int:
        return len(self.bit_assignment)

    @cached_property
    def magic(self) -> MagicConstants:
        return derive_magic(self.m, self.n)

    @cached_property
    def symbol_masks(self) -> tuple[int, ...]:
        return tuple(sum(1 << b for b in sym) for sym in self.bit_assignment)

    @property
    def is_sequential(self) -> bool:
        return self.bit_assignment == sequential_assignment(self.n, self.symbol_size)

    def with_form(self, form: Form) -> "CodeSpec":
        return CodeSpec(self.n, self.k, self.m, self.symbol_size, self.bit_assignment,
                        self.error_model, form, self.name)


@dataclass(frozen=True)
class EltEntry:
    value: int
    symbol: int
    pattern: ErrorPattern


@dataclass(frozen=True)
class ErrorLookupTable:
    """Remainder -> correctable error, plus the remainders no single error produces.

    A strict table is a bijection. A table built with ``strict=False`` keeps
    every candidate of a colliding remainder and records the collisions.
    """

    modulus: int
    candidates: dict = field(repr=False)
    collisions: tuple = ()

    @property
    def entries(self) -> dict:
        return {r: c[0] for r, c in self.candidates.items()}

    @property
    def is_bijective(self) -> bool:
        return not self.collisions

    @cached_property
    def unused_remainders(self) -> frozenset:
        return frozenset(range(1, self.modulus)) - self.candidates.keys()

    def __len__(self):
        return len(self.candidates)

    def __contains__(self, remainder):
        return remainder in self.candidates

    def lookup(self, remainder: int) -> tuple:
        return self.candidates.get(remainder, ())


def build_elt(spec: CodeSpec, strict: bool = True) -> ErrorLookupTable:
    """Tabulate the remainder of every single-symbol error value of ``spec``.

    Raises:
        InvalidMultiplierError: (strict) two error values share a remainder, or
            an error value is a multiple of ``m`` and would pass as clean.
    """
    m = spec.m
    table: dict[int, list[EltEntry]] = {}
    collisions = []
    values_seen: dict[int, EltEntry] = {}
    for j, symbol in enumerate(spec.bit_assignment):
        for value, pattern in symbol_error_patterns(symbol, spec.error_model):
            entry = EltEntry(value, j, pattern)
            if value in values_seen:
                # the same value reached from another symbol
                collisions.append((values_seen[value], entry))
                if strict:
                    raise InvalidMultiplierError(
                        f"symbols {values_seen[value].symbol} and {j} share error value {value}")
                continue
            values_seen[value] = entry
            r = value % m
            if r == 0:
                collisions.append((None, entry))
                if strict:
                    raise InvalidMultiplierError(
                        f"m={m}: error {pattern} (value {value}) leaves remainder 0")
                continue
            bucket = table.setdefault(r, [])
            if bucket:
                collisions.append((bucket[0], entry))
                if strict:
                    raise InvalidMultiplierError(
                        f"m={m}: errors {bucket[0].pattern} (symbol {bucket[0].symbol}) and "
                        f"{pattern} (symbol {j}) share remainder {r}")
            bucket.append(entry)
    return ErrorLookupTable(m, {r: tuple(v) for r, v in table.items()}, tuple(collisions))


def data_max(spec: CodeSpec) -> WideUint:
    """Largest data value whose non-systematic codeword fits in ``n`` bits."""
    return WideUint(((1 << spec.n) - 1) // spec.m)


def capacity_bits(spec: CodeSpec) -> int:
    if spec.form is Form.SYSTEMATIC:
        return spec.k
    return int(data_max(spec)).bit_length() - 1


def extra_states(spec: CodeSpec, base_bits: int) -> WideUint:
    """Data states left over once a ``base_bits`` payload is stored."""
    if base_bits < 0 or base_bits > capacity_bits(spec):
        raise CapacityError(f"base of {base_bits} bits exceeds the code capacity")
    if spec.form is Form.SYSTEMATIC:
        return WideUint((1 << spec.k) - (1 << base_bits))
    return WideUint(int(data_max(spec)) + 1 - (1 << base_bits))


def in_harvest_space(spec: CodeSpec, value: int, base_bits: int) -> bool:
    """True when ``value`` lies above the ``base_bits`` range but is still encodable."""
    limit = (1 << spec.k) - 1 if spec.form is Form.SYSTEMATIC else int(data_max(spec))
    if value < 0 or value > limit:
        raise CapacityError(f"value {value} is not encodable by this code")
    if base_bits > capacity_bits(spec):
        raise CapacityError(f"base of {base_bits} bits exceeds the code capacity")
    return value >> base_bits != 0


def encode(spec: CodeSpec, data: int) -> WideUint:
    if data < 0:
        raise CapacityError("data must be non-negative")
    if spec.form is Form.NON_SYSTEMATIC:
        if data > data_max(spec):
            raise CapacityError(f"data exceeds data_max for m={spec.m}, n={spec.n}")
        return WideUint(spec.m) * data
    if data >> spec.k:
        raise CapacityError(f"data wider than {spec.k} bits")
    shifted = data << spec.r_b
    check = (spec.m - int(fast_mod(shifted, spec.magic))) % spec.m
    return WideUint(shifted | check)


def extract_data(spec: CodeSpec, codeword: int) -> WideUint:
    if spec.form is Form.SYSTEMATIC:
        return WideUint(codeword >> spec.r_b)
    return fast_div(codeword, spec.magic)


@dataclass(frozen=True)
class DecodeResult:
    data: int
    status: Status
    remainder: int
    pattern: ErrorPattern | None = None
    codeword: int | None = None
    #: the remainder/syndrome named a correctable error (whether or not it was applied)
    table_hit: bool = False

    def __post_init__(self):
        if (self.status is Status.CLEAN) != (self.remainder == 0):
            raise CodeError("clean status requires a zero remainder")


def decode(spec: CodeSpec, codeword: int, elt: ErrorLookupTable) -> DecodeResult:
    """Check, and where possible correct, one codeword.

    A remainder found in the table is applied only if the correction changes
    nothing outside the claimed symbol and stays within ``n`` bits; otherwise
    the bits contradict the claimed flips and the word is reported as an
    uncorrectable multi-bit error.
    """
    if codeword < 0 or codeword >> spec.n:
        raise CodeError(f"codeword wider than {spec.n} bits")
    r = int(fast_mod(codeword, spec.magic))
    if r == 0:
        return DecodeResult(extract_data(spec, codeword), Status.CLEAN, 0, codeword=codeword)
    candidates = elt.lookup(r)
    if not candidates:
        return DecodeResult(extract_data(spec, codeword), Status.DETECTED, r)
    n_mask = (1 << spec.n) - 1
    consistent = []
    for entry in candidates:
        corrected = codeword - entry.value
        if corrected < 0 or corrected & ~n_mask:
            continue
        if (corrected ^ codeword) & ~spec.symbol_masks[entry.symbol]:
            continue
        consistent.append(corrected)
    if not consistent:
        return DecodeResult(extract_data(spec, codeword), Status.DETECTED, r, table_hit=True)
    corrected = consistent[0]
    if corrected % spec.m:
        raise AssertionError("correction left a non-zero remainder")
    status = Status.CORRECTED if len(consistent) == 1 else Status.MISCORRECTION_RISK
    return DecodeResult(extract_data(spec, corrected), status, r,
                        pattern_from_change(corrected, codeword), corrected, table_hit=True)


def apply_shuffle(spec: CodeSpec, logical: int) -> int:
    """Route codeword bits so each symbol occupies ``s`` adjacent physical lanes."""
    if logical < 0 or logical >> spec.n:
        raise CodeError(f"word wider than {spec.n} bits")
    s = spec.symbol_size
    physical = 0
    for j, sym in enumerate(spec.bit_assignment):
        for t, b in enumerate(sym):
            if logical >> b & 1:
                physical |= 1 << (j * s + t)
    return physical


def unshuffle(spec: CodeSpec, physical: int) -> int:
    if physical < 0 or physical >> spec.n:
        raise CodeError(f"word wider than {spec.n} bits")
    s = spec.symbol_size
    logical = 0
    for j, sym in enumerate(spec.bit_assignment):
        for t, b in enumerate(sym):
            if physical >> (j * s + t) & 1:
                logical |= 1 << b
    return logical


# -- text format ------------------------------------------------------------

def spec_to_text(spec: CodeSpec) -> str:
    doc = {
        "name": spec.name,
        "n": spec.n,
        "k": spec.k,
        "r_b": spec.r_b,
        "m": spec.m,
        "symbol_size": spec.symbol_size,
        "error_model": spec.error_model.value,
        "form": spec.form.value,
        "magic": {"inverse": spec.magic.inverse, "shift": spec.magic.shift,
                  "max_dividend_bits": spec.magic.max_dividend_bits},
        "bit_assignment": [list(sym) for sym in spec.bit_assignment],
    }
    return yaml.dump(doc, sort_keys=False, default_flow_style=None, width=100)


def spec_from_text(text: str) -> CodeSpec:
    doc = yaml.safe_load(text)
    if not isinstance(doc, dict):
        raise CodeError("code spec text must be a mapping")
    try:
        spec = CodeSpec(
            n=int(doc["n"]), k=int(doc["k"]), m=int(doc["m"]),
            symbol_size=int(doc.get("symbol_size", 1)),
            bit_assignment=tuple(tuple(s) for s in doc.get("bit_assignment") or ()),
            error_model=doc.get("error_model", "bidirectional"),
            form=doc.get("form", "non_systematic"),
            name=doc.get("name", ""),
        )
    except KeyError as exc:
        raise CodeError(f"code spec is missing {exc.args[0]!r}") from None
    if "r_b" in doc and int(doc["r_b"]) != spec.r_b:
        raise CodeError(f"r_b {doc['r_b']} does not match multiplier {spec.m}")
    return spec


def spec_fingerprint(spec: CodeSpec) -> bytes:
    return hashlib.sha256(spec_to_text(spec).encode()).digest()
