"""Search for multipliers whose single-symbol error remainders are all distinct."""

from __future__ import annotations

import logging
import random
import threading
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable

from .arith import schoolbook_divmod
from .code import (CodeError, ErrorModel, ErrorPattern, error_value, sequential_assignment,
                   symbol_error_patterns)

log = logging.getLogger(__name__)


def remainders_needed(s: int, n: int, model: ErrorModel) -> int:
    """Number of distinct non-zero remainders a valid multiplier must supply."""
    if s < 1 or n % s:
        raise CodeError(f"symbol size {s} does not divide code length {n}")
    per_symbol = {
        ErrorModel.BIDIRECTIONAL: 2 * ((1 << s) - 1),
        ErrorModel.FULL: 3 ** s - 1,
        ErrorModel.UNIDIRECTIONAL: (1 << s) - 1,
    }[ErrorModel(model)]
    return (n // s) * per_symbol


def get_err_vals(err_pattern: int, symbol, model: ErrorModel) -> list[int]:
    """Error values of one bit mask ``err_pattern`` over the bits of ``symbol``.

    Bit ``t`` of the mask selects ``symbol[t]``.
    """
    if err_pattern <= 0 or err_pattern >> len(symbol):
        raise CodeError("error pattern must be a non-zero mask over the symbol")
    bits = [symbol[t] for t in range(len(symbol)) if err_pattern >> t & 1]
    up = sum(1 << b for b in bits)
    model = ErrorModel(model)
    if model is ErrorModel.UNIDIRECTIONAL:
        return [up]
    if model is ErrorModel.BIDIRECTIONAL:
        return [up, -up]
    values = []
    for signs in range(1 << len(bits)):
        v = sum((-1 if signs >> i & 1 else 1) << b for i, b in enumerate(bits))
        values.append(v)
    return values


def error_values(assignment, model: ErrorModel) -> list[int]:
    """All distinct single-symbol error values, in enumeration order.

    A value reachable from two different symbols is listed twice so that it
    counts as a collision for every multiplier.
    """
    out = []
    for symbol in assignment:
        out.extend(v for v, _ in symbol_error_patterns(symbol, model))
    return out


# -- assignments --------------------------------------------------------------

def interleaved_assignment(n: int, s: int, stride: int) -> tuple[tuple[int, ...], ...]:
    """Symbols made of bits ``stride`` apart.

    ``stride == 1`` is the sequential layout; ``stride == n // s`` puts bit
    ``i + t * n // s`` into symbol ``i``.
    """
    if s < 1 or n % s:
        raise CodeError(f"symbol size {s} does not divide code length {n}")
    count = n // s
    if stride < 1 or count % stride:
        raise CodeError(f"stride {stride} must divide the symbol count {count}")
    out = []
    for i in range(count):
        block, offset = divmod(i, stride)
        base = block * stride * s + offset
        out.append(tuple(base + stride * t for t in range(s)))
    return tuple(out)


def stride_assignment(n: int, s: int) -> tuple[tuple[int, ...], ...]:
    return interleaved_assignment(n, s, n // s)


def random_assignment(n: int, s: int, seed: int) -> tuple[tuple[int, ...], ...]:
    if s < 1 or n % s:
        raise CodeError(f"symbol size {s} does not divide code length {n}")
    bits = list(range(n))
    random.Random(f"assign:{n}:{s}:{seed}").shuffle(bits)
    return tuple(tuple(sorted(bits[i:i + s])) for i in range(0, n, s))


# -- multiplier search --------------------------------------------------------

@dataclass(frozen=True)
class SearchRequest:
    """Parameters of one multiplier search.

    Attributes:
        n: codeword bits.
        s: symbol size in bits.
        r_b: check bits; candidates are odd m with ``2**(r_b-1) < m < 2**r_b``.
        error_model: which single-symbol errors must be correctable.
        assignment: bit lists per symbol; sequential when empty.
        stop_mode: ``"first"`` returns the smallest valid multiplier, ``"all"`` every one.
        literal_range: scan ``2**r_b < m < 2**(r_b+1)`` instead.
        remainder_semantics: ``"floor"`` (true modulus) or ``"truncated"``
            (sign follows the dividend, as C's ``%`` on signed operands).
        workers: processes used to scan candidates.
    """

    n: int
    s: int
    r_b: int
    error_model: ErrorModel = ErrorModel.BIDIRECTIONAL
    assignment: tuple = ()
    stop_mode: str = "all"
    literal_range: bool = False
    remainder_semantics: str = "floor"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "error_model", ErrorModel(self.error_model))
        if not self.assignment:
            object.__setattr__(self, "assignment", sequential_assignment(self.n, self.s))
        else:
            assignment = tuple(tuple(sym) for sym in self.assignment)
            if sorted(b for sym in assignment for b in sym) != list(range(self.n)):
                raise CodeError("assignment must partition bits 0..n-1")
            if any(len(sym) != self.s for sym in assignment):
                raise CodeError(f"every symbol must hold {self.s} bits")
            object.__setattr__(self, "assignment", assignment)
        if self.r_b < 2:
            raise CodeError("r_b must be at least 2")
        if self.stop_mode not in ("first", "all"):
            raise CodeError(f"unknown stop mode {self.stop_mode!r}")
        if self.remainder_semantics not in ("floor", "truncated"):
            raise CodeError(f"unknown remainder semantics {self.remainder_semantics!r}")

    def candidates(self) -> range:
        lo = self.r_b if self.literal_range else self.r_b - 1
        return range((1 << lo) + 1, 1 << (lo + 1), 2)


@dataclass(frozen=True)
class SearchResult:
    multipliers: tuple[int, ...]
    remainders_needed: int
    candidates_scanned: int
    assignment: tuple = field(default=(), repr=False)

    @property
    def found(self) -> bool:
        return bool(self.multipliers)


class ProgressCounter:
    """Candidates scanned so far; safe to read from another thread."""

    def __init__(self):
        self._lock = threading.Lock()
        self._value = 0

    def __call__(self, scanned: int) -> None:
        with self._lock:
            self._value = scanned

    @property
    def value(self) -> int:
        with self._lock:
            return self._value


def multiplier_valid(m: int, values: Iterable[int], semantics: str = "floor") -> bool:
    """True when every value leaves a distinct non-zero remainder modulo ``m``."""
    seen = bytearray(2 * m)
    if semantics == "floor":
        for v in values:
            r = v % m
            if r == 0 or seen[r]:
                return False
            seen[r] = 1
    else:
        for v in values:
            r = v % m if v >= 0 else -((-v) % m)
            if r == 0 or seen[r + m]:
                return False
            seen[r + m] = 1
    return True


def distinct_remainders(m: int, values: Iterable[int]) -> int:
    return len({v % m for v in values} - {0})


def _scan(args) -> list[int]:
    candidates, values, semantics, first = args
    hits = []
    for m in candidates:
        ok = multiplier_valid(m, values, semantics)
        if log.isEnabledFor(logging.DEBUG):
            log.debug("candidate m=%d valid=%d distinct=%d", m, ok, distinct_remainders(m, values))
        if ok:
            hits.append(m)
            if first:
                break
    return hits


def find_multipliers(request: SearchRequest,
                     progress: Callable[[int], None] | None = None) -> SearchResult:
    """Scan odd candidates in ascending order and keep the valid ones.

    With several workers the candidate range is split into contiguous chunks
    and the hits merged in order, so the result does not depend on ``workers``.
    ``progress`` receives the number of candidates scanned so far.
    """
    values = error_values(request.assignment, request.error_model)
    cands = request.candidates()
    needed = remainders_needed(request.s, request.n, request.error_model)
    first = request.stop_mode == "first"
    chunk = 64
    chunks = [cands[i:i + chunk] for i in range(0, len(cands), chunk)]
    hits: list[int] = []
    scanned = 0
    jobs = ((c, values, request.remainder_semantics, first) for c in chunks)
    if request.workers > 1:
        with ProcessPoolExecutor(request.workers) as pool:
            for c, found in zip(chunks, pool.map(_scan, jobs)):
                scanned += len(c)
                if progress:
                    progress(scanned)
                hits.extend(found)
                if first and hits:
                    break
    else:
        for c, job in zip(chunks, jobs):
            found = _scan(job)
            hits.extend(found)
            scanned += len(c) if not (first and found) else c.index(found[0]) + 1
            if progress:
                progress(scanned)
            if first and hits:
                break
    if first:
        hits = hits[:1]
    return SearchResult(tuple(hits), needed, scanned, request.assignment)


@dataclass(frozen=True)
class ShuffleResult:
    assignment: tuple
    multipliers: tuple[int, ...]
    assignments_tried: int


def assignment_family(n: int, s: int, seed: int = 0):
    """Interleaved layouts for each divisor stride, then seeded random partitions."""
    count = n // s
    for stride in range(1, count + 1):
        if count % stride == 0:
            yield interleaved_assignment(n, s, stride)
    i = 0
    while True:
        yield random_assignment(n, s, seed + i)
        i += 1


def search_shuffles(n: int, s: int, r_b: int, model: ErrorModel, budget: int = 32,
                    seed: int = 0, mode: str = "first", workers: int = 1) -> ShuffleResult | None:
    """Look for a bit-to-symbol assignment that admits a valid multiplier.

    ``mode="first"`` stops at the first assignment with any valid multiplier;
    ``"best"`` tries ``budget`` assignments and keeps the smallest multiplier.
    Returns None when nothing within the budget works.
    """
    if mode not in ("first", "best"):
        raise CodeError(f"unknown shuffle search mode {mode!r}")
    best = None
    tried = 0
    for assignment in assignment_family(n, s, seed):
        if tried >= budget:
            break
        tried += 1
        res = find_multipliers(SearchRequest(n, s, r_b, model, assignment, stop_mode="first",
                                             workers=workers))
        if res.found and (best is None or res.multipliers[0] < best.multipliers[0]):
            best = ShuffleResult(assignment, res.multipliers, tried)
            if mode == "first":
                break
    if best is not None:
        best = ShuffleResult(best.assignment, best.multipliers, tried)
    return best


# -- brute-force oracle -------------------------------------------------------

def brute_force_valid(m: int, n: int, s: int, model: ErrorModel, assignment=None) -> bool:
    """Enumerate every flip set explicitly and reduce with long division.

    Only meant for small codes (``n <= 16``); shares no enumeration code with
    :func:`find_multipliers`.
    """
    if n > 16 or s > 2:
        raise CodeError("brute force is limited to n <= 16 and s <= 2")
    model = ErrorModel(model)
    assignment = assignment or sequential_assignment(n, s)
    value_owner: dict[int, int] = {}
    remainders: dict[int, int] = {}
    for j, symbol in enumerate(assignment):
        flips_per_bit = [(0, 1) if model is ErrorModel.UNIDIRECTIONAL else (0, 1, -1)
                         for _ in symbol]
        patterns = set()
        for dirs in _product(flips_per_bit):
            if not any(dirs):
                continue
            if model is ErrorModel.BIDIRECTIONAL and len({d for d in dirs if d}) > 1:
                continue
            patterns.add(ErrorPattern(frozenset((b, d) for b, d in zip(symbol, dirs) if d)))
        for p in patterns:
            v = int(error_value(p))
            if v in value_owner:
                if value_owner[v] != j:
                    return False
                continue
            value_owner[v] = j
            r = schoolbook_divmod(v, m)[1] if v >= 0 else (m - schoolbook_divmod(-v, m)[1]) % m
            if r == 0 or (r in remainders and remainders[r] != v):
                return False
            remainders[r] = v
    return True


def _product(choices):
    if not choices:
        yield ()
        return
    for head in choices[0]:
        for tail in _product(choices[1:]):
            yield (head,) + tail
