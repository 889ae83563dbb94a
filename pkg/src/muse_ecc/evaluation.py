"""Fault-injection campaigns: multi-bit and multi-symbol detection sweeps, image injection."""

from __future__ import annotations

import csv
import io
import json
import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from itertools import combinations

from .code import CodeError, Status, spec_from_text
from .codecs import MuseCodec, get_codec

CLASSIFICATIONS = ("raw_alias", "contradiction_check", "half_alias")


@lru_cache(maxsize=8)
def resolve_codec(codec: str, spec_text: str = ""):
    """Registry name, or a MUSE code given as spec text (collisions allowed)."""
    if spec_text:
        return MuseCodec(spec_from_text(spec_text), strict=False)
    return get_codec(codec)


@dataclass(frozen=True)
class CampaignConfig:
    """One sweep over error weights.

    Attributes:
        codec: registry name (ignored when ``spec_text`` is given).
        weights: flipped bits (bit sweeps) or corrupted symbols (symbol sweeps).
        patterns_per_weight: positions sampled per weight; a weight with at most
            this many position sets is swept exhaustively.
        errors_per_pattern: random codewords hit with each position set.
        seed: master seed; each work item derives its own stream from it.
        classification: which MUSE estimate the summary rate uses.
        workers: processes; results do not depend on this.
    """

    codec: str
    weights: tuple[int, ...] = (2,)
    patterns_per_weight: int = 1000
    errors_per_pattern: int = 100
    seed: int = 0
    classification: str = "contradiction_check"
    workers: int = 1
    spec_text: str = ""

    def __post_init__(self):
        if self.classification not in CLASSIFICATIONS:
            raise CodeError(f"classification must be one of {', '.join(CLASSIFICATIONS)}")
        if self.patterns_per_weight < 1 or self.errors_per_pattern < 1:
            raise CodeError("sampling counts must be positive")
        if not self.weights or min(self.weights) < 1:
            raise CodeError("weights must be positive")
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))


@dataclass
class WeightTally:
    """Outcome counts for one error weight.

    ``aliased`` counts errors whose remainder/syndrome equals that of a
    correctable error; ``check_caught`` is the subset the decoder still refused
    to correct. ``unused`` errors landed on a non-correctable syndrome.
    ``direction_check`` is False for codes without a bit-direction check, for
    which the half-alias estimate degenerates to the raw count.
    """

    weight: int
    samples: int = 0
    silent: int = 0
    unused: int = 0
    aliased: int = 0
    check_caught: int = 0
    direction_check: bool = True

    def merge(self, other: "WeightTally") -> None:
        self.direction_check = other.direction_check
        for name in ("samples", "silent", "unused", "aliased", "check_caught"):
            setattr(self, name, getattr(self, name) + getattr(other, name))

    def detected(self, mode: str) -> float:
        if mode == "raw_alias":
            return self.unused
        if mode == "contradiction_check":
            return self.unused + self.check_caught
        if mode == "half_alias":
            return self.unused + (self.aliased / 2 if self.direction_check else 0)
        raise CodeError(f"unknown classification {mode!r}")

    def miscorrected(self, mode: str) -> float:
        """Errors the decoder would turn into a wrong 'corrected' word."""
        return self.samples - self.silent - self.detected(mode)

    def detection_rate(self, mode: str) -> float:
        """Share of errors flagged; silent errors count as missed."""
        return 100.0 * self.detected(mode) / self.samples if self.samples else math.nan

    def alias_free_rate(self, mode: str) -> float:
        """Share of errors not turned into a miscorrection (silent ones included)."""
        return 100.0 * (1 - self.miscorrected(mode) / self.samples) if self.samples else math.nan

    def ci(self, mode: str, z: float = 1.96) -> tuple[float, float]:
        return wilson_interval(self.samples - self.miscorrected(mode), self.samples, z)


def wilson_interval(successes: float, n: int, z: float = 1.96) -> tuple[float, float]:
    if n == 0:
        return (math.nan, math.nan)
    p = successes / n
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return (100.0 * (centre - half), 100.0 * (centre + half))


@dataclass
class EvaluationReport:
    codec: str
    unit: str
    classification: str
    seed: int
    rows: list[WeightTally] = field(default_factory=list)

    def rate(self, weight: int, mode: str | None = None) -> float:
        mode = mode or self.classification
        for row in self.rows:
            if row.weight == weight:
                return row.alias_free_rate(mode)
        raise KeyError(weight)

    def average(self, mode: str | None = None) -> float:
        mode = mode or self.classification
        return sum(r.alias_free_rate(mode) for r in self.rows) / len(self.rows)

    def balanced_average(self, mode: str | None = None) -> float:
        """Mean of the even-weight mean and the odd-weight mean."""
        mode = mode or self.classification
        groups = [[r.alias_free_rate(mode) for r in self.rows if r.weight % 2 == p] for p in (0, 1)]
        means = [sum(g) / len(g) for g in groups if g]
        return sum(means) / len(means)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["codec", "unit", "weight", "classification", "samples", "detected",
                    "miscorrected", "silent", "aliased", "check_caught", "detection_rate",
                    "alias_free_rate", "ci_low", "ci_high"])
        for row in self.rows:
            for mode in CLASSIFICATIONS:
                lo, hi = row.ci(mode)
                w.writerow([self.codec, self.unit, row.weight, mode, row.samples,
                            f"{row.detected(mode):g}", f"{row.miscorrected(mode):g}", row.silent,
                            row.aliased, row.check_caught, f"{row.detection_rate(mode):.4f}",
                            f"{row.alias_free_rate(mode):.4f}", f"{lo:.4f}", f"{hi:.4f}"])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {
            "codec": self.codec, "unit": self.unit, "classification": self.classification,
            "seed": self.seed, "rows": [asdict(r) for r in self.rows],
            "rates": {str(r.weight): round(r.alias_free_rate(self.classification), 4)
                      for r in self.rows},
            "average": round(self.average(), 4),
            "balanced_average": round(self.balanced_average(), 4),
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "EvaluationReport":
        doc = json.loads(text)
        rows = [WeightTally(**r) for r in doc["rows"]]
        return cls(doc["codec"], doc["unit"], doc["classification"], doc["seed"], rows)


def series_csv(reports: list[EvaluationReport], mode: str | None = None) -> str:
    """Detection rate per weight, one column per code."""
    weights = sorted({r.weight for rep in reports for r in rep.rows})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["weight"] + [rep.codec for rep in reports])
    for wt in weights:
        line = [wt]
        for rep in reports:
            try:
                line.append(f"{rep.rate(wt, mode or rep.classification):.4f}")
            except KeyError:
                line.append("")
        w.writerow(line)
    return buf.getvalue()


def _tally_outcome(tally: WeightTally, result) -> None:
    tally.samples += 1
    if result.status is Status.CLEAN:
        tally.silent += 1
    elif result.table_hit:
        tally.aliased += 1
        if result.status is Status.DETECTED:
            tally.check_caught += 1
    else:
        tally.unused += 1


def _run_items(task) -> WeightTally:
    codec_name, spec_text, unit, weight, seed, errors, items = task
    codec = resolve_codec(codec_name, spec_text)
    units = codec.symbols if unit == "symbol" else [[i] for i in range(codec.n)]
    tally = WeightTally(weight, direction_check=isinstance(codec, MuseCodec))
    for index, positions in items:
        rng = random.Random(f"{seed}:{weight}:{index}")
        if positions is None:
            positions = sorted(rng.sample(range(len(units)), weight))
        for _ in range(errors):
            cw = codec.encode(rng.getrandbits(codec.k))
            mask = 0
            for p in positions:
                bits = units[p]
                change = rng.randrange(1, 1 << len(bits))
                for t, b in enumerate(bits):
                    if change >> t & 1:
                        mask |= 1 << b
            _tally_outcome(tally, codec.decode(cw ^ mask))
    return tally


def _sweep(config: CampaignConfig, unit: str) -> EvaluationReport:
    codec = resolve_codec(config.codec, config.spec_text)
    n_units = len(codec.symbols) if unit == "symbol" else codec.n
    tasks = []
    for w in config.weights:
        if w > n_units:
            raise CodeError(f"weight {w} exceeds the {n_units} {unit}s of {codec.name}")
        if math.comb(n_units, w) <= config.patterns_per_weight:
            items = list(enumerate(combinations(range(n_units), w)))
        else:
            items = [(i, None) for i in range(config.patterns_per_weight)]
        step = max(1, len(items) // (4 * config.workers))
        for start in range(0, len(items), step):
            tasks.append((config.codec, config.spec_text, unit, w, config.seed,
                          config.errors_per_pattern, items[start:start + step]))
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            partials = list(pool.map(_run_items, tasks))
    else:
        partials = [_run_items(t) for t in tasks]
    rows = {w: WeightTally(w, direction_check=isinstance(codec, MuseCodec))
            for w in config.weights}
    for part in partials:
        rows[part.weight].merge(part)
    return EvaluationReport(codec.name, unit, config.classification, config.seed,
                            [rows[w] for w in config.weights])


def run_bit_error_sweep(config: CampaignConfig) -> EvaluationReport:
    """Flip ``weight`` distinct bits of random codewords.

    Flip directions follow the stored bits, so signed error values come from
    real codewords rather than being assumed.
    """
    return _sweep(config, "bit")


def run_symbol_error_sweep(config: CampaignConfig) -> EvaluationReport:
    """Replace ``weight`` distinct symbols with a different random value each."""
    return _sweep(config, "symbol")


# -- image injection ----------------------------------------------------------

@dataclass(frozen=True)
class FaultModel:
    """How codewords of an image get hit.

    Attributes:
        kind: "bit" flips ``weight`` bits, "symbol" corrupts ``weight`` symbols.
        weight: bits or symbols per faulty codeword.
        rate: probability that a codeword is faulty.
    """

    kind: str = "bit"
    weight: int = 1
    rate: float = 0.01

    def __post_init__(self):
        if self.kind not in ("bit", "symbol"):
            raise CodeError(f"unknown fault kind {self.kind!r}")
        if self.weight < 1 or not 0 <= self.rate <= 1:
            raise CodeError("fault weight must be >= 1 and rate within [0, 1]")


@dataclass(frozen=True)
class FaultRecord:
    index: int
    mask: int
    status: str
    outcome: str


@dataclass
class InjectionOutcome:
    data: bytes
    records: list[FaultRecord]
    tallies: dict[str, int]


def payload_bytes(codec) -> int:
    return codec.k // 8


def inject_into_image(image: bytes, codec, fault: FaultModel, seed: int = 0) -> InjectionOutcome:
    """Encode ``image``, inject faults, decode, and check the decoder against the truth.

    Outcomes: clean, corrected, detected, miscorrected (decoder claimed success
    but the data is wrong) and silent (fault invisible to the decoder).

    Raises:
        CodeError: image length is not a multiple of the payload size.
    """
    step = payload_bytes(codec)
    if len(image) % step:
        raise CodeError(f"image length {len(image)} is not a multiple of {step} bytes")
    rng = random.Random(f"inject:{seed}")
    units = codec.symbols if fault.kind == "symbol" else [[i] for i in range(codec.n)]
    out = bytearray()
    records = []
    tallies = dict.fromkeys(("clean", "corrected", "detected", "miscorrected", "silent"), 0)
    for index in range(len(image) // step):
        data = int.from_bytes(image[index * step:(index + 1) * step], "little")
        cw = codec.encode(data)
        mask = 0
        if rng.random() < fault.rate:
            for p in rng.sample(range(len(units)), fault.weight):
                bits = units[p]
                change = rng.randrange(1, 1 << len(bits))
                for t, b in enumerate(bits):
                    if change >> t & 1:
                        mask |= 1 << b
        res = codec.decode(cw ^ mask)
        if not mask:
            outcome = "clean" if res.status is Status.CLEAN else "miscorrected"
        elif res.status is Status.CLEAN:
            outcome = "silent"
        elif res.status is Status.DETECTED:
            outcome = "detected"
        else:
            outcome = "corrected" if res.data == data else "miscorrected"
        tallies[outcome] += 1
        if mask:
            records.append(FaultRecord(index, mask, res.status.value, outcome))
        out += int(res.data % (1 << (8 * step))).to_bytes(step, "little")
    return InjectionOutcome(bytes(out), records, tallies)
