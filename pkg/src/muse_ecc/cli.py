"""muse-ecc command line: search, magic, encode, decode, inject, evaluate, report.

Exit codes: 0 success, 1 usage error, 2 empty result, 3 data corruption.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import random
import sys
from pathlib import Path

from .arith import derive_magic
from .code import (CodeError, CodeSpec, ErrorModel, Form, Status, encode, extract_data,
                   spec_from_text, spec_to_text)
from .codecs import REGISTRY, MuseCodec, get_codec
from .container import ContainerError, codeword_offset, frame, is_container, pack, unpack
from .evaluation import (CLASSIFICATIONS, CampaignConfig, EvaluationReport, FaultModel,
                         inject_into_image, run_bit_error_sweep, run_symbol_error_sweep,
                         series_csv)
from .search import (ProgressCounter, SearchRequest, find_multipliers, random_assignment,
                     stride_assignment)

EXIT_OK, EXIT_USAGE, EXIT_EMPTY, EXIT_CORRUPT = 0, 1, 2, 3

MODELS = {"bidir": ErrorModel.BIDIRECTIONAL, "full": ErrorModel.FULL,
          "unidir": ErrorModel.UNIDIRECTIONAL}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_weights(text: str) -> tuple[int, ...]:
    """``"2..8"``, ``"2,4,6"`` or a mix such as ``"2..4,7"``."""
    out = []
    try:
        for part in text.split(","):
            if ".." in part:
                lo, hi = part.split("..")
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad weight list {text!r}") from None
    if not out:
        raise argparse.ArgumentTypeError("empty weight list")
    return tuple(out)


def print_config(args) -> None:
    cfg = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()
           if k != "func"}
    print("config: " + json.dumps(cfg, sort_keys=True))


def load_spec(args) -> CodeSpec:
    if getattr(args, "spec", None):
        return spec_from_text(Path(args.spec).read_text())
    codec = get_codec(args.codec)
    if not isinstance(codec, MuseCodec):
        raise UsageError(f"{args.codec} is not a MUSE code")
    return codec.spec


# -- subcommands --------------------------------------------------------------

def cmd_search(args) -> int:
    model = MODELS[args.model]
    if args.assign == "seq":
        assignment = ()
    elif args.assign == "stride":
        assignment = stride_assignment(args.n, args.s)
    else:
        assignment = random_assignment(args.n, args.s, args.seed)
    request = SearchRequest(args.n, args.s, args.rb, model, assignment, args.stop,
                            args.literal_range, args.semantics, args.workers)
    result = find_multipliers(request, ProgressCounter())
    print(f"scanned {result.candidates_scanned} candidates, "
          f"{result.remainders_needed} remainders needed, {len(result.multipliers)} valid")
    if not result.found:
        print("no multiplier found")
        return EXIT_EMPTY
    print("multipliers: " + " ".join(map(str, result.multipliers)))
    if args.out_dir:
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for m in result.multipliers:
            rb = (m - 1).bit_length()
            spec = CodeSpec(args.n, args.n - rb, m, args.s, request.assignment, model,
                            Form.NON_SYSTEMATIC, f"muse-{args.n}-{args.n - rb}-m{m}")
            (out / f"{spec.name}.yaml").write_text(spec_to_text(spec))
        print(f"wrote {len(result.multipliers)} spec file(s) to {out}")
    return EXIT_OK


def cmd_magic(args) -> int:
    magic = derive_magic(args.m, args.bits)
    print(f"m={magic.divisor} bits={magic.max_dividend_bits} "
          f"inverse={magic.inverse} shift={magic.shift}")
    return EXIT_OK


def cmd_encode(args) -> int:
    spec = load_spec(args)
    data = Path(args.input).read_bytes()
    words = [int(encode(spec, block)) for block in frame(data, spec)]
    Path(args.output).write_bytes(pack(words, spec, len(data)))
    print(f"encoded {len(data)} bytes into {len(words)} codewords")
    return EXIT_OK


def cmd_decode(args) -> int:
    spec = load_spec(args)
    codec = MuseCodec(spec, strict=False)
    words, length = unpack(Path(args.input).read_bytes(), spec)
    step = spec.k // 8
    out = bytearray()
    sidecar = []
    bad = []
    for i, cw in enumerate(words):
        if cw >> spec.n:
            res = None
            status = Status.DETECTED
        else:
            res = codec.decode(cw)
            status = res.status
        if status is Status.CLEAN or status is Status.CORRECTED:
            value = int(res.data)
        else:
            value = int(extract_data(spec, cw & ((1 << spec.n) - 1)))
            bad.append(i)
        if status is not Status.CLEAN:
            sidecar.append({"index": i, "offset": codeword_offset(i, spec), "status": status.value,
                            "remainder": res.remainder if res else None,
                            "pattern": str(res.pattern) if res and res.pattern else ""})
        out += (value % (1 << (8 * step))).to_bytes(step, "little")
    Path(args.output).write_bytes(bytes(out[:length]))
    status_path = Path(args.status or f"{args.output}.status.csv")
    with status_path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, ["index", "offset", "status", "remainder", "pattern"],
                           lineterminator="\n")
        w.writeheader()
        w.writerows(sidecar)
    corrected = sum(1 for e in sidecar if e["status"] == Status.CORRECTED.value)
    print(f"decoded {len(words)} codewords: {corrected} corrected, {len(bad)} uncorrectable")
    if bad:
        for i in bad:
            print(f"uncorrectable codeword {i} at byte offset {codeword_offset(i, spec)}",
                  file=sys.stderr)
        return EXIT_CORRUPT
    return EXIT_OK


def cmd_inject(args) -> int:
    blob = Path(args.input).read_bytes()
    rng = random.Random(f"cli-inject:{args.seed}")
    if is_container(blob):
        # flip bits of stored codewords in place
        spec = load_spec(args)
        words, length = unpack(blob, spec)
        if not words:
            raise UsageError("container holds no codewords")
        log = []
        for _ in range(args.count):
            i = rng.randrange(len(words))
            bits = rng.sample(range(spec.n), args.weight)
            for b in bits:
                words[i] ^= 1 << b
            log.append({"index": i, "bits": " ".join(map(str, sorted(bits)))})
        Path(args.output).write_bytes(pack(words, spec, length))
        for entry in log:
            print(f"flipped codeword {entry['index']} bits {entry['bits']}")
        return EXIT_OK
    codec = get_codec(args.codec) if not args.spec else MuseCodec(load_spec(args), strict=False)
    fault = FaultModel(args.kind, args.weight, args.rate)
    step = codec.k // 8
    if len(blob) % step:
        blob += b"\0" * (step - len(blob) % step)
    outcome = inject_into_image(blob, codec, fault, args.seed)
    Path(args.output).write_bytes(outcome.data)
    if args.log:
        with open(args.log, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "mask", "status", "outcome"])
            for r in outcome.records:
                w.writerow([r.index, hex(r.mask), r.status, r.outcome])
    print(" ".join(f"{k}={v}" for k, v in outcome.tallies.items()))
    return EXIT_CORRUPT if outcome.tallies["miscorrected"] or outcome.tallies["silent"] else EXIT_OK


def cmd_evaluate(args) -> int:
    spec_text = Path(args.spec).read_text() if args.spec else ""
    codec_name = args.codec or "custom"
    if not spec_text and codec_name not in REGISTRY:
        raise UsageError(f"unknown code {codec_name!r}")
    symbol_size = (spec_from_text(spec_text).symbol_size if spec_text
                   else get_codec(codec_name).symbol_size)
    unit = args.unit or ("bit" if symbol_size == 1 else "symbol")
    weights = args.weights or ((2,) if unit == "symbol" else tuple(range(2, 9)))
    config = CampaignConfig(codec_name, weights, args.patterns, args.errors, args.seed,
                            args.classification, args.workers, spec_text)
    sweep = run_symbol_error_sweep if unit == "symbol" else run_bit_error_sweep
    report = sweep(config)
    for row in report.rows:
        lo, hi = row.ci(args.classification)
        print(f"{unit} weight {row.weight}: {row.alias_free_rate(args.classification):.2f}% "
              f"[{lo:.2f}, {hi:.2f}] of {row.samples}")
    print(f"average {report.average():.2f}%  balanced average {report.balanced_average():.2f}%")
    if args.out:
        Path(args.out).write_text(report.to_csv())
    if args.json:
        Path(args.json).write_text(report.to_json())
    return EXIT_OK


def cmd_report(args) -> int:
    reports = [EvaluationReport.from_json(Path(p).read_text()) for p in args.reports]
    text = series_csv(reports, args.classification)
    if args.out:
        Path(args.out).write_text(text)
    print(text, end="")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def _add_code_args(p, required=False):
    g = p.add_mutually_exclusive_group(required=required)
    g.add_argument("--spec", help="code spec file")
    g.add_argument("--codec", choices=sorted(REGISTRY), help="named code")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="muse-ecc", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="per-candidate trace lines")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("search", help="find valid multipliers")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--rb", type=int, required=True)
    p.add_argument("--model", choices=sorted(MODELS), default="bidir")
    p.add_argument("--assign", choices=("seq", "stride", "random"), default="seq")
    p.add_argument("--stop", choices=("first", "all"), default="all")
    p.add_argument("--literal-range", action="store_true")
    p.add_argument("--semantics", choices=("floor", "truncated"), default="floor")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out-dir", default="specs")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("magic", help="derive division constants")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--bits", type=int, required=True, help="dividend width")
    p.set_defaults(func=cmd_magic)

    for name, func in (("encode", cmd_encode), ("decode", cmd_decode)):
        p = sub.add_parser(name, help=f"{name} a file")
        _add_code_args(p, required=True)
        p.add_argument("input")
        p.add_argument("output")
        if name == "decode":
            p.add_argument("--status", help="status sidecar path (default OUTPUT.status.csv)")
        p.set_defaults(func=func)

    p = sub.add_parser("inject", help="inject faults into a container or a raw image")
    _add_code_args(p, required=True)
    p.add_argument("input")
    p.add_argument("output")
    p.add_argument("--count", type=int, default=1, help="faulty codewords (container input)")
    p.add_argument("--kind", choices=("bit", "symbol"), default="bit")
    p.add_argument("--weight", type=int, default=1)
    p.add_argument("--rate", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--log", help="fault log CSV (raw image input)")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("evaluate", help="multi-bit / multi-symbol detection sweep")
    _add_code_args(p, required=True)
    p.add_argument("--weights", type=parse_weights)
    p.add_argument("--unit", choices=("bit", "symbol"))
    p.add_argument("--patterns", type=int, default=1000, help="positions per weight")
    p.add_argument("--errors", type=int, default=100, help="codewords per position set")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--classification", choices=CLASSIFICATIONS, default="contradiction_check")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="CSV report path")
    p.add_argument("--json", help="JSON report path")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("report", help="merge JSON reports into a per-weight series")
    p.add_argument("reports", nargs="+")
    p.add_argument("--classification", choices=CLASSIFICATIONS)
    p.add_argument("--out")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(message)s")
    print_config(args)
    try:
        return args.func(args)
    except ContainerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CORRUPT
    except (UsageError, CodeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
