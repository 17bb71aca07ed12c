"""Command-line entry point: hash, kat, bench and analyze subcommands."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import bench, kat, lab
from .brw import T_VALUES
from .counters import OpCounters
from .errors import DecBrwError
from .hashes import ALGOS, BACKENDS, C_MAX, G_VALUES, hash_bytes

EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_KEY_LENGTH = 3


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _str_list(text: str) -> list[str]:
    return [x.strip() for x in text.split(",") if x.strip()]


def _toy_params(text: str) -> lab.ToyParams:
    vals = _int_list(text)
    if len(vals) != 5:
        raise argparse.ArgumentTypeError("toy params are m,delta,n,k,mu")
    try:
        return lab.ToyParams(*vals)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="decbrw", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    h = sub.add_parser("hash", help="hash one message")
    h.add_argument("--algo", choices=ALGOS, required=True)
    h.add_argument("--prime", choices=("1305", "1271"), default="1305")
    h.add_argument("--key-hex", required=True)
    src = h.add_mutually_exclusive_group(required=True)
    src.add_argument("--in", dest="in_path", metavar="PATH")
    src.add_argument("--msg-hex")
    h.add_argument("--g", type=int, choices=G_VALUES, default=4)
    h.add_argument("--t", type=int, choices=T_VALUES, default=5)
    h.add_argument("--c", type=int, choices=range(1, C_MAX + 1), default=4, metavar="N")
    h.add_argument("--backend", choices=BACKENDS, default="scalar")
    h.add_argument("--limbs", type=int, choices=(4, 5), default=5)
    h.add_argument("--counters", action="store_true", help="print operation counts to stderr")

    k = sub.add_parser("kat", help="generate or verify known-answer files")
    k.add_argument("action", choices=("generate", "verify"))
    k.add_argument("file")
    k.add_argument("--seed", type=int, default=kat.KAT_SEED)
    k.add_argument("--backend", choices=BACKENDS, default="scalar")

    b = sub.add_parser("bench", help="throughput CSV")
    b.add_argument("--lengths", type=_int_list, default=bench.DEFAULT_LENGTHS)
    b.add_argument("--algos", type=_str_list, default=list(bench.DEFAULT_ALGOS))
    b.add_argument("--params", type=_int_list, default=None,
                   help="g for polyhash rows, t for BRW rows")
    b.add_argument("--reps", type=int, default=5)
    b.add_argument("--prime", choices=("1305", "1271"), default="1305")
    b.add_argument("--limbs", type=int, choices=(4, 5), default=5)
    b.add_argument("--no-pin", action="store_true")

    a = sub.add_parser("analyze", help="toy-parameter bound sweep")
    a.add_argument("--params", type=_toy_params, default=lab.DEFAULT_TOY, metavar="m,delta,n,k,mu")
    a.add_argument("--c", type=_int_list, default=[1, 2])
    a.add_argument("--kinds", type=_str_list, default=list(lab.KINDS))
    a.add_argument("--max-bits", type=int, default=None,
                   help="longest message in bits (default: two blocks)")
    a.add_argument("--samples", type=int, default=0)
    a.add_argument("--seed", type=int, default=0)
    return parser


def _cmd_hash(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    want = 64 if args.algo == "poly1305" else 32
    if len(args.key_hex) != want:
        print(f"error: key must be {want} hex characters, got {len(args.key_hex)}", file=sys.stderr)
        return EXIT_KEY_LENGTH
    try:
        key = bytes.fromhex(args.key_hex)
        if args.in_path is not None:
            with open(args.in_path, "rb") as fh:
                msg = fh.read()
        else:
            msg = bytes.fromhex(args.msg_hex)
    except ValueError as exc:
        parser.error(f"bad hex input: {exc}")
    counters = OpCounters() if args.counters else None
    try:
        digest = hash_bytes(args.algo, key, msg, args.prime, g=args.g, t=args.t, c=args.c,
                            backend=args.backend, limbs=args.limbs, counters=counters)
    except (ValueError, DecBrwError) as exc:
        parser.error(str(exc))
    print(digest.hex())
    if counters is not None:
        print(json.dumps(counters.as_dict()), file=sys.stderr)
    return 0


def _cmd_kat(args: argparse.Namespace) -> int:
    if args.action == "generate":
        records = kat.generate_records(args.seed, args.backend)
        kat.write_kat(args.file, records)
        print(f"wrote {len(records)} records to {args.file}")
        return 0
    n, bad = kat.verify_records(kat.read_kat(args.file), args.backend)
    if bad is not None:
        print(f"FAIL record {n}: {json.dumps(bad, sort_keys=True)}")
        return EXIT_FAIL
    print(f"ok: {n} records verified")
    return 0


def _cmd_bench(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    for algo in args.algos:
        if algo not in bench.BENCH_ALGOS:
            parser.error(f"unknown algorithm {algo!r}; choose from {', '.join(bench.BENCH_ALGOS)}")
        allowed = G_VALUES if algo.startswith("polyhash") else T_VALUES
        for v in args.params or ():
            if v not in allowed:
                parser.error(f"param {v} is not valid for {algo}")
    if any(x < 1 for x in args.lengths) or args.reps < 1:
        parser.error("lengths and reps must be positive")
    if not args.no_pin:
        bench.pin_to_one_cpu()
    sys.stdout.write(bench.rows_csv([]))
    for algo in args.algos:
        for param in args.params or [bench.default_param(algo)]:
            for blocks in args.lengths:
                row = bench.bench_row(algo, args.prime, param, blocks, args.reps, limbs=args.limbs)
                sys.stdout.write(",".join(row.as_csv_row()) + "\n")
                sys.stdout.flush()
    return 0


def _cmd_analyze(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    tp: lab.ToyParams = args.params
    for kind in args.kinds:
        if kind not in lab.KINDS:
            parser.error(f"unknown hash kind {kind!r}")
    if any(c < 1 for c in args.c):
        parser.error("c must be positive")
    max_bits = 2 * tp.n if args.max_bits is None else args.max_bits
    try:
        rows = lab.sweep_report(tp, max_bits, args.samples, args.kinds, args.c, args.seed)
    except ValueError as exc:
        parser.error(str(exc))
    sys.stdout.write(lab.report_csv(rows))
    return 0 if all(r.passed for r in rows) else EXIT_FAIL


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "hash":
        return _cmd_hash(args, parser)
    if args.command == "kat":
        return _cmd_kat(args)
    if args.command == "bench":
        return _cmd_bench(args, parser)
    return _cmd_analyze(args, parser)


if __name__ == "__main__":
    sys.exit(main())
