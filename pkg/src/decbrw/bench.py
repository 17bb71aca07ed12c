"""Throughput measurements in nanoseconds per byte.

Each row times the hash twice: with a key schedule built beforehand and
with the schedule built inside the timed call.  Operation counts come from
one instrumented on-the-fly call, so they include schedule setup.
"""

from __future__ import annotations

import csv
import io
import os
import random
import statistics
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from . import field as fa
from . import hashes as H
from .counters import OpCounters

DEFAULT_LENGTHS = (list(range(1, 33)) + list(range(50, 501, 50)) + list(range(1000, 5001, 500))
                   + [32768])
BENCH_ALGOS = ("polyhash-vec4", "decbrw-vec4", "polyhash", "brwhash", "decbrw")
DEFAULT_ALGOS = ("polyhash-vec4", "decbrw-vec4")
CSV_HEADER = ["algo", "prime", "param", "blocks", "nspb_pre", "nspb_fly", "unred_mult", "red",
              "lane_unred_mult", "lane_red", "full_mult", "squarings"]


@dataclass(frozen=True)
class BenchRow:
    algo: str
    prime: str
    param: int
    blocks: int
    ns_per_byte_precomputed: float
    ns_per_byte_onthefly: float
    op_counts: OpCounters

    def as_csv_row(self) -> list[str]:
        c = self.op_counts
        return [self.algo, self.prime, str(self.param), str(self.blocks),
                f"{self.ns_per_byte_precomputed:.3f}", f"{self.ns_per_byte_onthefly:.3f}",
                str(c.scalar_unreduced_mults), str(c.scalar_reductions),
                str(c.lane_unreduced_mults), str(c.lane_reductions),
                str(c.full_mults), str(c.squarings)]


def default_param(algo: str) -> int:
    return 4 if algo.startswith("polyhash") else 5


def pin_to_one_cpu() -> bool:
    """Restrict this process to a single logical CPU where supported."""
    if not hasattr(os, "sched_setaffinity"):
        return False
    cpus = sorted(os.sched_getaffinity(0))
    try:
        os.sched_setaffinity(0, {cpus[0]})
    except OSError:
        return False
    return True


def _median_ns(fn: Callable[[], object], reps: int) -> float:
    samples = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - t0)
    return statistics.median(samples)


def _callables(algo: str, cfg: fa.PrimeConfig, tau: fa.FieldElement, msg: bytes, param: int,
               counters: OpCounters | None = None) -> tuple[Callable[[], bytes], Callable[[], bytes]]:
    if algo in ("polyhash", "polyhash-vec4"):
        vec = algo.endswith("vec4")
        bs = H.format_pad(msg, H.Pad.PAD1, cfg)
        run = H.polyhash_vec4 if vec else H.polyhash_scalar
        ks = H.PolyKeySchedule(tau, param, cfg, vector=vec)

        def pre() -> bytes:
            return run(ks, bs, cfg)

        def fly() -> bytes:
            return run(H.PolyKeySchedule(tau, param, cfg, vector=vec, counters=counters), bs, cfg, counters)
        return pre, fly
    bs = H.format_pad(msg, H.Pad.PAD2, cfg)
    if algo == "decbrw-vec4":
        dks = H.DecBrwKeySchedule(tau, bs.ell, cfg)

        def pre() -> bytes:
            return H.dec_brw_hash_vec4(dks, bs, param, cfg)

        def fly() -> bytes:
            return H.dec_brw_hash_vec4(H.DecBrwKeySchedule(tau, bs.ell, cfg, counters), bs, param, cfg, counters)
        return pre, fly
    if algo == "brwhash":
        def fly() -> bytes:
            return H.brwhash(tau, bs, param, cfg, counters)
        return fly, fly
    if algo == "decbrw":
        def fly() -> bytes:
            return H.dec_brw_hash_scalar(tau, bs, 4, param, cfg, counters)
        return fly, fly
    raise ValueError(f"unknown bench algorithm {algo!r}")


def bench_row(algo: str, prime: str, param: int, blocks: int, reps: int = 5, seed: int = 0,
              limbs: int = 5) -> BenchRow:
    # Scalar BRW rows have no reusable schedule; both columns time the same call.
    cfg = fa.get_config(prime, limbs)
    rng = random.Random(seed)
    key = bytearray(rng.randbytes(16))
    key[15] &= (1 << (cfg.k - 120)) - 1
    tau = H.key_from_bytes(bytes(key), cfg)
    msg = rng.randbytes(blocks * cfg.block_bytes)
    counters = OpCounters()
    _, counted = _callables(algo, cfg, tau, msg, param, counters)
    counted()
    pre, fly = _callables(algo, cfg, tau, msg, param)
    nbytes = len(msg)
    return BenchRow(algo, str(prime), param, blocks, _median_ns(pre, reps) / nbytes,
                    _median_ns(fly, reps) / nbytes, counters)


def run_bench(algos: Sequence[str], lengths: Sequence[int], params: Sequence[int] | None = None,
              reps: int = 5, prime: str = "1305", limbs: int = 5) -> list[BenchRow]:
    rows = []
    for algo in algos:
        for param in (params or [default_param(algo)]):
            for blocks in lengths:
                rows.append(bench_row(algo, prime, param, blocks, reps, limbs=limbs))
    return rows


def rows_csv(rows: Sequence[BenchRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.as_csv_row())
    return buf.getvalue()
