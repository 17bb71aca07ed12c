"""Toy-parameter laboratory for the differential-probability bounds.

With a prime of a dozen bits or less, every key can be tried.  The hashes
here are bit-granular re-implementations evaluated for all keys at once as
numpy vectors, independent of the limb arithmetic.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .errors import ParamsTooLarge
from .oracle import DensePoly, build_Q_symbolic, oracle_hash_blocks, poly_sub

KINDS = ("polyhash", "brwhash", "decbrw")
MAX_KEY_BITS = 16
MAX_PRIME_BITS = 16
EXHAUSTIVE_LIMIT = 1 << 12


def is_prime(x: int) -> bool:
    if x < 2:
        return False
    f = 2
    while f * f <= x:
        if x % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class ToyParams:
    m: int
    delta: int
    n: int
    k: int
    mu: int
    c: int = 1

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise ValueError(f"2^{self.m} - {self.delta} is not prime")
        if not self.mu < self.m:
            raise ValueError("digest width must be below the prime width")
        if not self.delta < 2 ** self.mu - 1:
            raise ValueError("delta must be below 2^mu - 1")
        if not 1 <= self.n <= self.m - 2:
            raise ValueError("block width must satisfy 1 <= n <= m - 2")
        if not 1 <= self.k < self.m:
            raise ValueError("key width must satisfy 1 <= k < m")
        if self.c < 1:
            raise ValueError("c must be positive")
        if self.k > MAX_KEY_BITS or self.m > MAX_PRIME_BITS:
            raise ParamsTooLarge("toy parameters are limited to 16-bit primes and keys")

    @property
    def p(self) -> int:
        return 2 ** self.m - self.delta

    def label(self) -> str:
        return f"m={self.m};delta={self.delta};n={self.n};k={self.k};mu={self.mu}"


DEFAULT_TOY = ToyParams(m=7, delta=1, n=5, k=6, mu=6)
SECOND_TOY = ToyParams(m=13, delta=1, n=11, k=11, mu=11)


class Bits(NamedTuple):
    """A bit string: ``value`` read most-significant bit first, ``length`` bits."""

    value: int
    length: int


def toy_format(x: Bits, tp: ToyParams, scheme: str) -> list[int]:
    """Blocks of x; pad1 sets a marker bit just above each block's data."""
    L, n = x.length, tp.n
    ell = -(-L // n)
    blocks = []
    for i in range(1, ell + 1):
        if i < ell:
            s = n
            data = (x.value >> (L - i * n)) & ((1 << n) - 1)
        else:
            s = L - (ell - 1) * n
            data = x.value & ((1 << s) - 1)
        blocks.append(data + (1 << s) if scheme == "pad1" else data)
    return blocks


def _brw_keys(tau: np.ndarray, blocks: Sequence[int], p: int) -> np.ndarray:
    n = len(blocks)
    if n == 0:
        return np.zeros_like(tau)
    if n == 1:
        return np.full_like(tau, blocks[0] % p)
    if n == 2:
        return (blocks[0] * tau + blocks[1]) % p
    if n == 3:
        return ((tau + blocks[0]) * ((tau * tau + blocks[1]) % p) + blocks[2]) % p
    top = 1 << (n.bit_length() - 1)
    left = _brw_keys(tau, blocks[:top - 1], p)
    tp_pow = tau.copy()
    for _ in range(top.bit_length() - 1):
        tp_pow = tp_pow * tp_pow % p
    return (left * ((tp_pow + blocks[top - 1]) % p) + _brw_keys(tau, blocks[top:], p)) % p


def _pow_keys(tau: np.ndarray, e: int, p: int) -> np.ndarray:
    out = np.ones_like(tau)
    base = tau.copy()
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


def toy_hash_values(kind: str, x: Bits, tp: ToyParams, keys: np.ndarray | None = None,
                    c: int | None = None) -> np.ndarray:
    """Hash of x under every key in ``keys`` (default: all 2^k keys)."""
    p = tp.p
    tau = np.arange(2 ** tp.k, dtype=np.int64) if keys is None else keys.astype(np.int64)
    c = tp.c if c is None else c
    if kind == "polyhash":
        acc = np.zeros_like(tau)
        for b in toy_format(x, tp, "pad1"):
            acc = (acc + b) * tau % p
        v = acc
    elif kind in ("brwhash", "decbrw"):
        blocks = toy_format(x, tp, "pad2")
        L = x.length
        if not blocks:
            v = np.zeros_like(tau)
        else:
            cc = 1 if kind == "brwhash" else c
            ns = -(-len(blocks) // cc)
            full = blocks + [0] * (cc * ns - len(blocks))
            d = 2 ** ns.bit_length()
            tau_d = _pow_keys(tau, d, p)
            inner = np.zeros_like(tau)
            for i in range(cc):
                inner = (inner * tau_d + _brw_keys(tau, full[i::cc], p)) % p
            v = tau * ((tau * inner + L) % p) % p
    else:
        raise ValueError(f"unknown hash kind {kind!r}")
    return v % (2 ** tp.mu)


@dataclass(frozen=True)
class DifferentialQuery:
    a: Bits
    a_prime: Bits
    alpha: int
    hash_kind: str

    def __post_init__(self) -> None:
        if self.a == self.a_prime:
            raise ValueError("a differential query needs two distinct strings")


def differential_probability(q: DifferentialQuery, tp: ToyParams) -> tuple[int, int]:
    """(number of keys with H(a) - H(a') = alpha mod 2^mu, 2^k)."""
    h = toy_hash_values(q.hash_kind, q.a, tp)
    h2 = toy_hash_values(q.hash_kind, q.a_prime, tp)
    diff = (h - h2) % (2 ** tp.mu)
    return int(np.count_nonzero(diff == q.alpha % (2 ** tp.mu))), 2 ** tp.k


def axu_bound(kind: str, ell: int, c: int, tp: ToyParams) -> Fraction:
    unit = Fraction(2) ** (tp.m - tp.k - tp.mu + 1)
    if kind == "polyhash":
        return ell * unit
    if kind == "brwhash" or (kind == "decbrw" and c == 1):
        return (2 * ell + 1) * unit
    if kind == "decbrw":
        return (2 * ell + 2 * c + 1) * unit
    raise ValueError(f"unknown hash kind {kind!r}")


@dataclass(frozen=True)
class ReportRow:
    kind: str
    ell: int
    c: int
    params: str
    queries_checked: int
    max_count: int
    bound_count: int
    passed: bool
    vacuous: bool

    def as_csv_row(self) -> list[str]:
        return [self.kind, str(self.ell), str(self.c), self.params, str(self.queries_checked),
                str(self.max_count), str(self.bound_count), "pass" if self.passed else "FAIL",
                "yes" if self.vacuous else "no"]


CSV_HEADER = ["kind", "ell", "c", "params", "queries_checked", "max_count", "bound_count",
              "pass", "vacuous"]


def all_strings(max_len_bits: int) -> list[Bits]:
    """Every bit string of length 0..max_len_bits, shortest first."""
    return [Bits(v, L) for L in range(max_len_bits + 1) for v in range(2 ** L)]


def _row_max(diff: np.ndarray, modulus: int) -> np.ndarray:
    """Largest multiplicity of any single value in each row of ``diff``."""
    rows = diff.shape[0]
    flat = diff + modulus * np.arange(rows, dtype=np.int64)[:, None]
    counts = np.bincount(flat.ravel(), minlength=rows * modulus).reshape(rows, modulus)
    return counts.max(axis=1)


def _sweep_kind(kind: str, c: int, tp: ToyParams, msgs: list[Bits],
                pairs: Iterable[tuple[int, int]] | None) -> dict[int, list[int]]:
    mod = 2 ** tp.mu
    table = np.stack([toy_hash_values(kind, x, tp, c=c) for x in msgs])
    ells = np.array([-(-x.length // tp.n) for x in msgs])
    stats: dict[int, list[int]] = {}
    if pairs is None:
        # msgs are sorted by length, so msgs[i] is never shorter than msgs[:i].
        for i in range(1, len(msgs)):
            diff = (table[i] - table[:i]) % mod
            mx = int(_row_max(diff, mod).max())
            st = stats.setdefault(int(ells[i]), [0, 0])
            st[0] += i * mod
            st[1] = max(st[1], mx)
    else:
        for i, j in pairs:
            if msgs[i].length < msgs[j].length:
                i, j = j, i
            diff = ((table[i] - table[j]) % mod)[None, :]
            mx = int(_row_max(diff, mod)[0])
            st = stats.setdefault(int(ells[i]), [0, 0])
            st[0] += mod
            st[1] = max(st[1], mx)
    return stats


def sweep_report(tp: ToyParams, max_len_bits: int, samples: int = 0, kinds: Sequence[str] = KINDS,
                 cs: Sequence[int] = (1, 2), seed: int = 0) -> list[ReportRow]:
    """Worst observed differential count against the bound, per (kind, ell, c).

    Pairs are exhaustive when there are at most EXHAUSTIVE_LIMIT strings,
    otherwise ``samples`` random distinct pairs are drawn.  Differences
    alpha are always exhaustive.
    """
    msgs = all_strings(max_len_bits)
    pairs = None
    if len(msgs) > EXHAUSTIVE_LIMIT:
        if samples <= 0:
            raise ValueError("too many strings for an exhaustive sweep; pass samples > 0")
        rng = random.Random(seed)
        pairs = []
        while len(pairs) < samples:
            i, j = rng.randrange(len(msgs)), rng.randrange(len(msgs))
            if i != j:
                pairs.append((i, j))
    rows = []
    for kind in kinds:
        for c in (cs if kind == "decbrw" else (1,)):
            stats = _sweep_kind(kind, c, tp, msgs, pairs)
            for ell in sorted(stats):
                queries, mx = stats[ell]
                bound = axu_bound(kind, ell, c, tp)
                scaled = bound * 2 ** tp.k
                rows.append(ReportRow(kind, ell, c, tp.label(), queries, mx, int(scaled),
                                      mx <= scaled, bound >= 1))
    return rows


def report_csv(rows: Sequence[ReportRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.as_csv_row())
    return buf.getvalue()


def max_solutions(P: DensePoly, P2: DensePoly, tp: ToyParams) -> int:
    """Most tau in F_p sharing one value of (P mod p mod 2^mu) - (P2 mod p mod 2^mu)."""
    p, mod = tp.p, 2 ** tp.mu
    x = np.arange(p, dtype=np.int64)
    a = np.zeros_like(x)
    b = np.zeros_like(x)
    for co in reversed(P.coeffs):
        a = (a * x + co) % p
    for co in reversed(P2.coeffs):
        b = (b * x + co) % p
    diff = ((a % mod) - (b % mod)) % mod
    return int(np.bincount(diff, minlength=mod).max())


def truncation_root_check(tp: ToyParams, trials: int, max_degree: int, seed: int = 0) -> list[tuple[int, int, int]]:
    """Random distinct polynomial pairs with zero constant term.

    Returns (degree of difference, worst solution count, allowed count) per
    trial; allowed = 2^(m - mu + 1) * degree.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < trials:
        da, db = rng.randint(1, max_degree), rng.randint(1, max_degree)
        P = DensePoly.make([0] + [rng.randrange(tp.p) for _ in range(da)], tp.p)
        P2 = DensePoly.make([0] + [rng.randrange(tp.p) for _ in range(db)], tp.p)
        dd = poly_sub(P, P2).degree
        if dd < 1:
            continue
        out.append((dd, max_solutions(P, P2, tp), 2 ** (tp.m - tp.mu + 1) * dd))
    return out


@dataclass(frozen=True)
class DegreeCase:
    ell: int
    c: int
    label: str
    degree: int
    lower_ok: bool
    upper_ok: bool


def degree_bounds(ell: int, c: int) -> tuple[int, int, bool]:
    """(exclusive lower, upper, upper_inclusive) for deg Q of an ell-block message."""
    if ell % c == 0:
        return ell + 1, 2 * ell + 1, True
    return ell + 1, 2 * ell + 2 * c + 1, False


def degree_law_cases(ell_max: int = 64, c_max: int = 5, p: int = 8191, n: int = 11,
                     seed: int = 0) -> list[DegreeCase]:
    """Symbolic deg Q for every (ell, c) on random, all-zero and all-one messages."""
    rng = random.Random(seed)
    cases = []
    for ell in range(1, ell_max + 1):
        L = ell * n
        msgs = {
            "random": [rng.randrange(1 << n) for _ in range(ell)],
            "zeros": [0] * ell,
            "ones": [(1 << n) - 1] * ell,
        }
        for c in range(1, c_max + 1):
            lo, hi, inclusive = degree_bounds(ell, c)
            for label, blocks in msgs.items():
                deg = build_Q_symbolic(blocks, L, c, p).degree
                upper = deg <= hi if inclusive else deg < hi
                cases.append(DegreeCase(ell, c, label, deg, deg > lo, upper))
    return cases


def toy_oracle_digest(kind: str, x: Bits, tau: int, tp: ToyParams, c: int = 1) -> int:
    """Single-key digest through the big-integer oracle on the toy blocks."""
    scheme = "pad1" if kind == "polyhash" else "pad2"
    blocks = toy_format(x, tp, scheme)
    cc = 1 if kind != "decbrw" else c
    return oracle_hash_blocks(kind, tau, blocks, x.length, tp.p, tp.mu, cc)
