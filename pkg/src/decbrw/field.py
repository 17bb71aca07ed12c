"""Limb arithmetic modulo 2^130 - 5 and 2^127 - 1.

Elements are tuples of Python ints standing in for 64-bit words.  Every
element carries a bound class so the width arguments behind lazy reduction
can be checked at run time; the checks sit under ``if __debug__`` and vanish
with ``python -O``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum
from typing import NamedTuple

from .errors import AccumulationOverflow, BoundViolation, OverlongInput

WORD_MAX = (1 << 64) - 1


@dataclass(frozen=True)
class PrimeConfig:
    """Parameters of one prime together with its limb representation.

    ``chain`` lists the carry steps of the partial reduction as
    ``(src, dst, bits, factor)``: the bits of limb ``src`` above ``bits`` are
    multiplied by ``factor`` and added to limb ``dst``.
    ``partial_caps`` are the per-limb bit widths guaranteed after the chain.
    """

    name: str
    prime_id: str
    m: int
    n: int
    k: int
    mu: int
    delta: int
    limb_count: int
    limb_bits: int
    fold_constant: int
    chain: tuple[tuple[int, int, int, int], ...]
    partial_caps: tuple[int, ...]
    p: int = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "p", (1 << self.m) - self.delta)

    @property
    def limb_mask(self) -> int:
        return (1 << self.limb_bits) - 1

    @property
    def top_bits(self) -> int:
        """Width of the top limb in canonical form."""
        return self.m - (self.limb_count - 1) * self.limb_bits

    @property
    def block_bytes(self) -> int:
        return self.n // 8

    @property
    def digest_bytes(self) -> int:
        return (self.mu + 7) // 8

    @property
    def narrow(self) -> bool:
        """True when multiplicands must fit 32 bits (no headroom for sums)."""
        return self.limb_count * self.limb_bits == 128

    @property
    def max_input_bytes(self) -> int:
        return 17 if self.prime_id == "1305" else 16


P1305 = PrimeConfig(
    name="P1305", prime_id="1305", m=130, n=128, k=128, mu=128, delta=5,
    limb_count=5, limb_bits=26, fold_constant=5,
    chain=((0, 1, 26, 1), (1, 2, 26, 1), (2, 3, 26, 1), (3, 4, 26, 1),
           (4, 0, 26, 5), (0, 1, 26, 1)),
    partial_caps=(26, 27, 26, 26, 26),
)

# 2^130 = 8 * 2^127, so products fold with 8; the chain starts at h3 and
# trims h4 to 23 bits, where 2^127 = 1.
P1271 = PrimeConfig(
    name="P1271", prime_id="1271", m=127, n=120, k=126, mu=126, delta=1,
    limb_count=5, limb_bits=26, fold_constant=8,
    chain=((3, 4, 26, 1), (4, 0, 23, 1), (0, 1, 26, 1), (1, 2, 26, 1),
           (2, 3, 26, 1), (3, 4, 26, 1)),
    partial_caps=(26, 26, 26, 26, 24),
)

P1271_4L = PrimeConfig(
    name="P1271_4L", prime_id="1271", m=127, n=120, k=126, mu=126, delta=1,
    limb_count=4, limb_bits=32, fold_constant=2,
    chain=((0, 1, 32, 1), (1, 2, 32, 1), (2, 3, 32, 1), (3, 0, 32, 2),
           (0, 1, 32, 1), (1, 2, 32, 1), (2, 3, 32, 1)),
    partial_caps=(32, 32, 32, 32),
)

CONFIGS = {"1305": P1305, "1271": P1271}


def get_config(prime: str | int, limbs: int = 5) -> PrimeConfig:
    prime = str(prime)
    if prime == "1271" and limbs == 4:
        return P1271_4L
    if limbs != 5 or prime not in CONFIGS:
        raise ValueError(f"unsupported prime/limb combination: {prime}/{limbs}")
    return CONFIGS[prime]


class Bound(IntEnum):
    """How far an element's limbs may exceed their nominal widths.

    LOOSE is the sum of two partially reduced values: one spare bit per limb,
    still a valid multiplicand on the 5-limb paths.
    """

    CANONICAL = 0
    PARTIAL = 1
    LOOSE = 2
    UNREDUCED = 3


class FieldElement(NamedTuple):
    limbs: tuple[int, ...]
    bound: Bound


class TildeElement(NamedTuple):
    limbs: tuple[int, ...]


def _split(x: int, cfg: PrimeConfig) -> tuple[int, ...]:
    b, mask = cfg.limb_bits, cfg.limb_mask
    return tuple((x >> (b * i)) & mask for i in range(cfg.limb_count))


def _classify(x: int, limbs: tuple[int, ...], cfg: PrimeConfig) -> Bound:
    if x < cfg.p:
        return Bound.CANONICAL
    if all(v >> c == 0 for v, c in zip(limbs, cfg.partial_caps)):
        return Bound.PARTIAL
    return Bound.UNREDUCED


def fe_from_int(x: int, cfg: PrimeConfig) -> FieldElement:
    """Split a nonnegative integer below 2^(limb_count*limb_bits) into limbs."""
    if x < 0 or x >> (cfg.limb_count * cfg.limb_bits):
        raise OverlongInput(f"integer does not fit {cfg.limb_count} limbs")
    limbs = _split(x, cfg)
    return FieldElement(limbs, _classify(x, limbs, cfg))


def fe_from_le_bytes(data: bytes, cfg: PrimeConfig) -> FieldElement:
    if len(data) > cfg.max_input_bytes:
        raise OverlongInput(f"{len(data)} bytes exceeds {cfg.max_input_bytes}")
    x = int.from_bytes(data, "little")
    if x >> cfg.m:
        raise OverlongInput(f"value does not fit {cfg.m} bits")
    return fe_from_int(x, cfg)


def fe_to_int(e: FieldElement | TildeElement, cfg: PrimeConfig) -> int:
    """Integer value under the limb radix (not reduced mod p)."""
    b = cfg.limb_bits
    return sum(v << (b * i) for i, v in enumerate(e.limbs))


def fe_value(e: FieldElement, cfg: PrimeConfig) -> int:
    return fe_to_int(e, cfg) % cfg.p


ZERO5 = FieldElement((0, 0, 0, 0, 0), Bound.CANONICAL)
ZERO4 = FieldElement((0, 0, 0, 0), Bound.CANONICAL)


def fe_zero(cfg: PrimeConfig) -> FieldElement:
    return ZERO4 if cfg.limb_count == 4 else ZERO5


def _check_operand(e: FieldElement, cfg: PrimeConfig) -> None:
    if e.bound is Bound.UNREDUCED:
        raise BoundViolation("unreduced operand passed to a multiplication")
    if max(e.limbs) >> (32 if cfg.narrow else 28):
        raise BoundViolation("multiplicand limb exceeds its operand width")


def _mul5(e: tuple[int, ...], f: tuple[int, ...], c: int) -> tuple[int, ...]:
    e0, e1, e2, e3, e4 = e
    f0, f1, f2, f3, f4 = f
    return (
        e0 * f0 + c * (e1 * f4 + e2 * f3 + e3 * f2 + e4 * f1),
        e0 * f1 + e1 * f0 + c * (e2 * f4 + e3 * f3 + e4 * f2),
        e0 * f2 + e1 * f1 + e2 * f0 + c * (e3 * f4 + e4 * f3),
        e0 * f3 + e1 * f2 + e2 * f1 + e3 * f0 + c * (e4 * f4),
        e0 * f4 + e1 * f3 + e2 * f2 + e3 * f1 + e4 * f0,
    )


def _mul5_tilde(e: tuple[int, ...], t: tuple[int, ...], f: tuple[int, ...]) -> tuple[int, ...]:
    e0, e1, e2, e3, e4 = e
    t1, t2, t3, t4 = t
    f0, f1, f2, f3, f4 = f
    return (
        e0 * f0 + t1 * f4 + t2 * f3 + t3 * f2 + t4 * f1,
        e0 * f1 + e1 * f0 + t2 * f4 + t3 * f3 + t4 * f2,
        e0 * f2 + e1 * f1 + e2 * f0 + t3 * f4 + t4 * f3,
        e0 * f3 + e1 * f2 + e2 * f1 + e3 * f0 + t4 * f4,
        e0 * f4 + e1 * f3 + e2 * f2 + e3 * f1 + e4 * f0,
    )


def _mul4(e: tuple[int, ...], f: tuple[int, ...]) -> tuple[int, ...]:
    # Each 64-bit cross product is split into 32-bit halves before it is
    # accumulated: the low half lands at position i+j, the high half at
    # i+j+1, and anything at position >= 4 wraps around doubled.
    M = 0xFFFFFFFF
    h = [0, 0, 0, 0]
    hi = [0, 0, 0, 0]
    for i in range(4):
        ei = e[i]
        for j in range(4):
            pr = ei * f[j]
            pos = i + j
            if pos < 4:
                h[pos] += pr & M
            else:
                hi[pos - 4] += pr & M
            pos += 1
            if pos < 4:
                h[pos] += pr >> 32
            else:
                hi[pos - 4] += pr >> 32
    return (h[0] + 2 * hi[0], h[1] + 2 * hi[1], h[2] + 2 * hi[2], h[3] + 2 * hi[3])


def _check_product(h: tuple[int, ...], e: FieldElement, f: FieldElement, cfg: PrimeConfig) -> None:
    if cfg.narrow:
        cap = 37
    else:
        cap = 58 if e.bound <= Bound.PARTIAL and f.bound <= Bound.PARTIAL else 61
    if max(h) >> cap:
        raise BoundViolation(f"product limb exceeds 2^{cap}")


def unreduced_mult(e: FieldElement, f: FieldElement, cfg: PrimeConfig) -> FieldElement:
    if __debug__:
        _check_operand(e, cfg)
        _check_operand(f, cfg)
    if cfg.narrow:
        h = _mul4(e.limbs, f.limbs)
    else:
        h = _mul5(e.limbs, f.limbs, cfg.fold_constant)
    if __debug__:
        _check_product(h, e, f, cfg)
    return FieldElement(h, Bound.UNREDUCED)


def precompute_tilde(e: FieldElement, cfg: PrimeConfig) -> TildeElement:
    c = cfg.fold_constant
    return TildeElement(tuple(c * v for v in e.limbs[1:]))


def unreduced_mult_tilde(e: FieldElement, e_tilde: TildeElement, f: FieldElement,
                         cfg: PrimeConfig) -> FieldElement:
    """Product using precomputed folded limbs of ``e``.

    The 4-limb schedule doubles the wrapped halves after splitting, so a
    pre-doubled operand would overflow a word; that path ignores the tilde
    and runs the plain schedule.
    """
    if __debug__:
        _check_operand(e, cfg)
        _check_operand(f, cfg)
    if cfg.narrow:
        h = _mul4(e.limbs, f.limbs)
    else:
        h = _mul5_tilde(e.limbs, e_tilde.limbs, f.limbs)
    if __debug__:
        _check_product(h, e, f, cfg)
    return FieldElement(h, Bound.UNREDUCED)


def partial_reduce(h: FieldElement, cfg: PrimeConfig) -> FieldElement:
    x = list(h.limbs)
    if __debug__ and max(x) >> 63:
        raise BoundViolation("partial_reduce input limb exceeds 2^63")
    for src, dst, bits, factor in cfg.chain:
        c = x[src] >> bits
        x[src] &= (1 << bits) - 1
        x[dst] += c * factor
    if cfg.narrow:
        # The second pass can push h3 to exactly 2^32; fold once more.
        while x[3] >> 32:
            c = x[3] >> 32
            x[3] &= 0xFFFFFFFF
            x[0] += 2 * c
            for i in range(3):
                c = x[i] >> 32
                x[i] &= 0xFFFFFFFF
                x[i + 1] += c
    out = FieldElement(tuple(x), Bound.PARTIAL)
    if __debug__ and any(v >> c for v, c in zip(x, cfg.partial_caps)):
        raise BoundViolation("partial_reduce left a limb above its cap")
    return out


def full_reduce(e: FieldElement, cfg: PrimeConfig) -> FieldElement:
    """Canonical representative: carry to nominal widths, then freeze."""
    x = list(e.limbs)
    last = cfg.limb_count - 1
    b, mask = cfg.limb_bits, cfg.limb_mask
    tb = cfg.top_bits
    top_mask = (1 << tb) - 1
    while True:
        for i in range(last):
            x[i + 1] += x[i] >> b
            x[i] &= mask
        c = x[last] >> tb
        if not c:
            break
        x[last] &= top_mask
        x[0] += c * cfg.delta
    # Now value < 2^m; subtract p (add delta, drop bit m) when value >= p.
    g = list(x)
    g[0] += cfg.delta
    for i in range(last):
        g[i + 1] += g[i] >> b
        g[i] &= mask
    sel = -(g[last] >> tb)
    g[last] &= top_mask
    limbs = tuple((xi & ~sel) | (gi & sel) for xi, gi in zip(x, g))
    return FieldElement(limbs, Bound.CANONICAL)


def unreduced_add(a: FieldElement, b: FieldElement) -> FieldElement:
    limbs = tuple(x + y for x, y in zip(a.limbs, b.limbs))
    if __debug__ and max(limbs) > WORD_MAX:
        raise AccumulationOverflow("limb sum exceeds 64 bits")
    if a.bound <= Bound.PARTIAL and b.bound <= Bound.PARTIAL:
        return FieldElement(limbs, Bound.LOOSE)
    return FieldElement(limbs, Bound.UNREDUCED)


def carry_operand(e: FieldElement, cfg: PrimeConfig) -> FieldElement:
    """Make a LOOSE value usable as a multiplicand on the 4-limb path."""
    if cfg.narrow and e.bound is Bound.LOOSE:
        return partial_reduce(e, cfg)
    return e


def fe_mult(e: FieldElement, f: FieldElement, cfg: PrimeConfig) -> FieldElement:
    return partial_reduce(
        unreduced_mult(carry_operand(e, cfg), carry_operand(f, cfg), cfg), cfg)


def fe_square(e: FieldElement, cfg: PrimeConfig) -> FieldElement:
    return fe_mult(e, e, cfg)


def digest_mod_2mu(e: FieldElement, cfg: PrimeConfig) -> bytes:
    if __debug__ and e.bound is not Bound.CANONICAL:
        raise BoundViolation("digest requires a canonical element")
    v = fe_to_int(e, cfg) & ((1 << cfg.mu) - 1)
    return v.to_bytes(cfg.digest_bytes, "little")
