"""Four field elements packed limb-major, with lane-wise arithmetic.

Word ``j`` of a :class:`PackedLanes` is a 256-bit unit holding limb ``j`` of
all four elements, lane 0 in the least significant 64-bit slot.  Here a
unit is one row of a ``(limb_count, 4)`` uint64 array, so ``tobytes()`` on
the array is the memory image of the packed vector.

Every operation matches the scalar routine in :mod:`decbrw.field` limb for
limb in each lane.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import AccumulationOverflow, BoundViolation, MixedBounds
from .field import Bound, FieldElement, PrimeConfig, TildeElement

U64 = np.uint64
_M32 = U64(0xFFFFFFFF)


class PackedLanes(NamedTuple):
    words: np.ndarray  # (limb_count, 4) uint64
    bound: Bound

    def to_bytes(self) -> bytes:
        return np.ascontiguousarray(self.words, dtype="<u8").tobytes()


class PackedTilde(NamedTuple):
    words: np.ndarray  # (limb_count - 1, 4) uint64

    def to_bytes(self) -> bytes:
        return np.ascontiguousarray(self.words, dtype="<u8").tobytes()


def pack4(elems: Sequence[FieldElement], cfg: PrimeConfig) -> PackedLanes:
    if len(elems) != 4:
        raise ValueError("pack4 takes exactly four elements")
    bound = elems[0].bound
    if __debug__ and any(e.bound != bound for e in elems):
        raise MixedBounds("lanes must share one bound class")
    words = np.array([e.limbs for e in elems], dtype=U64).T.copy()
    return PackedLanes(words, bound)


def unpack4(u: PackedLanes) -> tuple[FieldElement, ...]:
    cols = u.words.T.tolist()
    return tuple(FieldElement(tuple(c), u.bound) for c in cols)


def lane_broadcast(e: FieldElement) -> PackedLanes:
    col = np.array(e.limbs, dtype=U64)[:, None]
    return PackedLanes(np.repeat(col, 4, axis=1), e.bound)


def lane_precompute_tilde(u: PackedLanes, cfg: PrimeConfig) -> PackedTilde:
    return PackedTilde(u.words[1:] * U64(cfg.fold_constant))


@lru_cache(maxsize=None)
def _index5() -> np.ndarray:
    # Row k, column j selects the operand limb multiplying f_j in h_k:
    # e_{k-j} when j <= k, else the folded limb e~_{k-j+5} stored at
    # row 4 + (k-j+5) of the stacked [e; e~] array.
    idx = np.empty((5, 5), dtype=np.intp)
    for k in range(5):
        for j in range(5):
            idx[k, j] = k - j if j <= k else k - j + 9
    return idx


@lru_cache(maxsize=None)
def _weights4() -> tuple[np.ndarray, np.ndarray]:
    lo = np.zeros((4, 4, 4), dtype=U64)
    hi = np.zeros((4, 4, 4), dtype=U64)
    for i in range(4):
        for j in range(4):
            pos = i + j
            lo[pos % 4, i, j] = 1 if pos < 4 else 2
            pos += 1
            hi[pos % 4, i, j] = 1 if pos < 4 else 2
    return lo, hi


def _check_lane_operand(u: PackedLanes, cfg: PrimeConfig) -> None:
    if u.bound is Bound.UNREDUCED:
        raise BoundViolation("unreduced lanes passed to a multiplication")
    cap = 32 if cfg.narrow else 28
    if int(u.words.max(initial=0)) >> cap:
        raise BoundViolation(f"lane multiplicand limb exceeds {cap} bits")


def _mul4(e: np.ndarray, f: np.ndarray) -> np.ndarray:
    prods = e[:, None, :] * f[None, :, :]
    wlo, whi = _weights4()
    lo = prods & _M32
    hi = prods >> U64(32)
    return (np.einsum("kij,ijl->kl", wlo, lo) + np.einsum("kij,ijl->kl", whi, hi)).astype(U64)


def _mul5(stacked: np.ndarray, f: np.ndarray) -> np.ndarray:
    return (stacked[_index5()] * f).sum(axis=1, dtype=U64)


def lane_unreduced_mult(u: PackedLanes, v: PackedLanes, cfg: PrimeConfig) -> PackedLanes:
    if __debug__:
        _check_lane_operand(u, cfg)
        _check_lane_operand(v, cfg)
    if cfg.narrow:
        return PackedLanes(_mul4(u.words, v.words), Bound.UNREDUCED)
    stacked = np.concatenate([u.words, u.words[1:] * U64(cfg.fold_constant)])
    return PackedLanes(_mul5(stacked, v.words), Bound.UNREDUCED)


def lane_unreduced_mult_tilde(u: PackedLanes, u_tilde: PackedTilde, v: PackedLanes,
                              cfg: PrimeConfig) -> PackedLanes:
    if __debug__:
        _check_lane_operand(u, cfg)
        _check_lane_operand(v, cfg)
    if cfg.narrow:
        return PackedLanes(_mul4(u.words, v.words), Bound.UNREDUCED)
    stacked = np.concatenate([u.words, u_tilde.words])
    return PackedLanes(_mul5(stacked, v.words), Bound.UNREDUCED)


def lane_partial_reduce(u: PackedLanes, cfg: PrimeConfig) -> PackedLanes:
    w = u.words.copy()
    if __debug__ and int(w.max(initial=0)) >> 63:
        raise BoundViolation("lane_partial_reduce input limb exceeds 2^63")
    for src, dst, bits, factor in cfg.chain:
        c = w[src] >> U64(bits)
        w[src] &= U64((1 << bits) - 1)
        w[dst] += c * U64(factor) if factor != 1 else c
    if cfg.narrow:
        while (w[3] >> U64(32)).any():
            c = w[3] >> U64(32)
            w[3] &= _M32
            w[0] += U64(2) * c
            for i in range(3):
                c = w[i] >> U64(32)
                w[i] &= _M32
                w[i + 1] += c
    if __debug__:
        for row, cap in zip(w, cfg.partial_caps):
            if (row >> U64(cap)).any():
                raise BoundViolation("lane_partial_reduce left a limb above its cap")
    return PackedLanes(w, Bound.PARTIAL)


def lane_add(u: PackedLanes, v: PackedLanes) -> PackedLanes:
    w = u.words + v.words
    if __debug__ and (w < u.words).any():
        raise AccumulationOverflow("lane limb sum exceeds 64 bits")
    if u.bound <= Bound.PARTIAL and v.bound <= Bound.PARTIAL:
        return PackedLanes(w, Bound.LOOSE)
    return PackedLanes(w, Bound.UNREDUCED)


def lane_carry_operand(u: PackedLanes, cfg: PrimeConfig) -> PackedLanes:
    if cfg.narrow and u.bound is Bound.LOOSE:
        return lane_partial_reduce(u, cfg)
    return u


def lane_sum(u: PackedLanes) -> FieldElement:
    """Add the four lanes into one scalar element without reducing."""
    s = u.words.sum(axis=1, dtype=object)
    limbs = tuple(int(x) for x in s)
    if __debug__ and any(x >> 64 for x in limbs):
        raise AccumulationOverflow("lane sum exceeds 64 bits")
    return FieldElement(limbs, Bound.UNREDUCED)


def tilde_to_scalar(t: PackedTilde, lane: int) -> TildeElement:
    return TildeElement(tuple(int(x) for x in t.words[:, lane]))
