"""BRW polynomial evaluation with the leaf-and-stack schedule.

Blocks are consumed in chunks of 2^t: the first 2^t - 1 blocks of a chunk go
through a straight-line leaf, the last block joins the leaf with the subtrees
already on the stack.  Leaves are generated once per block count from the
recursive definition and cached, so nothing recurses at hash time.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Callable, Sequence

import numpy as np

from . import field as fa
from . import lanes as la
from .arith import LaneOps, ScalarOps
from .counters import OpCounters
from .errors import LeafTooLong
from .field import Bound, FieldElement, PrimeConfig

T_VALUES = (2, 3, 4, 5)


def ntz(i: int) -> int:
    if i <= 0:
        raise ValueError("ntz is undefined for non-positive integers")
    return (i & -i).bit_length() - 1


def wt(i: int) -> int:
    if i < 0:
        raise ValueError("wt takes a non-negative integer")
    return bin(i).count("1")


def floor_lg(x: int) -> int:
    return x.bit_length() - 1


def check_t(t: int) -> None:
    if t not in T_VALUES:
        raise ValueError(f"t must be one of {T_VALUES}, got {t}")


@dataclass
class BrwKeyPowers:
    """Key powers tau^(2^j) for j = 0..J with folded companions.

    ``lanes``/``lane_tildes`` hold lane broadcasts once :meth:`with_lanes`
    has been called.
    """

    cfg: PrimeConfig
    pows: list[FieldElement]
    tildes: list[fa.TildeElement]
    lanes: list[la.PackedLanes] | None = None
    lane_tildes: list[la.PackedTilde] | None = None

    @classmethod
    def build(cls, tau: FieldElement, J: int, ops: ScalarOps) -> BrwKeyPowers:
        kp = cls(ops.cfg, [tau], [fa.precompute_tilde(tau, ops.cfg)])
        kp.extend(J, ops)
        return kp

    @property
    def J(self) -> int:
        return len(self.pows) - 1

    def extend(self, J: int, ops: ScalarOps) -> None:
        """Square until tau^(2^J) is present."""
        while len(self.pows) <= J:
            nxt = ops.square(self.pows[-1])
            self.pows.append(nxt)
            self.tildes.append(fa.precompute_tilde(nxt, self.cfg))
            if self.lanes is not None:
                self._add_lane(nxt)

    def _add_lane(self, e: FieldElement) -> None:
        b = la.lane_broadcast(e)
        self.lanes.append(b)
        self.lane_tildes.append(la.lane_precompute_tilde(b, self.cfg))

    def with_lanes(self) -> BrwKeyPowers:
        if self.lanes is None:
            self.lanes, self.lane_tildes = [], []
            for e in self.pows:
                self._add_lane(e)
        return self


@dataclass
class BrwStack:
    entries: list[Any] = field(default_factory=list)
    high_water: int = 0

    def push(self, x: Any) -> None:
        self.entries.append(x)
        if len(self.entries) > self.high_water:
            self.high_water = len(self.entries)

    def pop(self) -> Any:
        return self.entries.pop()


def _leaf_source(count: int) -> str:
    lines: list[str] = []
    names = iter(range(10**6))

    def emit(expr: str) -> str:
        name = f"v{next(names)}"
        lines.append(f"    {name} = {expr}")
        return name

    def gen(n: int, o: int) -> str:
        if n == 0:
            return "ops.zero"
        if n == 1:
            return f"M[o + {o}]"
        if n == 2:
            return emit(f"add(mul_fixed(P[0], T[0], M[o + {o}]), M[o + {o + 1}])")
        if n == 3:
            return emit(f"add(mul(add(P[0], M[o + {o}]), add(P[1], M[o + {o + 1}])), M[o + {o + 2}])")
        top = 1 << floor_lg(n)
        if n == top:
            inner = gen(n - 1, o)
            return emit(f"mul(red({inner}), add(P[{floor_lg(n)}], M[o + {o + n - 1}]))")
        left = gen(top, o)
        right = gen(n - top, o + top)
        return emit(f"add({left}, {right})")

    result = gen(count, 0)
    head = [
        f"def leaf_{count}(ops, P, T, M, o):",
        "    mul = ops.mul; mul_fixed = ops.mul_fixed; add = ops.add; red = ops.red",
    ]
    return "\n".join(head + lines + [f"    return {result}"])


@lru_cache(maxsize=None)
def leaf_function(count: int) -> Callable[..., Any]:
    """Straight-line unreduced BRW over ``count`` blocks starting at offset o."""
    namespace: dict[str, Any] = {}
    exec(_leaf_source(count), namespace)
    return namespace[f"leaf_{count}"]


def brw_leaf(kp: BrwKeyPowers, blocks: Sequence[FieldElement], t: int, cfg: PrimeConfig,
             counters: OpCounters | None = None) -> FieldElement:
    check_t(t)
    if len(blocks) >= 1 << t:
        raise LeafTooLong(f"{len(blocks)} blocks do not fit a leaf for t={t}")
    ops = ScalarOps(cfg, counters)
    return leaf_function(len(blocks))(ops, kp.pows, kp.tildes, blocks, 0)


def brw_core(ops: Any, P: Sequence[Any], T: Sequence[Any], M: Sequence[Any], ell: int, t: int,
             stack: BrwStack | None = None) -> Any:
    """BRW over M[0:ell] returning a partially reduced value (ell >= 1)."""
    step = 1 << t
    q, r = divmod(ell, step)
    if stack is None:
        stack = BrwStack()
    if q:
        full = leaf_function(step - 1)
        mul, add, red = ops.mul, ops.add, ops.red
        for i in range(1, q + 1):
            o = step * (i - 1)
            tmp = full(ops, P, T, M, o)
            k = ntz(i)
            for _ in range(k):
                tmp = add(tmp, stack.pop())
            tmp = mul(red(tmp), add(M[o + step - 1], P[t + k]))
            stack.push(tmp)
    tmp = leaf_function(r)(ops, P, T, M, step * q)
    for _ in range(wt(q)):
        tmp = ops.add(tmp, stack.pop())
    return ops.red(tmp)


def brw_squarings(ell: int) -> int:
    """Key-ladder length needed to evaluate BRW over ell blocks."""
    return floor_lg(ell) if ell > 2 else 0


def compute_brw(tau: FieldElement, blocks: Sequence[FieldElement], t: int, cfg: PrimeConfig,
                counters: OpCounters | None = None, stack: BrwStack | None = None) -> FieldElement:
    check_t(t)
    ell = len(blocks)
    if ell == 0:
        return fa.fe_zero(cfg)
    ops = ScalarOps(cfg, counters)
    kp = BrwKeyPowers.build(tau, brw_squarings(ell), ops)
    return fa.full_reduce(brw_core(ops, kp.pows, kp.tildes, blocks, ell, t, stack), cfg)


class LaneBlocks:
    """Index view over an (n, limb_count, 4) array yielding packed blocks."""

    __slots__ = ("arr",)

    def __init__(self, arr: np.ndarray) -> None:
        self.arr = arr

    def __len__(self) -> int:
        return self.arr.shape[0]

    def __getitem__(self, i: int) -> la.PackedLanes:
        return la.PackedLanes(self.arr[i], Bound.CANONICAL)


def lane_brw_core(kp: BrwKeyPowers, lane_blocks: np.ndarray, t: int, cfg: PrimeConfig,
                  counters: OpCounters, stack: BrwStack | None = None) -> la.PackedLanes:
    kp.with_lanes()
    ops = LaneOps(cfg, counters)
    n = lane_blocks.shape[0]
    return brw_core(ops, kp.lanes, kp.lane_tildes, LaneBlocks(lane_blocks), n, t, stack)


def compute_brw_vec4(tau: FieldElement, lane_blocks: np.ndarray, t: int, cfg: PrimeConfig,
                     counters: OpCounters | None = None,
                     stack: BrwStack | None = None) -> tuple[FieldElement, ...]:
    """Four BRW evaluations at once; ``lane_blocks`` has shape (n, limb_count, 4)."""
    check_t(t)
    lane_blocks = np.ascontiguousarray(lane_blocks, dtype=np.uint64)
    n = lane_blocks.shape[0]
    if n == 0:
        return (fa.fe_zero(cfg),) * 4
    counters = counters if counters is not None else OpCounters()
    kp = BrwKeyPowers.build(tau, brw_squarings(n), ScalarOps(cfg, counters))
    res = lane_brw_core(kp, lane_blocks, t, cfg, counters, stack)
    return tuple(fa.full_reduce(e, cfg) for e in la.unpack4(res))
