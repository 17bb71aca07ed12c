"""Counting front-ends over the scalar and lane arithmetic.

The BRW schedule and the Horner loops are written once against this small
interface (``mul``, ``mul_fixed``, ``add``, ``red``) and run unchanged on
single elements or on packed lanes.
"""

from __future__ import annotations

import numpy as np

from . import field as fa
from . import lanes as la
from .counters import OpCounters
from .field import Bound, FieldElement, PrimeConfig


class ScalarOps:
    __slots__ = ("cfg", "counters", "zero")

    def __init__(self, cfg: PrimeConfig, counters: OpCounters | None = None) -> None:
        self.cfg = cfg
        self.counters = counters if counters is not None else OpCounters()
        self.zero = fa.fe_zero(cfg)

    def _operand(self, e: FieldElement) -> FieldElement:
        if self.cfg.narrow and e.bound is Bound.LOOSE:
            self.counters.operand_carries += 1
            return fa.partial_reduce(e, self.cfg)
        return e

    def mul(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self.counters.scalar_unreduced_mults += 1
        return fa.unreduced_mult(self._operand(a), self._operand(b), self.cfg)

    def mul_fixed(self, key: FieldElement, key_tilde: fa.TildeElement, b: FieldElement) -> FieldElement:
        self.counters.scalar_unreduced_mults += 1
        return fa.unreduced_mult_tilde(key, key_tilde, self._operand(b), self.cfg)

    def add(self, a: FieldElement, b: FieldElement) -> FieldElement:
        return fa.unreduced_add(a, b)

    def red(self, a: FieldElement) -> FieldElement:
        self.counters.scalar_reductions += 1
        return fa.partial_reduce(a, self.cfg)

    def full_mult(self, a: FieldElement, b: FieldElement) -> FieldElement:
        self.counters.full_mults += 1
        return fa.partial_reduce(
            fa.unreduced_mult(self._operand(a), self._operand(b), self.cfg), self.cfg)

    def square(self, a: FieldElement) -> FieldElement:
        self.counters.squarings += 1
        a = self._operand(a)
        return fa.partial_reduce(fa.unreduced_mult(a, a, self.cfg), self.cfg)


class LaneOps:
    __slots__ = ("cfg", "counters", "zero")

    def __init__(self, cfg: PrimeConfig, counters: OpCounters | None = None) -> None:
        self.cfg = cfg
        self.counters = counters if counters is not None else OpCounters()
        self.zero = la.PackedLanes(np.zeros((cfg.limb_count, 4), dtype=np.uint64), Bound.CANONICAL)

    def _operand(self, u: la.PackedLanes) -> la.PackedLanes:
        if self.cfg.narrow and u.bound is Bound.LOOSE:
            self.counters.operand_carries += 1
            return la.lane_partial_reduce(u, self.cfg)
        return u

    def mul(self, a: la.PackedLanes, b: la.PackedLanes) -> la.PackedLanes:
        self.counters.lane_unreduced_mults += 1
        return la.lane_unreduced_mult(self._operand(a), self._operand(b), self.cfg)

    def mul_fixed(self, key: la.PackedLanes, key_tilde: la.PackedTilde, b: la.PackedLanes) -> la.PackedLanes:
        self.counters.lane_unreduced_mults += 1
        return la.lane_unreduced_mult_tilde(key, key_tilde, self._operand(b), self.cfg)

    def add(self, a: la.PackedLanes, b: la.PackedLanes) -> la.PackedLanes:
        return la.lane_add(a, b)

    def red(self, a: la.PackedLanes) -> la.PackedLanes:
        self.counters.lane_reductions += 1
        return la.lane_partial_reduce(a, self.cfg)
