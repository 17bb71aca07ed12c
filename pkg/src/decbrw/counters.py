"""Operation tallies used to check the closed-form cost laws."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields


@dataclass
class OpCounters:
    """Counts of primitive field operations performed by one or more calls.

    ``full_mults`` are multiplications that are reduced immediately (key
    schedule powers, the decimation combine and the outer wrap).  They are
    not double counted in the unreduced/reduction fields.
    ``operand_carries`` only moves on the 4-limb representation, where a sum
    of two reduced values must be carried back under 32 bits before it can
    be used as a multiplicand.
    """

    scalar_unreduced_mults: int = 0
    scalar_reductions: int = 0
    full_mults: int = 0
    squarings: int = 0
    lane_unreduced_mults: int = 0
    lane_reductions: int = 0
    operand_carries: int = 0

    def merge(self, other: OpCounters) -> OpCounters:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def reset(self) -> None:
        for f in fields(self):
            setattr(self, f.name, 0)

    def as_dict(self) -> dict[str, int]:
        return asdict(self)

    @property
    def total_mults(self) -> int:
        """Unreduced plus reduced-immediately multiplications (scalar only)."""
        return self.scalar_unreduced_mults + self.full_mults

    @property
    def total_reductions(self) -> int:
        """Partial reductions, counting each full multiplication as one."""
        return self.scalar_reductions + self.full_mults
