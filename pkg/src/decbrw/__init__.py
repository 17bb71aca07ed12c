"""Polynomial and BRW-based universal hashing over 2^130 - 5 and 2^127 - 1."""

from .counters import OpCounters
from .errors import (AccumulationOverflow, BoundViolation, DecBrwError, InvalidC, LeafTooLong,
                     MixedBounds, OverlongInput, ParamsTooLarge, SchemeMismatch)
from .field import P1271, P1271_4L, P1305, Bound, FieldElement, PrimeConfig, get_config
from .hashes import (BlockStream, DecBrwKeySchedule, Pad, PolyKeySchedule, brwhash,
                     dec_brw_hash_scalar, dec_brw_hash_vec4, format_pad, hash_bytes, key_from_bytes,
                     poly1305_compat, polyhash_scalar, polyhash_vec4)

__version__ = "0.1.0"

__all__ = [
    "AccumulationOverflow", "BlockStream", "Bound", "BoundViolation", "DecBrwError",
    "DecBrwKeySchedule", "FieldElement", "InvalidC", "LeafTooLong", "MixedBounds", "OpCounters",
    "OverlongInput", "P1271", "P1271_4L", "P1305", "Pad", "ParamsTooLarge", "PolyKeySchedule",
    "PrimeConfig", "SchemeMismatch", "brwhash", "dec_brw_hash_scalar", "dec_brw_hash_vec4",
    "format_pad", "get_config", "hash_bytes", "key_from_bytes", "poly1305_compat",
    "polyhash_scalar", "polyhash_vec4",
]
