"""Message padding, key schedules and the three hash constructions.

Messages are byte strings read as little-endian blocks of n/8 bytes.  Each
construction comes in a schedule-taking form (the schedule can be built once
and reused) and is reachable in one shot through :func:`hash_bytes`.
"""

from __future__ import annotations

from enum import Enum
from typing import Sequence

import numpy as np

from . import field as fa
from . import lanes as la
from .arith import LaneOps, ScalarOps
from .brw import BrwKeyPowers, LaneBlocks, brw_core, brw_squarings, floor_lg, check_t
from .counters import OpCounters
from .errors import InvalidC, OverlongInput, SchemeMismatch
from .field import Bound, FieldElement, PrimeConfig

CLAMP_MASK = 0x0FFFFFFC0FFFFFFC0FFFFFFC0FFFFFFF

G_VALUES = (1, 2, 3, 4)
C_MAX = 8
ALGOS = ("polyhash", "brwhash", "decbrw", "poly1305")
BACKENDS = ("scalar", "vec4")


class Pad(str, Enum):
    PAD1 = "pad1"
    PAD2 = "pad2"


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _limbs_from_words(lo: np.ndarray, hi: np.ndarray, cfg: PrimeConfig) -> np.ndarray:
    b, mask = cfg.limb_bits, np.uint64(cfg.limb_mask)
    cols = []
    for j in range(cfg.limb_count):
        start = j * b
        if start + b <= 64:
            col = lo >> np.uint64(start)
        elif start >= 64:
            col = hi >> np.uint64(start - 64)
        else:
            col = (lo >> np.uint64(start)) | (hi << np.uint64(64 - start))
        cols.append(col & mask)
    return np.stack(cols, axis=1)


class BlockStream:
    """Padded blocks of one message as an (ell, limb_count) limb array."""

    __slots__ = ("limbs", "L", "scheme", "length_block", "cfg", "_blocks")

    def __init__(self, limbs: np.ndarray, L: int, scheme: Pad, cfg: PrimeConfig) -> None:
        self.limbs = _readonly(limbs)
        self.L = L
        self.scheme = scheme
        self.cfg = cfg
        self.length_block = fa.fe_from_int(L, cfg) if scheme is Pad.PAD2 else None
        self._blocks: list[FieldElement] | None = None

    @property
    def ell(self) -> int:
        return self.limbs.shape[0]

    @property
    def blocks(self) -> list[FieldElement]:
        if self._blocks is None:
            self._blocks = [FieldElement(tuple(r), Bound.CANONICAL) for r in self.limbs.tolist()]
        return self._blocks

    def block_values(self) -> list[int]:
        return [fa.fe_to_int(b, self.cfg) for b in self.blocks]


def format_pad(msg: bytes, scheme: Pad | str, cfg: PrimeConfig) -> BlockStream:
    scheme = Pad(scheme)
    L = 8 * len(msg)
    if L >> 64:
        raise OverlongInput("message length must stay below 2^64 bits")
    nb = cfg.block_bytes
    ell = -(-len(msg) // nb)
    if ell == 0:
        return BlockStream(np.zeros((0, cfg.limb_count), dtype=np.uint64), 0, scheme, cfg)
    buf = np.zeros((ell, 16), dtype=np.uint8)
    body = np.frombuffer(bytes(msg) + bytes(ell * nb - len(msg)), dtype=np.uint8)
    buf[:, :nb] = body.reshape(ell, nb)
    words = buf.view("<u8").astype(np.uint64)
    limbs = _limbs_from_words(words[:, 0], words[:, 1], cfg)
    if scheme is Pad.PAD1:
        b = cfg.limb_bits
        s = cfg.n
        limbs[:-1, s // b] += np.uint64(1 << (s % b))
        s = 8 * (len(msg) - (ell - 1) * nb)
        limbs[-1, s // b] += np.uint64(1 << (s % b))
    return BlockStream(limbs, L, scheme, cfg)


def key_from_bytes(key: bytes, cfg: PrimeConfig) -> FieldElement:
    """A raw 16-byte little-endian key tau, which must lie below 2^k."""
    if len(key) != 16:
        raise ValueError(f"key must be 16 bytes, got {len(key)}")
    x = int.from_bytes(key, "little")
    if x >> cfg.k:
        raise ValueError(f"key exceeds {cfg.k} bits")
    return fa.fe_from_int(x, cfg)


def _as_partial(e: FieldElement) -> FieldElement:
    return FieldElement(e.limbs, max(e.bound, Bound.PARTIAL))


def _zero_digest(cfg: PrimeConfig) -> bytes:
    return bytes(cfg.digest_bytes)


def _check_g(g: int) -> None:
    if g not in G_VALUES:
        raise ValueError(f"g must be one of {G_VALUES}, got {g}")


class PolyKeySchedule:
    """Powers of tau for grouped Horner evaluation.

    Scalar table: tau^1..tau^max(g, 4) (index 0 unused).  With ``vector``
    set, also gamma^1..gamma^g for gamma = tau^4 as lane broadcasts with
    folded companions, and the packed vector (tau^4, tau^3, tau^2, tau).
    """

    def __init__(self, tau: FieldElement, g: int, cfg: PrimeConfig, vector: bool = True,
                 counters: OpCounters | None = None) -> None:
        _check_g(g)
        self.tau, self.g, self.cfg, self.vector = tau, g, cfg, vector
        ops = ScalarOps(cfg, counters)
        top = max(g, 4) if vector else g
        pows = [fa.fe_zero(cfg), tau]
        for _ in range(2, top + 1):
            pows.append(ops.full_mult(pows[-1], tau))
        self.powers = tuple(pows)
        self.tildes = tuple(fa.precompute_tilde(e, cfg) for e in pows)
        self.gamma: tuple[la.PackedLanes, ...] = ()
        self.gamma_tilde: tuple[la.PackedTilde, ...] = ()
        if vector:
            gp = [pows[4]]
            for _ in range(2, g + 1):
                gp.append(ops.full_mult(gp[-1], pows[4]))
            lanes = [la.lane_broadcast(e) for e in gp]
            for u in lanes:
                _readonly(u.words)
            self.gamma = (None,) + tuple(lanes)  # type: ignore[assignment]
            self.gamma_tilde = (None,) + tuple(  # type: ignore[assignment]
                la.PackedTilde(_readonly(la.lane_precompute_tilde(u, cfg).words)) for u in lanes)
            theta = la.pack4([_as_partial(pows[4]), _as_partial(pows[3]),
                              _as_partial(pows[2]), _as_partial(pows[1])], cfg)
            self.theta = la.PackedLanes(_readonly(theta.words), theta.bound)
            self.theta_tilde = la.PackedTilde(_readonly(la.lane_precompute_tilde(theta, cfg).words))

    def vector_table_bytes(self) -> bytes:
        """Serialized lane tables: gamma^i and its companion for each i, then the theta vector.

        The theta companion is cheap to rebuild and is not part of the image.
        """
        if not self.vector:
            return b""
        parts = []
        for i in range(1, self.g + 1):
            parts.append(self.gamma[i].to_bytes())
            parts.append(self.gamma_tilde[i].to_bytes())
        parts.append(self.theta.to_bytes())
        return b"".join(parts)


class DecBrwKeySchedule:
    """Squaring ladder and lane broadcasts for 4-way decimated BRW.

    Built for messages of up to ``max_blocks`` blocks; shorter messages reuse
    a prefix of the ladder.
    """

    def __init__(self, tau: FieldElement, max_blocks: int, cfg: PrimeConfig,
                 counters: OpCounters | None = None) -> None:
        self.tau, self.cfg, self.max_blocks = tau, cfg, max_blocks
        self.max_stream = max(1, -(-max_blocks // 4))
        self.J = floor_lg(self.max_stream)
        ops = ScalarOps(cfg, counters)
        self.key_powers = BrwKeyPowers.build(tau, self.J + 1, ops)
        lanes, tildes = [], []
        for e in self.key_powers.pows[:self.J + 1]:
            u = la.lane_broadcast(e)
            lanes.append(la.PackedLanes(_readonly(u.words), u.bound))
            tildes.append(la.PackedTilde(_readonly(la.lane_precompute_tilde(u, cfg).words)))
        self.lanes = tuple(lanes)
        self.lane_tildes = tuple(tildes)
        self.d = 1 if max_blocks == 0 else 2 ** (self.J + 1)
        self.tau_d = self.key_powers.pows[self.J + 1] if max_blocks else tau

    def vector_table_bytes(self) -> bytes:
        """Broadcast tables for tau^(2^j), j >= 1 (tau itself is the key)."""
        return b"".join(u.to_bytes() for u in self.lanes[1:])


def _horner(ops: ScalarOps, P: Sequence[FieldElement], T: Sequence[fa.TildeElement],
            blocks: Sequence[FieldElement], lo: int, hi: int, g: int,
            acc: FieldElement | None = None) -> FieldElement:
    """tau-weighted Horner over blocks[lo:hi] in groups of g, leading partial group first.

    Returns (acc + M_lo) tau^(hi-lo) + ... + M_(hi-1) tau, partially reduced.
    """
    n = hi - lo
    s = n - g * (-(-n // g) - 1)
    i = lo
    mul_fixed, add, red = ops.mul_fixed, ops.add, ops.red
    while i < hi:
        x = blocks[i] if acc is None else add(acc, blocks[i])
        h = mul_fixed(P[s], T[s], x)
        for j in range(1, s):
            h = add(h, mul_fixed(P[s - j], T[s - j], blocks[i + j]))
        acc = red(h)
        i += s
        s = g
    assert acc is not None
    return acc


def _poly_value_scalar(ks: PolyKeySchedule, bs: BlockStream, ops: ScalarOps) -> FieldElement:
    return _horner(ops, ks.powers, ks.tildes, bs.blocks, 0, bs.ell, ks.g)


def _poly_value_vec4(ks: PolyKeySchedule, bs: BlockStream, ops: ScalarOps) -> FieldElement:
    cfg = ks.cfg
    if not ks.vector:
        raise ValueError("key schedule was built without vector tables")
    ell = bs.ell
    quads, rho = divmod(ell, 4)
    if quads == 0:
        return _horner(ops, ks.powers, ks.tildes, bs.blocks, 0, ell, ell)
    lops = LaneOps(cfg, ops.counters)
    arr = np.ascontiguousarray(
        bs.limbs[:4 * quads].reshape(quads, 4, cfg.limb_count).transpose(0, 2, 1))
    M = LaneBlocks(arr)
    G, GT = ks.gamma, ks.gamma_tilde
    A = M[0]
    i, rest = 1, quads - 1
    while rest:
        s = min(ks.g, rest)
        h = lops.mul_fixed(G[s], GT[s], A)
        for j in range(1, s):
            h = lops.add(h, lops.mul_fixed(G[s - j], GT[s - j], M[i + j - 1]))
        A = lops.red(lops.add(h, M[i + s - 1]))
        i += s
        rest -= s
    C = lops.mul_fixed(ks.theta, ks.theta_tilde, A)
    acc = ops.red(la.lane_sum(C))
    if rho:
        acc = _horner(ops, ks.powers, ks.tildes, bs.blocks, 4 * quads, ell, rho, acc)
    return acc


def _require(bs: BlockStream, scheme: Pad) -> None:
    if bs.scheme is not scheme:
        raise SchemeMismatch(f"expected {scheme.value} blocks, got {bs.scheme.value}")


def polyhash_scalar(ks: PolyKeySchedule, bs: BlockStream, cfg: PrimeConfig,
                    counters: OpCounters | None = None) -> bytes:
    _require(bs, Pad.PAD1)
    if bs.ell == 0:
        return _zero_digest(cfg)
    v = _poly_value_scalar(ks, bs, ScalarOps(cfg, counters))
    return fa.digest_mod_2mu(fa.full_reduce(v, cfg), cfg)


def polyhash_vec4(ks: PolyKeySchedule, bs: BlockStream, cfg: PrimeConfig,
                  counters: OpCounters | None = None) -> bytes:
    _require(bs, Pad.PAD1)
    if bs.ell == 0:
        return _zero_digest(cfg)
    v = _poly_value_vec4(ks, bs, ScalarOps(cfg, counters))
    return fa.digest_mod_2mu(fa.full_reduce(v, cfg), cfg)


def _wrap(ops: ScalarOps, tau: FieldElement, q: FieldElement, length_block: FieldElement) -> bytes:
    inner = ops.add(ops.full_mult(tau, q), length_block)
    v = fa.full_reduce(ops.full_mult(tau, inner), ops.cfg)
    return fa.digest_mod_2mu(v, ops.cfg)


def brwhash(tau: FieldElement, bs: BlockStream, t: int, cfg: PrimeConfig,
            counters: OpCounters | None = None) -> bytes:
    _require(bs, Pad.PAD2)
    check_t(t)
    ell = bs.ell
    if ell == 0:
        return _zero_digest(cfg)
    ops = ScalarOps(cfg, counters)
    kp = BrwKeyPowers.build(tau, brw_squarings(ell), ops)
    q = brw_core(ops, kp.pows, kp.tildes, bs.blocks, ell, t)
    return _wrap(ops, tau, q, bs.length_block)


def _combine(ops: ScalarOps, qs: Sequence[FieldElement], tau_d: FieldElement) -> FieldElement:
    acc = qs[0]
    for q in qs[1:]:
        acc = ops.add(ops.full_mult(acc, tau_d), q)
    return acc


def dec_brw_hash_scalar(tau: FieldElement, bs: BlockStream, c: int, t: int, cfg: PrimeConfig,
                        counters: OpCounters | None = None) -> bytes:
    if not isinstance(c, int) or not 1 <= c <= C_MAX:
        raise InvalidC(f"c must be an integer in 1..{C_MAX}, got {c!r}")
    _require(bs, Pad.PAD2)
    check_t(t)
    ell = bs.ell
    if ell == 0:
        return _zero_digest(cfg)
    ns = -(-ell // c)
    J = floor_lg(ns)
    ops = ScalarOps(cfg, counters)
    kp = BrwKeyPowers.build(tau, brw_squarings(ns) if c == 1 else J + 1, ops)
    blocks = bs.blocks + [fa.fe_zero(cfg)] * (c * ns - ell)
    qs = [brw_core(ops, kp.pows, kp.tildes, blocks[i::c], ns, t) for i in range(c)]
    acc = qs[0] if c == 1 else _combine(ops, qs, kp.pows[J + 1])
    return _wrap(ops, tau, acc, bs.length_block)


def dec_brw_hash_vec4(ks: DecBrwKeySchedule, bs: BlockStream, t: int, cfg: PrimeConfig,
                      counters: OpCounters | None = None) -> bytes:
    _require(bs, Pad.PAD2)
    check_t(t)
    ell = bs.ell
    if ell == 0:
        return _zero_digest(cfg)
    if ell > ks.max_blocks:
        raise ValueError(f"schedule covers {ks.max_blocks} blocks, message has {ell}")
    ns = -(-ell // 4)
    ops = ScalarOps(cfg, counters)
    lops = LaneOps(cfg, ops.counters)
    limbs = bs.limbs
    if 4 * ns != ell:
        limbs = np.concatenate([limbs, np.zeros((4 * ns - ell, cfg.limb_count), dtype=np.uint64)])
    arr = np.ascontiguousarray(limbs.reshape(ns, 4, cfg.limb_count).transpose(0, 2, 1))
    res = brw_core(lops, ks.lanes, ks.lane_tildes, LaneBlocks(arr), ns, t)
    qs = la.unpack4(res)
    acc = _combine(ops, qs, ks.key_powers.pows[floor_lg(ns) + 1])
    return _wrap(ops, ks.tau, acc, bs.length_block)


def poly1305_compat(key32: bytes, msg: bytes, backend: str = "scalar", g: int = 4,
                    counters: OpCounters | None = None) -> bytes:
    """Poly1305 tag: clamped polyHash over 2^130 - 5 plus the second key half."""
    if len(key32) != 32:
        raise ValueError(f"Poly1305 key must be 32 bytes, got {len(key32)}")
    cfg = fa.P1305
    tau = fa.fe_from_int(int.from_bytes(key32[:16], "little") & CLAMP_MASK, cfg)
    s = int.from_bytes(key32[16:], "little")
    bs = format_pad(msg, Pad.PAD1, cfg)
    if backend == "vec4":
        ks = PolyKeySchedule(tau, g, cfg, vector=True, counters=counters)
        h = polyhash_vec4(ks, bs, cfg, counters)
    else:
        ks = PolyKeySchedule(tau, g, cfg, vector=False, counters=counters)
        h = polyhash_scalar(ks, bs, cfg, counters)
    return ((int.from_bytes(h, "little") + s) & ((1 << 128) - 1)).to_bytes(16, "little")


def hash_bytes(algo: str, key: bytes, msg: bytes, prime: str = "1305", *, g: int = 4, t: int = 5,
               c: int = 4, backend: str = "scalar", limbs: int = 5,
               counters: OpCounters | None = None) -> bytes:
    """One-shot digest; the key schedule is built on the fly."""
    if backend not in BACKENDS:
        raise ValueError(f"backend must be one of {BACKENDS}")
    if algo == "poly1305":
        if str(prime) != "1305":
            raise ValueError("Poly1305 is defined over 2^130 - 5 only")
        return poly1305_compat(key, msg, backend, g, counters)
    cfg = fa.get_config(prime, limbs)
    tau = key_from_bytes(key, cfg)
    if algo == "polyhash":
        bs = format_pad(msg, Pad.PAD1, cfg)
        ks = PolyKeySchedule(tau, g, cfg, vector=backend == "vec4", counters=counters)
        fn = polyhash_vec4 if backend == "vec4" else polyhash_scalar
        return fn(ks, bs, cfg, counters)
    bs = format_pad(msg, Pad.PAD2, cfg)
    if algo == "brwhash":
        if backend == "vec4":
            raise ValueError("brwhash has no vec4 back-end; use decbrw with c=4")
        return brwhash(tau, bs, t, cfg, counters)
    if algo == "decbrw":
        if backend == "vec4":
            if c != 4:
                raise InvalidC("the vec4 back-end is 4-way decimated; c must be 4")
            ks = DecBrwKeySchedule(tau, bs.ell, cfg, counters)
            return dec_brw_hash_vec4(ks, bs, t, cfg, counters)
        return dec_brw_hash_scalar(tau, bs, c, t, cfg, counters)
    raise ValueError(f"unknown algorithm {algo!r}")
