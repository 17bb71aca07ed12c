"""Slow big-integer reference implementations and small-field polynomial algebra.

Nothing here imports the limb arithmetic: values are plain Python integers
reduced with ``%`` after every operation, and BRW is the literal recursion.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

ORACLE_PARAMS = {
    "1305": {"m": 130, "delta": 5, "n": 128, "k": 128, "mu": 128},
    "1271": {"m": 127, "delta": 1, "n": 120, "k": 126, "mu": 126},
}


def prime_of(prime: str) -> int:
    q = ORACLE_PARAMS[str(prime)]
    return 2 ** q["m"] - q["delta"]


def oracle_pad(msg: bytes, scheme: str, prime: str) -> tuple[list[int], int]:
    """Blocks as integers plus the bit length L; pad1 marks each block's end."""
    nb = ORACLE_PARAMS[str(prime)]["n"] // 8
    blocks = []
    for i in range(0, len(msg), nb):
        chunk = msg[i:i + nb]
        v = int.from_bytes(chunk, "little")
        if scheme == "pad1":
            v += 2 ** (8 * len(chunk))
        blocks.append(v)
    return blocks, 8 * len(msg)


def oracle_poly_eval(tau: int, blocks: Sequence[int], p: int) -> int:
    """M1 x^(l-1) + ... + Ml at x = tau."""
    acc = 0
    for b in blocks:
        acc = (acc * tau + b) % p
    return acc


def oracle_brw_eval(tau: int, blocks: Sequence[int], p: int) -> int:
    n = len(blocks)
    if n == 0:
        return 0
    if n == 1:
        return blocks[0] % p
    if n == 2:
        return (blocks[0] * tau + blocks[1]) % p
    if n == 3:
        return ((tau + blocks[0]) * (tau * tau + blocks[1]) + blocks[2]) % p
    top = 2 ** (n.bit_length() - 1)
    left = oracle_brw_eval(tau, blocks[:top - 1], p)
    right = oracle_brw_eval(tau, blocks[top:], p)
    return (left * (pow(tau, top, p) + blocks[top - 1]) + right) % p


def decimation_exponent(n_stream: int, L: int) -> int:
    if L == 0:
        return 1
    return 2 ** (n_stream.bit_length())


def oracle_dec_value(tau: int, blocks: Sequence[int], L: int, c: int, p: int) -> int:
    """Pre-truncation value of the c-way decimated BRW hash (c = 1 is BRWHash)."""
    ell = len(blocks)
    if ell == 0:
        return 0
    ns = -(-ell // c)
    full = list(blocks) + [0] * (c * ns - ell)
    d = decimation_exponent(ns, L)
    inner = 0
    for i in range(c):
        q = oracle_brw_eval(tau, full[i::c], p)
        inner = (inner + pow(tau, (c - 1 - i) * d, p) * q) % p
    return tau * (tau * inner + L) % p


def oracle_hash_blocks(kind: str, tau: int, blocks: Sequence[int], L: int, p: int, mu: int,
                       c: int = 1) -> int:
    """Digest as an integer for block-level input over an arbitrary prime."""
    if kind == "polyhash":
        v = tau * oracle_poly_eval(tau, blocks, p) % p
    elif kind == "brwhash":
        v = 0 if not blocks else tau * (tau * oracle_brw_eval(tau, blocks, p) + L) % p
    elif kind == "decbrw":
        v = oracle_dec_value(tau, blocks, L, c, p)
    else:
        raise ValueError(f"unknown hash kind {kind!r}")
    return v % 2 ** mu


def clamp_r(r: int) -> int:
    return r & 0x0FFFFFFC0FFFFFFC0FFFFFFC0FFFFFFF


def oracle_poly1305(key32: bytes, msg: bytes) -> bytes:
    p = 2 ** 130 - 5
    r = clamp_r(int.from_bytes(key32[:16], "little"))
    s = int.from_bytes(key32[16:32], "little")
    acc = 0
    for i in range(0, len(msg), 16):
        chunk = msg[i:i + 16]
        n = int.from_bytes(chunk, "little") + 2 ** (8 * len(chunk))
        acc = (acc + n) * r % p
    return ((acc + s) % 2 ** 128).to_bytes(16, "little")


def oracle_hash(kind: str, key: bytes, msg: bytes, prime: str = "1305", c: int = 1) -> bytes:
    """End-to-end reference digest for byte messages."""
    if kind == "poly1305":
        return oracle_poly1305(key, msg)
    q = ORACLE_PARAMS[str(prime)]
    p = prime_of(prime)
    tau = int.from_bytes(key, "little")
    scheme = "pad1" if kind == "polyhash" else "pad2"
    blocks, L = oracle_pad(msg, scheme, prime)
    if kind == "brwhash":
        c = 1
    v = oracle_hash_blocks(kind, tau, blocks, L, p, q["mu"], c)
    return v.to_bytes((q["mu"] + 7) // 8, "little")


@dataclass(frozen=True)
class DensePoly:
    """Polynomial over F_p; ``coeffs[i]`` is the coefficient of x^i."""

    coeffs: tuple[int, ...]
    p: int

    @classmethod
    def make(cls, coeffs: Sequence[int], p: int) -> DensePoly:
        c = [x % p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return cls(tuple(c), p)

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, i: int) -> int:
        return self.coeffs[i] if i < len(self.coeffs) else 0

    def __call__(self, x: int) -> int:
        acc = 0
        for a in reversed(self.coeffs):
            acc = (acc * x + a) % self.p
        return acc


def poly_const(a: int, p: int) -> DensePoly:
    return DensePoly.make([a], p)


def poly_add(a: DensePoly, b: DensePoly) -> DensePoly:
    n = max(len(a.coeffs), len(b.coeffs))
    return DensePoly.make([a.coeff(i) + b.coeff(i) for i in range(n)], a.p)


def poly_sub(a: DensePoly, b: DensePoly) -> DensePoly:
    n = max(len(a.coeffs), len(b.coeffs))
    return DensePoly.make([a.coeff(i) - b.coeff(i) for i in range(n)], a.p)


def poly_mul(a: DensePoly, b: DensePoly) -> DensePoly:
    if a.is_zero() or b.is_zero():
        return DensePoly((), a.p)
    out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                out[i + j] += x * y
    return DensePoly.make(out, a.p)


def poly_shift(a: DensePoly, e: int) -> DensePoly:
    """Multiply by x^e."""
    if a.is_zero():
        return a
    return DensePoly((0,) * e + a.coeffs, a.p)


def brw_symbolic(blocks: Sequence[int], p: int) -> DensePoly:
    n = len(blocks)
    x = DensePoly.make([0, 1], p)
    if n == 0:
        return DensePoly((), p)
    if n == 1:
        return poly_const(blocks[0], p)
    if n == 2:
        return DensePoly.make([blocks[1], blocks[0]], p)
    if n == 3:
        a = poly_add(x, poly_const(blocks[0], p))
        b = poly_add(poly_shift(poly_const(1, p), 2), poly_const(blocks[1], p))
        return poly_add(poly_mul(a, b), poly_const(blocks[2], p))
    top = 2 ** (n.bit_length() - 1)
    left = brw_symbolic(blocks[:top - 1], p)
    join = poly_add(poly_shift(poly_const(1, p), top), poly_const(blocks[top - 1], p))
    return poly_add(poly_mul(left, join), brw_symbolic(blocks[top:], p))


def build_Q_symbolic(blocks: Sequence[int], L: int, c: int, small_p: int) -> DensePoly:
    """Q(x) of the c-way decimated BRW hash as an explicit polynomial."""
    if small_p > 2 ** 13:
        raise ValueError("symbolic construction is limited to primes up to 2^13")
    ell = len(blocks)
    if ell == 0:
        return DensePoly((), small_p)
    ns = -(-ell // c)
    full = list(blocks) + [0] * (c * ns - ell)
    d = decimation_exponent(ns, L)
    inner = DensePoly((), small_p)
    for i in range(c):
        q = brw_symbolic(full[i::c], small_p)
        inner = poly_add(inner, poly_shift(q, (c - 1 - i) * d))
    return poly_shift(poly_add(poly_shift(inner, 1), poly_const(L, small_p)), 1)
