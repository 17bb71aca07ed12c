import random

from decbrw import field as fa


def random_key(rng: random.Random, cfg: fa.PrimeConfig) -> bytes:
    return rng.getrandbits(cfg.k).to_bytes(16, "little")


def message_with_blocks(rng: random.Random, ell: int, block_bytes: int) -> bytes:
    """Random message occupying exactly ell blocks, last block of random fill."""
    if ell == 0:
        return b""
    size = (ell - 1) * block_bytes + rng.randint(1, block_bytes)
    return rng.randbytes(size)


SWEEP_FUZZ = 1000


def sweep_cases(cfg: fa.PrimeConfig, seed: str, fuzz: int = SWEEP_FUZZ):
    """Exhaustive ell in 0..64 (two fills each), then ``fuzz`` messages with ell in 65..1024.

    Yields (index, ell, key, msg); deterministic for a given seed.
    """
    rng = random.Random(seed)
    idx = 0
    nb = cfg.block_bytes
    for ell in range(65):
        fills = [nb] if ell == 0 else [nb, rng.randint(1, nb - 1)]
        for fill in fills:
            size = 0 if ell == 0 else (ell - 1) * nb + fill
            yield idx, ell, random_key(rng, cfg), rng.randbytes(size)
            idx += 1
    for _ in range(fuzz):
        ell = rng.randint(65, 1024)
        yield idx, ell, random_key(rng, cfg), message_with_blocks(rng, ell, nb)
        idx += 1
