"""Named, splittable random streams.

Every stream is a numpy ``Generator`` over PCG64 seeded from a ``SeedSequence``
whose spawn key is derived from the master seed and a text label, so the same
``(seed, label)`` always yields the same stream independently of call order.
"""

from __future__ import annotations

import hashlib

import numpy as np

ALGORITHM = "numpy.PCG64/SeedSequence(blake2b label key)"


def _label_key(label: str) -> tuple[int, ...]:
    digest = hashlib.blake2b(label.encode("utf-8"), digest_size=16).digest()
    return tuple(int.from_bytes(digest[i:i + 4], "little") for i in range(0, 16, 4))


def seed_sequence(seed: int, label: str = "") -> np.random.SeedSequence:
    return np.random.SeedSequence(entropy=int(seed) & ((1 << 64) - 1), spawn_key=_label_key(label))


def stream(seed: int, label: str = "") -> np.random.Generator:
    """Independent generator for ``(seed, label)``."""
    return np.random.Generator(np.random.PCG64(seed_sequence(seed, label)))


def child_seed(seed: int, *path) -> int:
    """Deterministic 63-bit child seed from a master seed and an index path."""
    label = "/".join(str(p) for p in path)
    return int(seed_sequence(seed, label).generate_state(1, np.uint64)[0] >> np.uint64(1))


def as_generator(rng) -> np.random.Generator:
    """Accept a seed or an existing generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return stream(int(rng))
