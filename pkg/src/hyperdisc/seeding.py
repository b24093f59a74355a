"""Deterministic random streams (scheme "hdg-philox-v1").

All randomness in the package flows through numpy's Philox counter-based
generator, keyed through SeedSequence so that streams can be split without
overlap and the exact draw sequence is pinned by (numpy's stable Philox
implementation, the entropy tuple).  The conventions are:

* ``stream(seed)``              - the root stream for a single consumer.
* ``stream(seed, k)``           - substream k (e.g. one per matrix column, or
                                  one per retry attempt), independent of the
                                  root stream and of each other.
* ``derive64(*parts)``          - a stable 64-bit hash of a tuple of ints and
                                  strings (BLAKE2b over their decimal/utf-8
                                  rendering, joined by '|'), used to derive
                                  scalar seeds for sub-experiments.

Seeds are unsigned 64-bit integers.  Nothing here depends on PYTHONHASHSEED,
platform word size, or thread scheduling.
"""

from __future__ import annotations

import hashlib

import numpy as np
from numpy.random import Generator, Philox, SeedSequence

__all__ = ["stream", "derive64", "check_seed", "MASK64"]

MASK64 = (1 << 64) - 1


def check_seed(seed: int) -> int:
    if not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an integer, got {type(seed).__name__}")
    seed = int(seed)
    if not 0 <= seed <= MASK64:
        raise ValueError(f"seed {seed} outside the unsigned 64-bit range")
    return seed


def stream(*entropy: int) -> Generator:
    """Philox generator keyed by a tuple of non-negative integers."""
    parts = [check_seed(e) for e in entropy]
    return Generator(Philox(SeedSequence(parts)))


def derive64(*parts: int | str) -> int:
    """Stable 64-bit digest of a mixed tuple of ints and strings."""
    rendered = "|".join(
        str(int(p)) if isinstance(p, (int, np.integer)) else str(p) for p in parts
    )
    digest = hashlib.blake2b(rendered.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")
