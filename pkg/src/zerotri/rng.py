"""Deterministic random streams.

Every randomized routine in the package draws from a stream derived here,
so a fixed master seed reproduces a run bit for bit.  A module-level call
counter lets tests assert that a code path is randomness-free.
"""

import hashlib
import random

# Number of stream() calls since import (or since reset_counter()).
# Deterministic code paths are tested by asserting this does not move.
_calls = 0


def stream(seed: int, *tags) -> random.Random:
    """Return a Random seeded from (seed, *tags).

    Tags may be ints or strings; the derivation hashes a canonical
    rendering, so equal arguments give equal streams on every platform.
    """
    global _calls
    _calls += 1
    material = repr((int(seed),) + tuple(tags)).encode("utf-8")
    digest = hashlib.sha256(material).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


def call_count() -> int:
    return _calls


def reset_counter() -> None:
    global _calls
    _calls = 0
