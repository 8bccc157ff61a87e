"""Small shared helpers."""

import hashlib
import random


def derive_rng(*parts):
    """Deterministic RNG stream keyed by a tuple of hashable labels.

    Uses sha256 of the repr so streams are stable across processes and
    Python versions (builtin hash() is salted for strings).
    """
    digest = hashlib.sha256(repr(parts).encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))
