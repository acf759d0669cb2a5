"""Deterministic, splittable random streams.

Every stochastic routine takes an explicit generator.  Streams are derived
from a root seed plus a path of labels, hashed into a Philox key, so that
(seed, path) -> stream is reproducible and independent subtrees can be split
off without coordination (safe under parallel fan-out).
"""

from __future__ import annotations

import hashlib

import numpy as np


def stream(seed: int, *path) -> np.random.Generator:
    """Return the generator identified by ``seed`` and a label path.

    Path components may be strings or integers; the same (seed, path) always
    yields an identical stream, and distinct paths yield independent ones.
    """
    h = hashlib.sha256()
    h.update(str(int(seed)).encode())
    for part in path:
        h.update(b"/")
        h.update(repr(part).encode())  # repr keeps 1 and "1" distinct
    key = int.from_bytes(h.digest()[:16], "little")
    return np.random.Generator(np.random.Philox(key=key))
