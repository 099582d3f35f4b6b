"""Counter-based random streams.

Every random draw in the package comes from a Philox-4x64 generator keyed by
the user's 64-bit seed.  A stream is addressed by up to three integer ids
(domain, a, b) placed in the upper three words of the 256-bit counter; the
lowest word is left for the stream's own consumption.  Streams never overlap
and do not depend on the order in which they are created, which is what makes
serial and parallel runs agree bit for bit.
"""

from __future__ import annotations

import numpy as np

# stream domains
PLAN_SHUFFLE = 1
SAMPLING = 2

_WORD = 2**64


def check_seed(seed) -> int:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    seed = int(seed)
    if not 0 <= seed < _WORD:
        raise ValueError(f"seed must fit in 64 unsigned bits, got {seed}")
    return seed


def stream(seed: int, domain: int, a: int = 0, b: int = 0) -> np.random.Generator:
    for v in (domain, a, b):
        if not 0 <= v < _WORD:
            raise ValueError(f"stream id {v} out of range")
    counter = (b << 64) | (a << 128) | (domain << 192)
    return np.random.Generator(np.random.Philox(key=check_seed(seed), counter=counter))
