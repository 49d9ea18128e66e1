"""Deterministic random streams.

Every stream is a numpy ``Generator`` backed by the counter-based Philox4x64-10
bit generator, keyed by a ``SeedSequence`` built from an integer seed plus an
optional spawn key. Philox output for a given key is platform independent, so
runs are bit-reproducible.
"""

from __future__ import annotations

import time

import numpy as np

#: Samples per work unit. Fixed so results never depend on the worker count.
CHUNK_SIZE = 1 << 16


def make_stream(seed: int, *key: int) -> np.random.Generator:
    """Return the stream for ``seed`` and an optional integer spawn key."""
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))


def child_stream(seed: int, index: int) -> np.random.Generator:
    """Stream for worker/chunk ``index`` derived from a parent seed."""
    return make_stream(seed, index)


def derive_seed(seed: int, *words: int) -> int:
    """Hash a parent seed and extra integer words into a new 63-bit seed."""
    ss = np.random.SeedSequence([int(seed), *(int(w) for w in words)])
    return int(ss.generate_state(1, np.uint64)[0] >> np.uint64(1))


def fresh_seed() -> int:
    """Timestamp-derived seed for runs where the caller did not pick one."""
    return time.time_ns() % (1 << 32)


def chunk_sizes(n: int, chunk: int = CHUNK_SIZE) -> list[int]:
    full, rest = divmod(int(n), chunk)
    return [chunk] * full + ([rest] if rest else [])
