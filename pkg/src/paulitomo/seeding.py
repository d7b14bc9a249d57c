"""Deterministic RNG substreams derived from a single root seed.

Every stage of the pipeline (state construction, monomial sampling, shot
noise, synthetic noise, optimizer initialization) draws from its own named
substream so any stage can be reproduced in isolation.
"""

import numpy as np

# Fixed stream ids; renumbering would change every derived stream.
_STREAM_IDS = {
    "state": 0,
    "monomials": 1,
    "shots": 2,
    "noise": 3,
    "init": 4,
    "sensing": 5,
}


def substream(seed: int, name: str, index: int | None = None) -> np.random.Generator:
    """Return a generator for the named substream of `seed`.

    `index` distinguishes parallel streams within one stage (e.g. one
    shot-noise stream per measurement setting).
    """
    key = [int(seed), _STREAM_IDS[name]]
    if index is not None:
        key.append(int(index))
    return np.random.default_rng(key)


def as_generator(seed) -> np.random.Generator:
    """Accept either an integer seed or an existing Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)
