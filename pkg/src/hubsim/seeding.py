"""Deterministic sub-seed derivation.

Every random stream is keyed by ``(master_seed, purpose, index)``: the purpose
string is hashed to a 32-bit word and the triple feeds
:class:`numpy.random.SeedSequence`. Streams therefore do not depend on how many
other streams were drawn before them, which keeps results independent of the
degree of parallelism.
"""

import zlib

import numpy as np


def purpose_code(purpose: str) -> int:
    return zlib.crc32(purpose.encode("utf-8"))


def derive_seed(master_seed: int, purpose: str, index: int = 0) -> np.random.SeedSequence:
    if master_seed < 0 or index < 0:
        raise ValueError("seeds and indices must be non-negative")
    return np.random.SeedSequence([int(master_seed), purpose_code(purpose), int(index)])


def derive_rng(master_seed: int, purpose: str, index: int = 0) -> np.random.Generator:
    return np.random.default_rng(derive_seed(master_seed, purpose, index))
