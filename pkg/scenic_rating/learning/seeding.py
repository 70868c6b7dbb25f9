#!/usr/bin/env python
"""
Seeded random streams.

Every random draw in the package comes from a numpy Generator backed by PCG64. Independent
substreams are derived by hashing the user seed together with small integer keys through
SeedSequence, so per-class, per-tree and per-fold streams never overlap and do not depend
on the order in which parallel work is scheduled.
"""

import numpy as np

MAX_SEED = 2**64 - 1


def validate_seed(seed: int) -> int:
    """
    Check that a seed is a 64-bit unsigned integer.

    Arguments:
        seed: Candidate seed

    Returns:
        int: The seed

    Raises:
        ValueError: If the seed is negative, too large or not an integer
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    if not 0 <= int(seed) <= MAX_SEED:
        raise ValueError(f"seed must be within [0, 2**64 - 1], got {seed}")
    return int(seed)


def substream(seed: int, *keys: int) -> np.random.Generator:
    """
    Create the generator for one named substream.

    Arguments:
        seed: User seed
        *keys: Non-negative integers naming the substream (class index, tree index, ...)

    Returns:
        np.random.Generator: PCG64 generator for that substream
    """
    entropy = [validate_seed(seed)] + [int(k) for k in keys]
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy)))


def derive_seed(seed: int, offset: int) -> int:
    """Return seed + offset wrapped into the 64-bit range."""
    return (validate_seed(seed) + int(offset)) % (MAX_SEED + 1)
