"""Seeded random streams.

All randomness in the library flows through Philox, a counter-based generator
with published reference outputs, so every artifact is reproducible from a
single integer seed. Independent purposes get independent sub-streams derived
with SeedSequence spawn keys:

    DATA    - tensor / factor / weight draws
    MASK    - observation masks
    BASIS   - orthonormal basis initialization
    TRIAL   - repeated-trial studies (one child per trial index)

Changing how one purpose consumes randomness never perturbs the others; in
particular a sampling-rate change never alters the underlying tensor.
"""

import numpy as np

DATA = 0
MASK = 1
BASIS = 2
TRIAL = 3


def substream(seed, *key):
    """Return a Generator for sub-stream `key` of the given seed."""
    ss = np.random.SeedSequence(seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.Philox(ss))
