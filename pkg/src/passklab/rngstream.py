"""Seeding contract: one master seed, named substreams.

Every random quantity in the package is drawn from a ``numpy.random.Generator``
(PCG64) obtained through :func:`stream`. A stream is addressed by the master
seed plus an integer path, e.g. ``stream(seed, replicate_index)`` or
``stream(seed, replicate_index, 1)``. Distinct paths give statistically
independent streams (numpy ``SeedSequence`` spawn keys), so parallel
replicates are reproducible regardless of scheduling or worker count.
"""

from __future__ import annotations

import numpy as np


def seed_sequence(master_seed: int, *path: int) -> np.random.SeedSequence:
    """SeedSequence for the substream addressed by ``path`` under ``master_seed``."""
    return np.random.SeedSequence(master_seed, spawn_key=tuple(int(p) for p in path))


def stream(master_seed: int, *path: int) -> np.random.Generator:
    """PCG64 generator for the given substream address."""
    return np.random.Generator(np.random.PCG64(seed_sequence(master_seed, *path)))
