"""Reproducible random streams for seeded Monte Carlo work.

A stream is identified by a 64-bit master seed plus a tuple of non-negative
integer ids. The generator for a stream is PCG64 seeded with
``SeedSequence(master_seed, spawn_key=ids)``, numpy's documented mechanism
for deriving statistically independent child streams. Equal (seed, ids)
pairs always reproduce the same draw sequence, so concurrent work units stay
reproducible regardless of scheduling or chunking.

Stream ids used by this package:

* ``(k,)``           graph sampled at step ``k`` of a single trajectory
* ``(steps + k,)``   inner estimation batch at step ``k`` of an
                     expected-decrease experiment (never collides with the
                     trajectory's own step streams)
* ``(t,)``           trajectory of trial ``t`` in a multi-trial experiment,
                     consumed one row of pair uniforms per step
* ``(INIT_STREAM,)`` randomized initial conditions
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_SEED = 0

# Reserved id for initial-condition draws; step streams count up from 0 and
# stay far below it in practice.
INIT_STREAM = 2**32 - 1


@dataclass(frozen=True)
class RandomSource:
    """Immutable handle for one reproducible stream."""

    master_seed: int
    stream: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")
        if any(i < 0 for i in self.stream):
            raise ValueError("stream ids must be non-negative")

    def spawn(self, *ids: int) -> "RandomSource":
        """Child source with ``ids`` appended to the stream key."""
        return RandomSource(self.master_seed, self.stream + ids)

    def generator(self) -> np.random.Generator:
        """Fresh generator positioned at the start of this stream."""
        seq = np.random.SeedSequence(self.master_seed, spawn_key=self.stream)
        return np.random.Generator(np.random.PCG64(seq))

    def uniforms(self, shape) -> np.ndarray:
        """Uniform [0, 1) draws from the start of this stream."""
        return self.generator().random(shape)
