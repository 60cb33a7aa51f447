"""Counter-based splittable random streams.

Each stream is a Philox4x64 generator keyed by (master_seed, stream_index),
so trajectory i of an ensemble always sees the same bit sequence no matter
how runs are scheduled across threads.  Scalar ``uniform()`` draws and block
``uniforms(n)`` draws consume the same underlying stream identically, which
the trajectory code relies on for loop/vectorized equivalence.
"""

from __future__ import annotations

import numpy as np


class RngStream:
    """Uniform [0, 1) stream identified by (master_seed, stream_index)."""

    def __init__(self, master_seed: int, stream_index: int = 0):
        if not 0 <= master_seed < 2**64:
            raise ValueError("master_seed must fit in 64 bits")
        if stream_index < 0:
            raise ValueError("stream_index must be non-negative")
        self.master_seed = int(master_seed)
        self.stream_index = int(stream_index)
        key = np.array([self.master_seed, self.stream_index], dtype=np.uint64)
        self.generator = np.random.Generator(np.random.Philox(key=key))

    def substream(self, index: int) -> "RngStream":
        """Fresh stream (master_seed, index), independent of this one."""
        return RngStream(self.master_seed, index)

    def uniform(self) -> float:
        return float(self.generator.random())

    def uniforms(self, n: int) -> np.ndarray:
        return self.generator.random(n)

    def __repr__(self) -> str:
        return f"RngStream(master_seed={self.master_seed}, stream_index={self.stream_index})"
