"""Seedable, splittable random streams.

Every stochastic routine in the package is driven by a counter-based Philox
generator keyed by ``(seed, stream)``.  Identical key -> identical draw
sequence, on any platform.  Independent parallel chains get consecutive
stream indices, so a multi-chain result is reproducible regardless of how
the chains are scheduled.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class RngState:
    """Key of one random stream: a 64-bit seed plus a stream index."""

    seed: int
    stream: int = 0

    def generator(self) -> np.random.Generator:
        return make_rng(self.seed, self.stream)

    def split(self, count: int) -> list["RngState"]:
        """Child streams; child k of (seed, s) is (seed, s*2**20 + k + 1)."""
        base = self.stream * (1 << 20)
        return [RngState(self.seed, base + k + 1) for k in range(count)]


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Philox generator keyed by (seed, stream)."""
    # Philox takes a 128-bit key; seed and stream occupy separate 64-bit words.
    bg = np.random.Philox(key=(int(seed) % (1 << 64)) + ((int(stream) % (1 << 64)) << 64))
    return np.random.Generator(bg)
