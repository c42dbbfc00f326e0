"""Deterministic uniform stream with draw accounting, plus child-seed derivation.

One simulation owns one `DrawStream`.  The stream counts every uniform it
hands out, which lets tests assert the exact consumption budget of the
question loop.  Sweeps derive per-sample seeds from a master seed with
`child_seed`, so results do not depend on worker scheduling.
"""

from __future__ import annotations

import random

# Recorded in all output metadata so a run can be reproduced elsewhere.
GENERATOR_ID = "python-random-mt19937"

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX_A = 0xBF58476D1CE4E5B9
_MIX_B = 0x94D049BB133111EB

# random() may return exactly 0.0; the model wants draws in the open interval.
_MIN_UNIFORM = 2.0 ** -53


def mix64(z: int) -> int:
    """SplitMix64 finaliser; a bijection on 64-bit unsigned integers."""
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _MIX_A) & _MASK64
    z = ((z ^ (z >> 27)) * _MIX_B) & _MASK64
    return z ^ (z >> 31)


def child_seed(master_seed: int, index: int) -> int:
    """Derive the seed for stream `index` under `master_seed`.

    mix64 is bijective and (index + 1) * _GOLDEN is injective mod 2**64
    (the constant is odd), so distinct indices never collide for a fixed
    master seed.
    """
    if index < 0:
        raise ValueError("stream index must be nonnegative")
    return mix64((master_seed + (index + 1) * _GOLDEN) & _MASK64)


class DrawStream:
    """Counting wrapper over a seeded Mersenne Twister, emitting U(0,1) draws."""

    def __init__(self, seed: int):
        self.seed = seed
        self.draws = 0
        self._rng = random.Random(seed)

    def uniform(self) -> float:
        """One draw strictly inside (0, 1)."""
        self.draws += 1
        x = self._rng.random()
        return x if x > 0.0 else _MIN_UNIFORM

    def take(self, n: int) -> list[float]:
        """`n` draws in stream order, each strictly inside (0, 1)."""
        rnd = self._rng.random
        out = [rnd() for _ in range(n)]
        self.draws += n
        if 0.0 in out:
            out = [x if x > 0.0 else _MIN_UNIFORM for x in out]
        return out
