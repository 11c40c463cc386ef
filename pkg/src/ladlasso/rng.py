"""Minimal PCG32 stream with the sampling helpers the data generator needs.

PCG32 (64-bit LCG state, XSH-RR output) is chosen because it is tiny,
seedable and straightforward to reproduce in any language, which keeps
generated fixtures portable.  The stream selector is fixed so a single
64-bit seed fully determines every draw.

Draw conventions, all deterministic given the seed:
  - ``uniform`` maps one 32-bit output to [0, 1) as u / 2^32;
  - ``normal`` uses the Box-Muller transform on one (0,1] x [0,1) pair,
    producing two values; the second is cached and served by the next call,
    and the cache persists across phases of a generation run;
  - ``below(n)`` draws bounded integers by rejection (no modulo bias).
"""

from __future__ import annotations

import math

_MASK64 = (1 << 64) - 1
_MULTIPLIER = 6364136223846793005
_TWO32 = 1 << 32


class Pcg32:
    def __init__(self, seed: int, stream: int = 54):
        self.state = 0
        self.inc = (((stream << 1) | 1)) & _MASK64
        self._next_u32()
        self.state = (self.state + (seed & _MASK64)) & _MASK64
        self._next_u32()
        self._spare_normal: float | None = None

    def _next_u32(self) -> int:
        old = self.state
        self.state = (old * _MULTIPLIER + self.inc) & _MASK64
        xorshifted = (((old >> 18) ^ old) >> 27) & 0xFFFFFFFF
        rot = old >> 59
        return ((xorshifted >> rot) | (xorshifted << ((-rot) & 31))) & 0xFFFFFFFF

    def uniform(self) -> float:
        """One double in [0, 1)."""
        return self._next_u32() / _TWO32

    def uniform_in(self, a: float, b: float) -> float:
        return a + (b - a) * self.uniform()

    def below(self, bound: int) -> int:
        """One integer in [0, bound), rejection sampled to avoid modulo bias."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = _TWO32 % bound
        while True:
            r = self._next_u32()
            if r >= threshold:
                return r % bound

    def normal(self) -> float:
        """One standard normal via Box-Muller, pairs cached."""
        if self._spare_normal is not None:
            z = self._spare_normal
            self._spare_normal = None
            return z
        u1 = (self._next_u32() + 1) / _TWO32  # (0, 1]: keeps the log finite
        u2 = self._next_u32() / _TWO32
        radius = math.sqrt(-2.0 * math.log(u1))
        angle = 2.0 * math.pi * u2
        self._spare_normal = radius * math.sin(angle)
        return radius * math.cos(angle)

    def normals(self, count: int) -> list[float]:
        return [self.normal() for _ in range(count)]
