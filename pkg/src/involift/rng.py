"""Seeded pseudo-randomness for reproducible corpora and sampling.

The single generator used throughout is SplitMix64.  It is deliberately
small enough to restate in full, so any other implementation (or a
different language) can reproduce every stream bit for bit:

    state <- (state + 0x9E3779B97F4A7C15) mod 2^64
    z <- state
    z <- ((z xor (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z <- ((z xor (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    output: z xor (z >> 31)
"""

from __future__ import annotations

_MASK64 = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


class SplitMix64:
    """SplitMix64 stream over a 64-bit seed (algorithm in the module docstring)."""

    def __init__(self, seed: int):
        if not 0 <= seed < 1 << 64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self._state = seed

    def next_u64(self) -> int:
        """Next 64-bit word of the stream."""
        self._state = (self._state + _GAMMA) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK64
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1), from the top 53 bits of the next word."""
        return (self.next_u64() >> 11) * 2.0**-53

    def next_bits(self, width: int) -> int:
        """Uniform integer in [0, 2^width); extra 64-bit words are
        concatenated low word first when width > 64."""
        if width < 1:
            raise ValueError("width must be >= 1")
        value = 0
        got = 0
        while got < width:
            value |= self.next_u64() << got
            got += 64
        return value & ((1 << width) - 1)
