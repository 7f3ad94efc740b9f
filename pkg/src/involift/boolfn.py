"""Total Boolean functions stored as explicit truth tables.

Everything downstream shares one bit-packing convention: the first
component of a bit tuple is the least significant bit of the packed
integer, and register tuples concatenate with the earliest register in
the least significant bits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .rng import SplitMix64

# Truth tables are materialized in full, so input arity is capped to keep
# them desk-scale (at most 2^16 entries).
MAX_FN_ARITY = 16


def pack_bits(bits: Sequence[int], width: int) -> int:
    """Pack a bit tuple into an integer, first component least significant."""
    if len(bits) != width:
        raise ValueError(f"expected {width} bits, got {len(bits)}")
    value = 0
    for j, bit in enumerate(bits):
        if bit not in (0, 1):
            raise ValueError(f"bit {j} is {bit!r}, expected 0 or 1")
        value |= bit << j
    return value


def unpack_bits(value: int, width: int) -> tuple[int, ...]:
    """Exact inverse of :func:`pack_bits`."""
    if not 0 <= value < 1 << width:
        raise ValueError(f"value {value} out of range for width {width}")
    return tuple((value >> j) & 1 for j in range(width))


@dataclass(frozen=True)
class BoolFunc:
    """Truth table of a total function from ``arity_in`` to ``arity_out`` bits.

    ``table[x]`` is the packed output word for packed input ``x``.  Instances
    are validated on construction and immutable afterwards, so they are safe
    to share and to use as dict keys.
    """

    arity_in: int
    arity_out: int
    table: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.arity_in < 1 or self.arity_out < 1:
            raise ValueError("zero-width functions are rejected: arities must be >= 1")
        if self.arity_in > MAX_FN_ARITY:
            raise ValueError(f"arity_in {self.arity_in} exceeds the cap of {MAX_FN_ARITY}")
        object.__setattr__(self, "table", tuple(self.table))
        expected = 1 << self.arity_in
        if len(self.table) != expected:
            raise ValueError(f"table has {len(self.table)} entries, expected {expected}")
        bound = 1 << self.arity_out
        for x, out in enumerate(self.table):
            if not 0 <= out < bound:
                raise ValueError(f"table entry {x} is {out}, not below 2^{self.arity_out}")

    def __call__(self, x: int) -> int:
        if not 0 <= x < len(self.table):
            raise ValueError(f"input {x} out of range for arity {self.arity_in}")
        return self.table[x]

    @property
    def is_identity(self) -> bool:
        return self.arity_in == self.arity_out and all(v == x for x, v in enumerate(self.table))

    @property
    def is_constant_zero(self) -> bool:
        return all(v == 0 for v in self.table)


def identity_fn(width: int) -> BoolFunc:
    """The identity function on ``width`` bits."""
    return BoolFunc(width, width, tuple(range(1 << width)))


def zero_fn(arity_in: int, arity_out: int) -> BoolFunc:
    """The constant-zero function (its lifted involution is the identity)."""
    return BoolFunc(arity_in, arity_out, (0,) * (1 << arity_in))


def compose_fn(g: BoolFunc, f: BoolFunc) -> BoolFunc:
    """Functional composition g after f; f's output arity must match g's input."""
    if f.arity_out != g.arity_in:
        raise ValueError(
            f"cannot compose: inner function outputs {f.arity_out} bits, "
            f"outer function expects {g.arity_in}"
        )
    return BoolFunc(f.arity_in, g.arity_out, tuple(g.table[v] for v in f.table))


def random_fn(arity_in: int, arity_out: int, seed: int) -> BoolFunc:
    """Seeded pseudo-random function, reproducible bit for bit.

    Table entry x is ``SplitMix64(seed).next_bits(arity_out)`` drawn at the
    x-th call, i.e. the low ``arity_out`` bits of consecutive stream words.
    """
    rng = SplitMix64(seed)
    return BoolFunc(arity_in, arity_out, tuple(rng.next_bits(arity_out) for _ in range(1 << arity_in)))
