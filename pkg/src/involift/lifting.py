"""Lifting pipeline steps to involutions on the full register space.

A pipeline of non-invertible steps f1..fn becomes reversible once every
step gets its own output register and is replaced by the XOR update

    register[i] ^= f_i(register[i-1])

Each lifted step is an involution of the packed state space (repeating the
XOR cancels it), and composing the steps in order computes the whole
pipeline while keeping every intermediate value around.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .boolfn import BoolFunc, random_fn
from .rng import SplitMix64

# Permutations are materialized as full 2^W mapping arrays, so the summed
# register width is capped.
DEFAULT_WIDTH_CAP = 20


@dataclass(frozen=True)
class Perm:
    """A bijection of {0, ..., 2^total_width - 1}, stored as a mapping array."""

    total_width: int
    mapping: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "mapping", tuple(self.mapping))
        size = 1 << self.total_width
        if len(self.mapping) != size:
            raise ValueError(f"mapping has {len(self.mapping)} entries, expected {size}")
        seen = bytearray(size)
        for v in self.mapping:
            if not 0 <= v < size or seen[v]:
                raise ValueError(f"mapping is not a bijection of 0..{size - 1}")
            seen[v] = 1

    @classmethod
    def identity(cls, total_width: int) -> "Perm":
        return cls(total_width, tuple(range(1 << total_width)))

    def __call__(self, state: int) -> int:
        return self.mapping[state]

    @property
    def is_identity(self) -> bool:
        return all(v == i for i, v in enumerate(self.mapping))


@dataclass(frozen=True)
class RegisterLayout:
    """Bit positions of each register inside the packed state index."""

    widths: tuple[int, ...]
    offsets: tuple[int, ...]
    total_width: int

    @classmethod
    def from_widths(cls, widths: Sequence[int]) -> "RegisterLayout":
        widths = tuple(widths)
        offsets = []
        position = 0
        for w in widths:
            offsets.append(position)
            position += w
        return cls(widths, tuple(offsets), position)

    def extract(self, state: int, register: int) -> int:
        self._check_register(register)
        return (state >> self.offsets[register]) & ((1 << self.widths[register]) - 1)

    def unpack_registers(self, state: int) -> tuple[int, ...]:
        if not 0 <= state < 1 << self.total_width:
            raise ValueError(f"state {state} out of range for width {self.total_width}")
        return tuple(
            (state >> off) & ((1 << w) - 1) for off, w in zip(self.offsets, self.widths)
        )

    def pack_registers(self, values: Sequence[int]) -> int:
        if len(values) != len(self.widths):
            raise ValueError(f"expected {len(self.widths)} register values, got {len(values)}")
        state = 0
        for i, (v, off, w) in enumerate(zip(values, self.offsets, self.widths)):
            if not 0 <= v < 1 << w:
                raise ValueError(f"register {i} value {v} out of range for width {w}")
            state |= v << off
        return state

    def _check_register(self, register: int) -> None:
        if not 0 <= register < len(self.widths):
            raise ValueError(f"register {register} out of range 0..{len(self.widths) - 1}")


@dataclass(frozen=True)
class PipelineSpec:
    """Register widths w0..wn and step functions f1..fn.

    Step i reads register i-1 and writes register i, so f_i must map
    w_{i-1} bits to w_i bits.  The summed width is capped because the
    lifted steps are materialized as permutations of 2^W points.
    """

    widths: tuple[int, ...]
    steps: tuple[BoolFunc, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "widths", tuple(self.widths))
        object.__setattr__(self, "steps", tuple(self.steps))
        if len(self.steps) < 1:
            raise ValueError("a pipeline needs at least one step")
        if len(self.widths) != len(self.steps) + 1:
            raise ValueError(
                f"{len(self.steps)} steps need {len(self.steps) + 1} register widths, "
                f"got {len(self.widths)}"
            )
        for i, f in enumerate(self.steps, start=1):
            if f.arity_in != self.widths[i - 1] or f.arity_out != self.widths[i]:
                raise ValueError(
                    f"step {i} maps {f.arity_in}->{f.arity_out} bits, "
                    f"expected {self.widths[i - 1]}->{self.widths[i]}"
                )
        total = sum(self.widths)
        if total > DEFAULT_WIDTH_CAP:
            raise ValueError(f"total width {total} exceeds the cap of {DEFAULT_WIDTH_CAP}")

    @property
    def n_steps(self) -> int:
        return len(self.steps)

    @property
    def total_width(self) -> int:
        return sum(self.widths)


def pipeline_from_steps(steps: Sequence[BoolFunc]) -> PipelineSpec:
    """Build a pipeline from its step functions, deriving register widths."""
    steps = tuple(steps)
    if not steps:
        raise ValueError("a pipeline needs at least one step")
    widths = (steps[0].arity_in,) + tuple(f.arity_out for f in steps)
    return PipelineSpec(widths, steps)


def layout(pipeline: PipelineSpec) -> RegisterLayout:
    """Register layout of the pipeline, earliest register least significant."""
    return RegisterLayout.from_widths(pipeline.widths)


def lift(f: BoolFunc) -> Perm:
    """General-inversion embedding of f: (x, y) maps to (x, y XOR f(x)).

    The input bits sit in the low ``arity_in`` positions and the output
    register above them.  The result is an involution on arity_in +
    arity_out bits.
    """
    width = f.arity_in + f.arity_out
    if width > DEFAULT_WIDTH_CAP:
        raise ValueError(f"lifted width {width} exceeds the cap of {DEFAULT_WIDTH_CAP}")
    in_mask = (1 << f.arity_in) - 1
    table = f.table
    shift = f.arity_in
    return Perm(width, tuple(s ^ (table[s & in_mask] << shift) for s in range(1 << width)))


def step_involution(pipeline: PipelineSpec, step: int) -> Perm:
    """Pipeline-wide involution of step i (1-based): register i picks up
    f_i(register i-1) by XOR, every other register is untouched."""
    if not 1 <= step <= pipeline.n_steps:
        raise ValueError(f"step {step} out of range 1..{pipeline.n_steps}")
    lay = layout(pipeline)
    f = pipeline.steps[step - 1]
    src_off = lay.offsets[step - 1]
    dst_off = lay.offsets[step]
    src_mask = (1 << f.arity_in) - 1
    table = f.table
    return Perm(
        lay.total_width,
        tuple(s ^ (table[(s >> src_off) & src_mask] << dst_off) for s in range(1 << lay.total_width)),
    )


def forward_perm(pipeline: PipelineSpec) -> Perm:
    """Composition of all step involutions, step 1 applied first."""
    size = 1 << pipeline.total_width
    current = list(range(size))
    for step in range(1, pipeline.n_steps + 1):
        m = step_involution(pipeline, step).mapping
        current = [m[v] for v in current]
    return Perm(pipeline.total_width, tuple(current))


class ClassicalTrace(NamedTuple):
    registers: tuple[int, ...]  # computed through the lifted involutions
    direct: tuple[int, ...]  # computed by plain truth-table chaining


def run_classical(pipeline: PipelineSpec, x: int) -> ClassicalTrace:
    """Evaluate the pipeline on input x by both routes and cross-check.

    The invertible route applies the forward permutation to the state with
    register 0 = x and all other registers zero, then unpacks the registers;
    the direct route chains the truth tables.  A mismatch (impossible unless
    the lifting is broken) raises RuntimeError.
    """
    if not 0 <= x < 1 << pipeline.widths[0]:
        raise ValueError(f"input {x} out of range for register width {pipeline.widths[0]}")
    lay = layout(pipeline)
    # register 0 sits in the low bits, so the packed initial state equals x
    registers = lay.unpack_registers(forward_perm(pipeline)(x))
    value = x
    direct = [x]
    for f in pipeline.steps:
        value = f(value)
        direct.append(value)
    if registers != tuple(direct):
        raise RuntimeError(
            f"invertible trace {registers} disagrees with direct evaluation {tuple(direct)}"
        )
    return ClassicalTrace(registers, tuple(direct))


def random_pipeline(seed: int, steps: int = 2, max_width: int = 3) -> PipelineSpec:
    """Seeded random pipeline for test corpora.

    One SplitMix64 stream over ``seed`` drives everything: register widths
    first (each 1 + word mod max_width), then one sub-seed per step fed to
    :func:`involift.boolfn.random_fn`.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if max_width < 1:
        raise ValueError("max_width must be >= 1")
    rng = SplitMix64(seed)
    widths = tuple(1 + rng.next_u64() % max_width for _ in range(steps + 1))
    fns = tuple(random_fn(widths[i], widths[i + 1], rng.next_u64()) for i in range(steps))
    return PipelineSpec(widths, fns)
