"""Shared fixtures: canonical small pipelines, the seeded random corpus, and
an oracle that builds permutations straight from register-tuple rules."""

import pytest

from involift.boolfn import BoolFunc, identity_fn, zero_fn
from involift.lifting import Perm, PipelineSpec, layout, random_pipeline

SUITE_BASE_SEED = 1000
SUITE_SIZE = 100

ID1 = identity_fn(1)
NOT1 = BoolFunc(1, 1, (1, 0))


@pytest.fixture
def two_step_id() -> PipelineSpec:
    return PipelineSpec((1, 1, 1), (ID1, ID1))


@pytest.fixture
def three_step_id() -> PipelineSpec:
    return PipelineSpec((1, 1, 1, 1), (ID1, ID1, ID1))


@pytest.fixture
def two_step_zero_first() -> PipelineSpec:
    return PipelineSpec((1, 1, 1), (zero_fn(1, 1), ID1))


@pytest.fixture(scope="session")
def pipeline_suite() -> list[PipelineSpec]:
    """100 seeded random 2-step pipelines with register widths up to 3."""
    return [random_pipeline(SUITE_BASE_SEED + k, steps=2, max_width=3) for k in range(SUITE_SIZE)]


@pytest.fixture(scope="session")
def rule_perm():
    """Build the permutation acting on register tuples by an explicit rule.

    The rule receives the register values and the step functions and returns
    the new register values; packing goes through the layout contract, so
    the result is independent of how the lifting module builds its
    permutations.
    """

    def build(pipeline: PipelineSpec, rule) -> Perm:
        lay = layout(pipeline)
        mapping = []
        for state in range(1 << lay.total_width):
            registers = lay.unpack_registers(state)
            mapping.append(lay.pack_registers(rule(registers, pipeline.steps)))
        return Perm(lay.total_width, tuple(mapping))

    return build
