"""End-to-end acceptance checks.

Each test covers one exit criterion and prints a single pass/fail line
(run with ``pytest tests/test_acceptance.py -v -s`` to see them).  Expected
values are exact permutation identities or frozen oracle results; the only
tolerances are the documented amplitude (1e-12) and sampling (+/- 0.03)
bounds.
"""

import functools
import itertools
import time

from involift.boolfn import identity_fn, random_fn, zero_fn
from involift.coxeter import (
    BOUND_EXCEEDED,
    CONFIRMED,
    DEGENERATE,
    PROPER_QUOTIENT,
    Presentation,
    coxeter_matrix,
    pipeline_presentation,
    todd_coxeter,
    verify_pipeline,
)
from involift.lifting import Perm, PipelineSpec, forward_perm, layout, run_classical, step_involution
from involift.permgroup import (
    closure,
    is_dihedral_8,
    nondegeneracy_defects,
    perm_compose,
    perm_inverse,
)
from involift.quantum import (
    AMPLITUDE_TOLERANCE,
    PermUnitary,
    apply,
    basis_state,
    measure,
    representation_check,
    uniform_superposition,
)


def criterion(label):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                fn(*args, **kwargs)
            except BaseException:
                print(f"[acceptance] {label}: FAIL")
                raise
            print(f"[acceptance] {label}: PASS")

        return wrapper

    return decorate


def _two_step(pipeline):
    return step_involution(pipeline, 1), step_involution(pipeline, 2)


def _germinate(perms):
    """Independent group-order oracle: compose all pairs to a fixed point."""
    width = perms[0].total_width
    current = {Perm.identity(width).mapping} | {p.mapping for p in perms}
    while True:
        extended = set(current)
        for a in current:
            for b in current:
                extended.add(tuple(a[v] for v in b))
        if len(extended) == len(current):
            return len(current)
        current = extended


@criterion("two-step product identities on 100 seeded pipelines")
def test_two_step_product_identities(pipeline_suite, rule_perm):
    def rule_s2s1(regs, steps):
        x, y, z = regs
        return (x, y ^ steps[0](x), z ^ steps[1](y ^ steps[0](x)))

    def rule_s1s2s1(regs, steps):
        x, y, z = regs
        return (x, y, z ^ steps[1](y ^ steps[0](x)))

    def rule_s2s1_squared(regs, steps):
        x, y, z = regs
        return (x, y, z ^ steps[1](y ^ steps[0](x)) ^ steps[1](y))

    def rule_s1_s2s1_squared(regs, steps):
        x, y, z = regs
        return (x, y ^ steps[0](x), z ^ steps[1](y ^ steps[0](x)) ^ steps[1](y))

    def rule_s2s1_cubed(regs, steps):
        x, y, z = regs
        return (x, y ^ steps[0](x), z ^ steps[1](y))

    started = time.perf_counter()
    assert len(pipeline_suite) == 100
    for pipeline in pipeline_suite:
        s1, s2 = _two_step(pipeline)
        # the lifted steps are involutions
        assert perm_compose(s1, s1).is_identity
        assert perm_compose(s2, s2).is_identity
        s21 = perm_compose(s2, s1)
        s12 = perm_compose(s1, s2)
        # adjacent products invert each other
        assert perm_inverse(s21) == s12 and perm_inverse(s12) == s21
        # closed forms of the mixed products
        assert s21 == rule_perm(pipeline, rule_s2s1)
        assert perm_compose(s1, s21) == rule_perm(pipeline, rule_s1s2s1)
        s21_sq = perm_compose(s21, s21)
        assert s21_sq == rule_perm(pipeline, rule_s2s1_squared)
        assert perm_compose(s1, s21_sq) == rule_perm(pipeline, rule_s1_s2s1_squared)
        s21_cu = perm_compose(s21, s21_sq)
        assert s21_cu == rule_perm(pipeline, rule_s2s1_cubed)
        assert perm_compose(s1, s21_cu) == s2
        s21_4th = perm_compose(s21, s21_cu)
        assert s21_4th.is_identity
        # power identities of the reversed product and the order-4 cycle sets
        s12_sq = perm_compose(s12, s12)
        s12_cu = perm_compose(s12, s12_sq)
        assert s12 == s21_cu and s12_sq == s21_sq and s12_cu == s21
        assert perm_compose(s12, s12_cu).is_identity
        assert perm_compose(s21_sq, s21_sq).is_identity  # the square is self-inverse
        assert {s21.mapping, s21_sq.mapping, s21_cu.mapping, s21_4th.mapping} == {
            s12.mapping,
            s12_sq.mapping,
            s12_cu.mapping,
            s21_4th.mapping,
        }
    assert time.perf_counter() - started < 5.0


@criterion("nondegenerate two-step closures are dihedral of order 8")
def test_two_step_group_is_dihedral_8(pipeline_suite):
    checked = 0
    for pipeline in pipeline_suite:
        s1, s2 = _two_step(pipeline)
        if nondegeneracy_defects((s1, s2)):
            continue
        started = time.perf_counter()
        group = closure((s1, s2))
        assert len(group) == 8
        witness = is_dihedral_8(group)
        assert witness is not None and witness.from_generators
        assert group.elements[witness.rotation] == perm_compose(s1, s2)
        assert group.elements[witness.reflection] == s2
        assert time.perf_counter() - started < 1.0
        checked += 1
    assert checked >= 30, f"suite produced only {checked} nondegenerate pipelines"


@criterion("invertible evaluation reproduces direct traces and restores inputs")
def test_invertible_evaluation_matches_direct():
    for steps in (2, 3):
        for combo_index, widths in enumerate(itertools.product((1, 2, 3), repeat=steps + 1)):
            fns = tuple(
                random_fn(widths[i], widths[i + 1], seed=10_000 + 100 * steps + 7 * combo_index + i)
                for i in range(steps)
            )
            pipeline = PipelineSpec(widths, fns)
            lay = layout(pipeline)
            fwd = forward_perm(pipeline)
            reverse = Perm.identity(pipeline.total_width)
            for i in range(1, steps + 1):
                reverse = perm_compose(reverse, step_involution(pipeline, i))
            for x in range(1 << widths[0]):
                trace = run_classical(pipeline, x)
                value = x
                expected = [x]
                for f in fns:
                    value = f(value)
                    expected.append(value)
                assert trace.registers == tuple(expected)
                assert trace.registers == trace.direct
                initial = lay.pack_registers((x,) + (0,) * steps)
                final = fwd(initial)
                assert lay.unpack_registers(final) == tuple(expected)
                assert reverse(final) == initial


@criterion("three-step identity pipeline has Coxeter matrix [[1,4,2],[4,1,4],[2,4,1]]")
def test_three_step_coxeter_matrix(three_step_id):
    started = time.perf_counter()
    gens = tuple(step_involution(three_step_id, i) for i in (1, 2, 3))
    assert coxeter_matrix(gens).orders == ((1, 4, 2), (4, 1, 4), (2, 4, 1))
    assert time.perf_counter() - started < 1.0


@criterion("presentation verification: two-step confirmed, three-step checked not assumed")
def test_presentation_verification(two_step_id, three_step_id):
    started = time.perf_counter()
    assert todd_coxeter(pipeline_presentation(2), 100_000) == 8
    report2 = verify_pipeline(two_step_id, coset_cap=100_000)
    assert report2.verdict == CONFIRMED
    assert report2.concrete_order == 8 and report2.abstract_order == 8
    assert time.perf_counter() - started < 1.0

    report3 = verify_pipeline(three_step_id, coset_cap=100_000)
    assert report3.relations_hold
    assert report3.verdict in {PROPER_QUOTIENT, BOUND_EXCEEDED}
    assert report3.verdict != CONFIRMED
    gens = tuple(step_involution(three_step_id, i) for i in (1, 2, 3))
    assert report3.concrete_order == _germinate(gens)
    if report3.abstract_order is not None:
        assert report3.abstract_order > report3.concrete_order


@criterion("coset enumeration matches the dihedral family oracle")
def test_dihedral_family_oracle():
    started = time.perf_counter()
    for m in (2, 3, 4, 5, 6):
        presentation = Presentation(2, (((0,), 2), ((1,), 2), ((0, 1), m)))
        assert todd_coxeter(presentation, 1000) == 2 * m
        if m == 2:
            s1, s2 = Perm(2, (1, 0, 2, 3)), Perm(2, (0, 1, 3, 2))
        else:
            width = (m - 1).bit_length()
            size = 1 << width
            s1 = Perm(width, tuple((m - i) % m if i < m else i for i in range(size)))
            s2 = Perm(width, tuple((1 - i) % m if i < m else i for i in range(size)))
        assert len(closure((s1, s2))) == 2 * m
        assert _germinate((s1, s2)) == 2 * m
    assert time.perf_counter() - started < 2.0


@criterion("permutation unitaries represent every small nondegenerate two-step group")
def test_unitary_representation_exhaustive(pipeline_suite):
    started = time.perf_counter()
    checked = 0
    for k, pipeline in enumerate(pipeline_suite):
        if pipeline.total_width > 6:
            continue
        s1, s2 = _two_step(pipeline)
        if nondegeneracy_defects((s1, s2)):
            continue
        group = closure((s1, s2))
        report = representation_check(group, trials=5, seed=50_000 + k)
        assert report.passed
        assert report.pairs_checked == 64 and report.group_order == 8
        checked += 1
    assert checked >= 10, f"suite produced only {checked} small nondegenerate pipelines"
    assert time.perf_counter() - started < 10.0


@criterion("quantum evaluation matches the classical pipeline and samples fairly")
def test_quantum_evaluation(pipeline_suite, two_step_id):
    started = time.perf_counter()
    for k, pipeline in enumerate(pipeline_suite):
        assert pipeline.total_width <= 9
        lay = layout(pipeline)
        f, g = pipeline.steps
        s1, s2 = _two_step(pipeline)
        unitary = PermUnitary(perm_compose(s2, s1))
        for x in range(1 << pipeline.widths[0]):
            out = apply(unitary, basis_state(lay, (x, 0, 0)))
            expected = basis_state(lay, (x, f(x), g(f(x))))
            assert out.amplitudes == expected.amplitudes
            shots = measure(out, lay, 2, seed=60_000 + 17 * k + x, shots=20)
            assert shots.counts == {g(f(x)): 20}

    lay = layout(two_step_id)
    s1, s2 = _two_step(two_step_id)
    prepared = uniform_superposition(lay, 0, basis_state(lay, (0, 0, 0)))
    out = apply(PermUnitary(perm_compose(s2, s1)), prepared)
    assert abs(out.norm() - 1.0) <= AMPLITUDE_TOLERANCE
    result = measure(out, lay, 2, seed=20250810, shots=10_000)
    for value in (0, 1):
        assert abs(result.counts.get(value, 0) / 10_000 - 0.5) <= 0.03
    assert time.perf_counter() - started < 5.0


@criterion("constant-zero steps yield DEGENERATE verdicts, never a false dihedral claim")
def test_zero_step_degeneracy():
    cases = [
        PipelineSpec((1, 1, 1), (zero_fn(1, 1), identity_fn(1))),
        PipelineSpec((1, 1, 1), (zero_fn(1, 1), zero_fn(1, 1))),
        PipelineSpec((2, 2, 2), (zero_fn(2, 2), identity_fn(2))),
        PipelineSpec((1, 2, 1), (zero_fn(1, 2), random_fn(2, 1, seed=5))),
    ]
    for pipeline in cases:
        report = verify_pipeline(pipeline)
        assert report.verdict == DEGENERATE
        group = closure(_two_step(pipeline))
        assert len(group) in (1, 2)
        assert report.concrete_order == len(group)
        assert is_dihedral_8(group) is None
