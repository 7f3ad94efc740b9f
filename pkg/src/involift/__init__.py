"""Lift pipelines of non-invertible Boolean functions to involutions on a
shared register space, enumerate the group those involutions generate,
test the group's Coxeter presentation by coset enumeration, and simulate
the induced permutation unitaries on qubit registers."""

__version__ = "0.1.0"

from .boolfn import (
    BoolFunc,
    MAX_FN_ARITY,
    compose_fn,
    identity_fn,
    pack_bits,
    random_fn,
    unpack_bits,
    zero_fn,
)
from .lifting import (
    ClassicalTrace,
    DEFAULT_WIDTH_CAP,
    Perm,
    PipelineSpec,
    RegisterLayout,
    forward_perm,
    layout,
    lift,
    pipeline_from_steps,
    random_pipeline,
    run_classical,
    step_involution,
)
from .permgroup import (
    ClosureCapExceeded,
    DEFAULT_ELEMENT_CAP,
    Dihedral8Witness,
    GroupClosure,
    closure,
    element_order_histogram,
    evaluate_word,
    is_dihedral_8,
    nondegeneracy_defects,
    perm_compose,
    perm_inverse,
    perm_order,
    shortest_word,
)
from .coxeter import (
    BOUND_EXCEEDED,
    CONFIRMED,
    CoxeterMatrix,
    DEFAULT_COSET_CAP,
    DEGENERATE,
    DegenerateGenerators,
    PROPER_QUOTIENT,
    Presentation,
    RelationCheck,
    VerificationReport,
    check_relations,
    claimed_coxeter_matrix,
    coxeter_matrix,
    generator_defects,
    pipeline_presentation,
    todd_coxeter,
    verify_pipeline,
)
from .quantum import (
    AMPLITUDE_TOLERANCE,
    MeasurementResult,
    PermUnitary,
    QState,
    RepresentationReport,
    apply,
    basis_state,
    marginal_distribution,
    measure,
    random_state,
    representation_check,
    states_close,
    uniform_superposition,
)
