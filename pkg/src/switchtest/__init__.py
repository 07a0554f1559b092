"""Simulator and analysis toolkit for interferometric unitary-comparison tests.

The package simulates the controlled-SWAP and controlled-SWITCH circuit
family exactly, evaluates the matching closed-form probabilities, and
runs seeded discrimination protocols with one-sided statistical
verdicts.
"""

__version__ = "0.1.0"

from .analytic import (
    FidelityReport,
    RepeatedTestReport,
    average_fidelity,
    haar_average_fidelity,
    modified_swap_pass_prob,
    overlap_from_two_passes,
    probe_fidelity,
    process_fidelity_closed,
    process_fidelity_sum,
    repeated_test_probs,
    single_switch_pass_prob,
    swap_pass_prob,
    two_state_pass_prob,
)
from .circuits import (
    CircuitResult,
    hom_coincidence,
    magic_probe_test,
    modified_swap_test,
    single_switch_test,
    swap_test,
    two_state_switch_test,
)
from .errors import (
    BadDimension,
    BadParameter,
    ConfigError,
    DimensionMismatch,
    EmptyInput,
    InternalConsistency,
    InvalidState,
    NonSquareMatrix,
    NotPure,
    NotSamplable,
    OutOfRange,
    SwitchTestError,
    UnknownGate,
)
from .gates import (
    GateSpec,
    clock,
    controlled_swap,
    generalized_cx,
    hadamard,
    heisenberg_weyl_basis,
    heisenberg_weyl_element,
    identity,
    parse_gate,
    parse_operator,
    resolve_gate,
    rz,
    shift,
    swap,
    switch_gate,
    two_state_switch_gate,
)
from .probes import (
    AffineStateMix,
    ProbeSet,
    basis_probes,
    double_register,
    eigendecomposition,
    entangled_probe,
    haar_probes,
    magic_squared_probe,
    magic_state,
    maximally_mixed_probe,
    operator_basis_probes,
    resolve_probe_token,
)
from .protocol import (
    CERTAINLY_DIFFERENT,
    CONSISTENT_WITH_EQUAL,
    ClaimReport,
    OverlapEstimate,
    ShotRecord,
    SweepPoint,
    Verdict,
    check_am_gm,
    check_magic_claim,
    clock_phase_unitary,
    clock_theta_for_infidelity,
    clopper_pearson,
    derive_rng,
    discriminate,
    discrimination_sweep,
    hoeffding_radius,
    joint_probe,
    probe_pass_probabilities,
    run_shots,
    two_pass_overlap,
)
from .qmath import (
    MAX_TOTAL_DIM,
    QuantumState,
    UnitaryOp,
    dagger,
    mat_trace,
    partial_trace,
    random_pure_state,
    random_unitary,
    tensor,
)
