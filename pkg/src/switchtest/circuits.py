"""Exact simulation of the ancilla interferometer circuits.

Every test in this family is the same experiment: prepare the ancilla in
|+>, apply a controlled operation G that acts differently on the |0> and
|1> branches, apply H to the ancilla again, and measure it.  "Pass" is
the outcome 0.  The simulator builds the full circuit unitary
(H x I) G (H x I), evolves the complete joint state, and reads the pass
probability and the conditioned probe states off the ancilla blocks.
Nothing here uses the closed-form probabilities; those live in
``analytic`` so the two routes can check each other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InternalConsistency
from .gates import hadamard, swap, switch_gate, two_state_switch_gate
from .probes import AffineStateMix, double_register
from .qmath import QuantumState, UnitaryOp, tensor

# Probabilities this far outside [0, 1] indicate a bug, not roundoff.
PROB_SLACK = 1e-10
# Conditioned states are only reported when the branch has real weight.
POST_EPS = 1e-12


@dataclass(frozen=True)
class CircuitResult:
    """Outcome of one interferometer run.

    post_state_pass / post_state_fail are the probe states conditioned
    on the ancilla outcome, with the ancilla projected out.  A branch
    with probability below POST_EPS carries no meaningful state and is
    reported as None.
    """

    p_pass: float
    post_state_pass: QuantumState | None
    post_state_fail: QuantumState | None

    @property
    def p_fail(self) -> float:
        return 1.0 - self.p_pass


def _clamped_probability(p: float) -> float:
    if p < -PROB_SLACK or p > 1.0 + PROB_SLACK:
        raise InternalConsistency(f"probability {p!r} outside [0, 1] beyond slack")
    return min(max(p, 0.0), 1.0)


def _run_interferometer(controlled: UnitaryOp, probe: QuantumState) -> CircuitResult:
    """Evolve ancilla + probe through (H x I) G (H x I) and project the ancilla."""
    n = probe.total_dim
    if controlled.dim != 2 * n:
        raise DimensionMismatch(
            f"controlled gate dim {controlled.dim} does not match probe dim {n}"
        )
    h_full = tensor(hadamard().matrix, np.eye(n, dtype=np.complex128))
    circuit = h_full @ controlled.matrix @ h_full

    if probe.is_pure:
        full_in = np.zeros(2 * n, dtype=np.complex128)
        full_in[:n] = probe.vector  # ancilla starts in |0>
        full_out = circuit @ full_in
        b0, b1 = full_out[:n], full_out[n:]
        p = _clamped_probability(float(np.vdot(b0, b0).real))
        post_pass = (
            QuantumState(dims=probe.dims, vector=b0 / np.sqrt(p)) if p > POST_EPS else None
        )
        post_fail = (
            QuantumState(dims=probe.dims, vector=b1 / np.sqrt(1.0 - p))
            if 1.0 - p > POST_EPS
            else None
        )
        return CircuitResult(p, post_pass, post_fail)

    full_rho = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    full_rho[:n, :n] = probe.rho
    out = circuit @ full_rho @ circuit.conj().T
    block0, block1 = out[:n, :n], out[n:, n:]
    p = _clamped_probability(float(np.trace(block0).real))
    post_pass = (
        QuantumState(dims=probe.dims, rho=block0 / p) if p > POST_EPS else None
    )
    post_fail = (
        QuantumState(dims=probe.dims, rho=block1 / (1.0 - p)) if 1.0 - p > POST_EPS else None
    )
    return CircuitResult(p, post_pass, post_fail)


def _controlled_branches(b0: np.ndarray, b1: np.ndarray) -> UnitaryOp:
    n = b0.shape[0]
    m = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    m[:n, :n] = b0
    m[n:, n:] = b1
    return UnitaryOp(m)


# -- the circuits ------------------------------------------------------


def swap_test(psi: QuantumState, phi: QuantumState) -> CircuitResult:
    """Controlled-SWAP interferometer on two states of equal dimension.

    Passes with probability (1 + tr(rho sigma)) / 2, so equal pure
    inputs always pass and orthogonal pure inputs pass half the time.
    """
    if psi.total_dim != phi.total_dim:
        raise DimensionMismatch(
            f"swap test needs equal dims, got {psi.total_dim} and {phi.total_dim}"
        )
    d = psi.total_dim
    joint = psi.tensor(phi)
    branches = _controlled_branches(np.eye(d * d, dtype=np.complex128), swap(d).matrix)
    return _run_interferometer(branches, joint)


def single_switch_test(u1: UnitaryOp, u2: UnitaryOp, probe: QuantumState) -> CircuitResult:
    """One probe, ancilla selects which unitary acts.

    Pass probability (1 + Re tr(U2 rho U1^dag)) / 2.  The interference
    term is linear in each unitary, so this test distinguishes operators
    that differ only by a global phase.
    """
    if probe.total_dim != u1.dim:
        raise DimensionMismatch(f"probe dim {probe.total_dim} != operator dim {u1.dim}")
    return _run_interferometer(switch_gate(u1, u2), probe)


def modified_swap_test(
    u1: UnitaryOp, u2: UnitaryOp, psi: QuantumState, phi: QuantumState
) -> CircuitResult:
    """Apply U1 x U2 to the pair, then run the swap test.

    With both probes in the same pure state |f> this passes with
    probability (1 + |<f|U1^dag U2|f>|^2) / 2: the squared modulus makes
    it insensitive to any global phase difference.
    """
    if psi.total_dim != u1.dim or phi.total_dim != u2.dim:
        raise DimensionMismatch("probe dims must match operator dims")
    _require_equal(u1, u2)
    evolved = _apply_product(u1, u2, psi.tensor(phi))
    d = u1.dim
    branches = _controlled_branches(np.eye(d * d, dtype=np.complex128), swap(d).matrix)
    return _run_interferometer(branches, evolved)


def two_state_switch_test(u1: UnitaryOp, u2: UnitaryOp, joint: QuantumState) -> CircuitResult:
    """Two probe registers, ancilla selects the assignment order.

    The controlled gate is U1 x U2 on the |0> branch and U2 x U1 on the
    |1> branch, giving pass probability
    (1 + Re tr((U2 x U1) rho_J (U1 x U2)^dag)) / 2 on a joint probe
    rho_J.  Global phases cancel between the branches, so this test is
    phase-blind while still certifying operator difference.
    """
    _require_equal(u1, u2)
    if joint.total_dim != u1.dim ** 2:
        raise DimensionMismatch(
            f"joint probe dim {joint.total_dim} != {u1.dim}^2; pass a two-register state"
        )
    return _run_interferometer(two_state_switch_gate(u1, u2), joint)


def magic_probe_test(u1: UnitaryOp, u2: UnitaryOp, mix: AffineStateMix) -> float:
    """Weight-combined two-register switch statistic on an affine mixture.

    Accepts either a single-register mixture (each component |v> is
    expanded to sum_x v_x |xx> by the controlled shift before the test)
    or an already-expanded two-register mixture.  Each pure component
    runs through the exact circuit; the results combine affinely as
    1/2 + Re sum_k w_k (p_k - 1/2), which keeps the constant offset of
    the pass probability out of the weighting.  Taking the real part
    mirrors the Re tr(...) in the closed-form probability; with complex
    weights the discarded imaginary part is generally nonzero.  The
    value can leave [0, 1] for non-physical weights; that is the point.
    """
    _require_equal(u1, u2)
    d = u1.dim
    if mix.dim == d:
        components = [(w, double_register(state)) for w, state in mix.components]
    elif mix.dim == d * d:
        components = list(mix.components)
    else:
        raise DimensionMismatch(f"mixture dim {mix.dim} fits neither {d} nor {d * d}")
    acc = 0.0 + 0.0j
    for w, state in components:
        p = two_state_switch_test(u1, u2, state).p_pass
        acc += w * (p - 0.5)
    return 0.5 + acc.real


def hom_coincidence(rho: QuantumState, sigma: QuantumState) -> float:
    """Two-photon coincidence probability at a balanced beamsplitter.

    For photons with internal states rho and sigma the coincidence rate
    is (1 - tr(rho sigma)) / 2; identical pure states never coincide and
    orthogonal ones coincide half the time.  The complement
    1 - coincidence is the optical analogue of the two-register switch
    pass probability.  Only the internal-state statistics are modeled.
    """
    if rho.total_dim != sigma.total_dim:
        raise DimensionMismatch(
            f"photon states have dims {rho.total_dim} and {sigma.total_dim}"
        )
    return _clamped_probability(0.5 * (1.0 - rho.overlap_with(sigma)))


def _apply_product(u1: UnitaryOp, u2: UnitaryOp, joint: QuantumState) -> QuantumState:
    m = tensor(u1.matrix, u2.matrix)
    if joint.is_pure:
        return QuantumState(dims=joint.dims, vector=m @ joint.vector)
    return QuantumState(dims=joint.dims, rho=m @ joint.rho @ m.conj().T)


def _require_equal(u1: UnitaryOp, u2: UnitaryOp) -> None:
    if u1.dim != u2.dim:
        raise DimensionMismatch(f"unitaries have dims {u1.dim} and {u2.dim}")
