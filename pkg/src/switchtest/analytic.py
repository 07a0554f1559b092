"""Closed-form probabilities and fidelity measures.

These are the pencil-and-paper values that the circuit simulator must
reproduce.  Keeping them in a separate module with no dependency on
``circuits`` gives two independent computation routes for every test,
which is what the cross-checks in the test suite lean on.

Conventions: V = U1^dag U2 is the discrepancy operator, F_l = |<l|V|l>|^2
is the fidelity witnessed by probe |l>, F_pro = |tr V|^2 / d^2 is the
process fidelity, and every pass probability has the form
(1 + interference) / 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyInput,
    InternalConsistency,
    OutOfRange,
)
from .gates import heisenberg_weyl_basis
from .probes import ProbeSet
from .qmath import QuantumState, UnitaryOp, tensor

IM_TOL = 1e-10


@dataclass(frozen=True)
class FidelityReport:
    """Per-probe fidelities together with their average and the process value."""

    dim: int
    f_pro: float
    f_bar: float
    per_probe: tuple[float, ...]


@dataclass(frozen=True)
class RepeatedTestReport:
    """Joint pass probabilities for n probes, individually vs averaged."""

    n: int
    p_repeated: float
    p_mixed: float


def _real_part(x: complex, what: str) -> float:
    if abs(x.imag) > IM_TOL:
        raise InternalConsistency(f"{what} has imaginary part {x.imag:.3e}")
    return float(x.real)


def swap_pass_prob(psi: QuantumState, phi: QuantumState) -> float:
    """(1 + tr(rho sigma)) / 2 for the controlled-SWAP test."""
    return 0.5 * (1.0 + psi.overlap_with(phi))


def single_switch_pass_prob(u1: UnitaryOp, u2: UnitaryOp, probe: QuantumState) -> float:
    """(1 + Re tr(U2 rho U1^dag)) / 2; reduces to
    (1 + Re <f|U1^dag U2|f>) / 2 on a pure probe."""
    _check_dims(u1, u2, probe.total_dim)
    if probe.is_pure:
        x = np.vdot(u1.matrix @ probe.vector, u2.matrix @ probe.vector)
    else:
        x = np.trace(u2.matrix @ probe.rho @ u1.matrix.conj().T)
    return 0.5 * (1.0 + float(x.real))


def modified_swap_pass_prob(u1: UnitaryOp, u2: UnitaryOp, phi: QuantumState) -> float:
    """(1 + |<f|U1^dag U2|f>|^2) / 2 for both registers prepared in pure |f>."""
    _check_dims(u1, u2, phi.total_dim)
    return 0.5 * (1.0 + probe_fidelity(u1, u2, phi))


def two_state_pass_prob(u1: UnitaryOp, u2: UnitaryOp, joint: QuantumState) -> float:
    """(1 + Re tr((U2 x U1) rho_J (U1 x U2)^dag)) / 2 on a joint two-register probe."""
    if joint.total_dim != u1.dim**2:
        raise DimensionMismatch(
            f"joint probe dim {joint.total_dim} != {u1.dim}^2"
        )
    a = tensor(u1.matrix, u2.matrix)
    b = tensor(u2.matrix, u1.matrix)
    x = np.trace(b @ joint.density() @ a.conj().T)
    return 0.5 * (1.0 + float(x.real))


def probe_fidelity(u1: UnitaryOp, u2: UnitaryOp, phi: QuantumState) -> float:
    """|<f|U1^dag U2|f>|^2 for a pure probe."""
    v = phi.require_pure()
    _check_dims(u1, u2, phi.total_dim)
    return float(abs(np.vdot(u1.matrix @ v, u2.matrix @ v)) ** 2)


def process_fidelity_closed(u1: UnitaryOp, u2: UnitaryOp) -> float:
    """|tr(U1^dag U2)|^2 / d^2."""
    _check_dims(u1, u2, u1.dim)
    d = u1.dim
    return float(abs(np.trace(u1.matrix.conj().T @ u2.matrix)) ** 2) / d**2


def process_fidelity_sum(u1: UnitaryOp, u2: UnitaryOp) -> float:
    """Operator-basis form of the process fidelity.

    (1/d^3) sum_j tr(U1 U_j^dag U1^dag U2 U_j U2^dag) over the d^2
    shift/clock basis elements.  Algebraically identical to the closed
    form because sum_j U_j^dag A U_j = d tr(A) I for any A; computing it
    by brute force provides an independent numeric route.
    """
    _check_dims(u1, u2, u1.dim)
    d = u1.dim
    m1, m2 = u1.matrix, u2.matrix
    acc = 0.0 + 0.0j
    for uj in heisenberg_weyl_basis(d):
        j = uj.matrix
        acc += np.trace(m1 @ j.conj().T @ m1.conj().T @ m2 @ j @ m2.conj().T)
    return _real_part(acc / d**3, "process fidelity sum")


def haar_average_fidelity(u1: UnitaryOp, u2: UnitaryOp) -> float:
    """Haar mean of the probe fidelity: (d F_pro + 1) / (d + 1)."""
    d = u1.dim
    return (d * process_fidelity_closed(u1, u2) + 1.0) / (d + 1.0)


def average_fidelity(u1: UnitaryOp, u2: UnitaryOp, probes) -> FidelityReport:
    """Mean probe fidelity over a set of pure probes.

    ``probes`` may be a ProbeSet or any iterable of QuantumState.  The
    report also carries the process fidelity so callers get both scales
    from one call.
    """
    states = tuple(probes.states) if isinstance(probes, ProbeSet) else tuple(probes)
    if not states:
        raise EmptyInput("average fidelity needs at least one probe")
    per = tuple(probe_fidelity(u1, u2, s) for s in states)
    return FidelityReport(
        dim=u1.dim,
        f_pro=process_fidelity_closed(u1, u2),
        f_bar=float(np.mean(per)),
        per_probe=per,
    )


def repeated_test_probs(fidelities) -> RepeatedTestReport:
    """Pass-all probability for n individual probes vs their average.

    Testing each probe separately passes with prod (1 + F_i) / 2, while
    pretending all probes share the average fidelity gives
    ((1 + mean F) / 2)^n.  By AM-GM the repeated value never exceeds the
    mixed one, with equality exactly when all fidelities agree.
    """
    f = [float(x) for x in fidelities]
    if not f:
        raise EmptyInput("need at least one fidelity")
    for x in f:
        if not 0.0 <= x <= 1.0:
            raise OutOfRange(f"fidelity {x!r} outside [0, 1]")
    p_rep = float(np.prod([(1.0 + x) / 2.0 for x in f]))
    p_mix = float(((1.0 + np.mean(f)) / 2.0) ** len(f))
    return RepeatedTestReport(n=len(f), p_repeated=p_rep, p_mixed=p_mix)


def overlap_from_two_passes(p_first: float, p_second: float) -> complex:
    """Reconstruct <f|U1^dag U2|f> from two pass probabilities.

    The first run uses U1 itself (pass probability encodes the real
    part); the second replaces U1 by i U1, rotating the imaginary part
    into view.  Both probabilities must lie in [0, 1].
    """
    for p in (p_first, p_second):
        if not 0.0 <= p <= 1.0:
            raise OutOfRange(f"pass probability {p!r} outside [0, 1]")
    return complex(2.0 * p_first - 1.0, 2.0 * p_second - 1.0)


def _check_dims(u1: UnitaryOp, u2: UnitaryOp, probe_dim: int) -> None:
    if u1.dim != u2.dim:
        raise DimensionMismatch(f"unitaries have dims {u1.dim} and {u2.dim}")
    if probe_dim != u1.dim:
        raise DimensionMismatch(f"probe dim {probe_dim} != operator dim {u1.dim}")
