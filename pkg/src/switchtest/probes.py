"""Probe state families and affine mixtures of pure states.

A probe is what gets fed through the interferometer.  Most families are
plain lists of states (computational basis, Haar samples, eigenvectors
of the operator basis).  The exception is the "magic" family: the
normalized sum of all d^2 operator-basis elements, expanded over their
eigenvectors.  Its weights are complex and do not form a probability
distribution, so it is kept as an AffineStateMix, a formal weighted
combination that only turns into a density matrix when the weights
happen to be physical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import (
    BadParameter,
    DimensionMismatch,
    EmptyInput,
    InternalConsistency,
    InvalidState,
)
from .gates import generalized_cx, heisenberg_weyl_basis
from .qmath import QuantumState, UnitaryOp, random_pure_state

SCHUR_OFFDIAG_TOL = 1e-10
PHASE_ZERO_TOL = 1e-12


@dataclass(frozen=True)
class AffineStateMix:
    """A formal combination sum_k w_k |v_k><v_k| with complex weights w_k.

    Unlike a density matrix the weights may be negative or complex; the
    mix is just a bookkeeping device for statistics that are affine in
    the state.  ``to_density`` converts to a QuantumState and therefore
    fails loudly whenever the weights are not a genuine distribution.
    """

    dim: int
    components: tuple[tuple[complex, QuantumState], ...]

    def __post_init__(self):
        if not self.components:
            raise EmptyInput("mixture needs at least one component")
        comps = []
        for w, state in self.components:
            w = complex(w)
            if not (np.isfinite(w.real) and np.isfinite(w.imag)):
                raise InvalidState(f"non-finite mixture weight {w!r}")
            state.require_pure()
            if state.total_dim != self.dim:
                raise DimensionMismatch(
                    f"component dim {state.total_dim} != mixture dim {self.dim}"
                )
            comps.append((w, state))
        object.__setattr__(self, "components", tuple(comps))

    @property
    def weight_sum(self) -> complex:
        return complex(sum(w for w, _ in self.components))

    def flatten(self) -> np.ndarray:
        """The matrix sum_k w_k |v_k><v_k| (not necessarily a state)."""
        out = np.zeros((self.dim, self.dim), dtype=np.complex128)
        for w, state in self.components:
            v = state.vector
            out += w * np.outer(v, v.conj())
        return out

    def scaled(self, factor: complex) -> "AffineStateMix":
        return AffineStateMix(
            dim=self.dim,
            components=tuple((factor * w, s) for w, s in self.components),
        )

    def to_density(self) -> QuantumState:
        """Convert to a QuantumState; raises unless the mix is physical."""
        return QuantumState.mixed(self.flatten(), dims=(self.dim,))


@dataclass(frozen=True)
class ProbeSet:
    """A labeled family of probe states, or a single affine mixture."""

    label: str
    states: tuple[QuantumState, ...] = ()
    mix: AffineStateMix | None = None

    def __post_init__(self):
        if not self.states and self.mix is None:
            raise EmptyInput(f"probe set {self.label!r} is empty")
        dims = {s.total_dim for s in self.states}
        if self.mix is not None:
            dims.add(self.mix.dim)
        if len(dims) != 1:
            raise DimensionMismatch(f"probe set {self.label!r} mixes dims {sorted(dims)}")
        object.__setattr__(self, "states", tuple(self.states))

    @property
    def dim(self) -> int:
        if self.states:
            return self.states[0].total_dim
        return self.mix.dim

    def __len__(self) -> int:
        return len(self.states)


# -- plain families ----------------------------------------------------


def basis_probes(d: int) -> ProbeSet:
    """The d computational basis states."""
    return ProbeSet("basis", tuple(QuantumState.basis(d, k) for k in range(d)))


def single_basis_probe(d: int, k: int) -> ProbeSet:
    return ProbeSet(f"basis:{k}", (QuantumState.basis(d, k),))


def maximally_mixed_probe(d: int) -> ProbeSet:
    return ProbeSet("mixed", (QuantumState.maximally_mixed(d),))


def haar_probes(d: int, n: int, seed) -> ProbeSet:
    """n independent Haar-random pure probes from one seeded stream."""
    if n < 1:
        raise BadParameter(f"haar probe count must be >= 1, got {n}")
    rng = np.random.default_rng(seed)
    return ProbeSet(f"haar:{n}", tuple(random_pure_state(d, rng) for _ in range(n)))


def entangled_probe(d: int) -> QuantumState:
    """The correlated two-register state (1/d) sum_x |xx><xx|.

    Equivalently: the maximally mixed state copied into a second
    register by the controlled shift.  Feeding it to the two-register
    switch test yields the basis-averaged fidelity in one experiment.
    """
    rho = np.zeros((d * d, d * d), dtype=np.complex128)
    for x in range(d):
        idx = x * d + x
        rho[idx, idx] = 1.0 / d
    return QuantumState.mixed(rho, dims=(d, d))


def entangled_probe_set(d: int) -> ProbeSet:
    return ProbeSet("entangled", (entangled_probe(d),))


def double_register(state: QuantumState) -> QuantumState:
    """CX-expand |v> = sum_x v_x |x> into the correlated sum_x v_x |xx>.

    This is copying in the computational basis, not cloning: for a
    superposition the result is entangled rather than a product of two
    copies.
    """
    v = state.require_pure()
    d = state.total_dim
    e0 = np.zeros(d, dtype=np.complex128)
    e0[0] = 1.0
    doubled = generalized_cx(d).matrix @ np.kron(v, e0)
    return QuantumState(dims=(d, d), vector=doubled)


# -- operator-basis eigenvectors and the magic mixture ------------------


def eigendecomposition(u: UnitaryOp) -> list[tuple[complex, QuantumState]]:
    """Eigenpairs of a unitary via a complex Schur factorization.

    Unitary matrices are normal, so the Schur triangle is diagonal and
    the Schur vectors are an orthonormal eigenbasis.  Each eigenvector
    is phase-fixed so its first nonzero component is real positive,
    which makes the decomposition deterministic and maps diagonal
    operators to computational basis vectors.
    """
    t, q = scipy.linalg.schur(u.matrix, output="complex")
    offdiag = np.max(np.abs(t - np.diag(np.diag(t))))
    if offdiag > SCHUR_OFFDIAG_TOL:
        raise InternalConsistency(f"Schur form not diagonal, offdiag {offdiag:.3e}")
    pairs = []
    for j in range(u.dim):
        v = q[:, j].copy()
        nz = np.flatnonzero(np.abs(v) > PHASE_ZERO_TOL)
        if nz.size == 0:
            raise InternalConsistency("zero eigenvector from Schur factorization")
        lead = v[nz[0]]
        v *= lead.conjugate() / abs(lead)
        pairs.append((complex(t[j, j]), QuantumState.pure(v)))
    return pairs


def operator_basis_probes(d: int) -> ProbeSet:
    """Eigenvectors of all d^2 shift/clock operators: d^3 probe states.

    Measuring each operator of a complete basis on its own eigenstates
    is the exhaustive certification strategy; repeated states (for
    example the computational basis, which appears once per diagonal
    operator) are kept so the set always has exactly d^3 entries.
    """
    states = []
    for u in heisenberg_weyl_basis(d):
        states.extend(state for _, state in eigendecomposition(u))
    return ProbeSet("operator_basis", tuple(states))


def magic_state(d: int) -> AffineStateMix:
    """The normalized operator-basis sum (1/d^3) sum_i U_i as an affine mix.

    Each of the d^2 basis elements contributes its d eigenpairs
    (lambda, v) with weight lambda / d^3.  The weights sum to 1/d^2
    (only the identity has nonzero trace) and include negative and
    imaginary values, so this is not a physical state.
    """
    components = []
    for u in heisenberg_weyl_basis(d):
        for lam, vec in eigendecomposition(u):
            components.append((lam / d**3, vec))
    return AffineStateMix(dim=d, components=tuple(components))


def magic_squared_probe(mix: AffineStateMix) -> AffineStateMix:
    """CX-expand every component of a single-register mix onto two registers."""
    doubled = tuple((w, double_register(state)) for w, state in mix.components)
    return AffineStateMix(dim=mix.dim**2, components=doubled)


# -- probe token resolution ---------------------------------------------


def resolve_probe_token(token: str, d: int, seed) -> ProbeSet:
    """Build a probe set from a CLI-style token.

    Tokens: ``basis``, ``basis:K``, ``mixed``, ``haar:N``, ``magic``,
    ``entangled``, ``operator_basis``.
    """
    token = token.strip().lower()
    if token == "basis":
        return basis_probes(d)
    if token.startswith("basis:"):
        try:
            k = int(token.split(":", 1)[1])
        except ValueError as exc:
            raise BadParameter(f"bad basis index in {token!r}") from exc
        if not 0 <= k < d:
            raise BadParameter(f"basis index {k} out of range for dimension {d}")
        return single_basis_probe(d, k)
    if token == "mixed":
        return maximally_mixed_probe(d)
    if token.startswith("haar:"):
        try:
            n = int(token.split(":", 1)[1])
        except ValueError as exc:
            raise BadParameter(f"bad probe count in {token!r}") from exc
        return haar_probes(d, n, seed)
    if token == "magic":
        return ProbeSet("magic", mix=magic_squared_probe(magic_state(d)))
    if token == "entangled":
        return entangled_probe_set(d)
    if token == "operator_basis":
        return operator_basis_probes(d)
    raise BadParameter(f"unknown probe token {token!r}")
