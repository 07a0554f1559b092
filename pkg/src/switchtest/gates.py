"""Gate constructors and the text mini-language used by the CLI.

Besides the usual fixed gates this module builds the two controlled
constructions at the heart of the package: ``switch_gate`` (ancilla
selects which of two unitaries acts on one probe register) and
``two_state_switch_gate`` (ancilla selects the order in which the two
unitaries are distributed over a pair of probe registers).  It also
provides the shift/clock operator basis X^a Z^b for dimension d, whose
d^2 elements are unitary, pairwise trace-orthogonal, and complete.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .errors import BadDimension, BadParameter, DimensionMismatch, UnknownGate
from .qmath import UnitaryOp, tensor


def identity(d: int) -> UnitaryOp:
    return UnitaryOp(np.eye(d, dtype=np.complex128))


def shift(d: int) -> UnitaryOp:
    """Cyclic shift X: |k> -> |k+1 mod d>.  The Pauli X when d = 2."""
    m = np.zeros((d, d), dtype=np.complex128)
    for k in range(d):
        m[(k + 1) % d, k] = 1.0
    return UnitaryOp(m)


def clock(d: int) -> UnitaryOp:
    """Clock Z = diag(1, w, ..., w^{d-1}) with w = exp(2 pi i / d)."""
    w = np.exp(2j * np.pi / d)
    return UnitaryOp(np.diag(w ** np.arange(d)))


def pauli_y() -> UnitaryOp:
    return UnitaryOp(np.array([[0, -1j], [1j, 0]], dtype=np.complex128))


def hadamard() -> UnitaryOp:
    return UnitaryOp(np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2))


def phase_s() -> UnitaryOp:
    return UnitaryOp(np.diag([1, 1j]).astype(np.complex128))


def rz(theta: float) -> UnitaryOp:
    """Qubit phase rotation diag(1, e^{i theta})."""
    return UnitaryOp(np.diag([1.0, np.exp(1j * theta)]))


def swap(d: int) -> UnitaryOp:
    """SWAP on two registers of dimension d each: |x>|y> -> |y>|x>."""
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    for x in range(d):
        for y in range(d):
            m[y * d + x, x * d + y] = 1.0
    return UnitaryOp(m)


def generalized_cx(d: int) -> UnitaryOp:
    """Controlled shift |x>|y> -> |x>|y + x mod d>; the CNOT when d = 2."""
    m = np.zeros((d * d, d * d), dtype=np.complex128)
    for x in range(d):
        for y in range(d):
            m[x * d + (y + x) % d, x * d + y] = 1.0
    return UnitaryOp(m)


def heisenberg_weyl_element(d: int, a: int, b: int) -> UnitaryOp:
    """X^a Z^b on C^d."""
    if not (0 <= a < d and 0 <= b < d):
        raise BadParameter(f"operator powers ({a}, {b}) out of range for dimension {d}")
    xa = np.linalg.matrix_power(shift(d).matrix, a)
    zb = np.linalg.matrix_power(clock(d).matrix, b)
    return UnitaryOp(xa @ zb)


def heisenberg_weyl_basis(d: int) -> list[UnitaryOp]:
    """All d^2 elements X^a Z^b, ordered by index a*d + b.

    The list starts with the identity (a = b = 0) and satisfies the
    orthogonality relation tr(U_i^dag U_j) = d * delta_ij.
    """
    if d < 2:
        raise BadDimension(f"operator basis needs dimension >= 2, got {d}")
    return [heisenberg_weyl_element(d, a, b) for a in range(d) for b in range(d)]


# -- controlled constructions -----------------------------------------


def controlled_swap(d: int) -> UnitaryOp:
    """Fredkin on ancilla + two d-dimensional registers: swap iff ancilla is |1>."""
    n = d * d
    block0 = np.eye(n, dtype=np.complex128)
    block1 = swap(d).matrix
    return UnitaryOp(_block_diag(block0, block1))


def switch_gate(u1: UnitaryOp, u2: UnitaryOp) -> UnitaryOp:
    """|0><0| x U1 + |1><1| x U2: the ancilla selects which unitary acts."""
    _require_same_dim(u1, u2)
    return UnitaryOp(_block_diag(u1.matrix, u2.matrix))


def two_state_switch_gate(u1: UnitaryOp, u2: UnitaryOp) -> UnitaryOp:
    """|0><0| x (U1 x U2) + |1><1| x (U2 x U1).

    The ancilla selects the assignment order of the two unitaries to two
    probe registers.  Unlike ``switch_gate`` this construction is blind
    to a global phase on either unitary: the phase appears in both
    branches and cancels in the interference term.
    """
    _require_same_dim(u1, u2)
    b0 = tensor(u1.matrix, u2.matrix)
    b1 = tensor(u2.matrix, u1.matrix)
    return UnitaryOp(_block_diag(b0, b1))


def _block_diag(b0: np.ndarray, b1: np.ndarray) -> np.ndarray:
    n = b0.shape[0]
    m = np.zeros((2 * n, 2 * n), dtype=np.complex128)
    m[:n, :n] = b0
    m[n:, n:] = b1
    return m


def _require_same_dim(u1: UnitaryOp, u2: UnitaryOp) -> None:
    if u1.dim != u2.dim:
        raise DimensionMismatch(f"unitaries have dims {u1.dim} and {u2.dim}")


# -- gate mini-language ------------------------------------------------

_TOKEN_RE = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)(?:\((.*)\))?$")


@dataclass(frozen=True)
class GateSpec:
    """A parsed single-gate token: name, target dimension, parameters.

    ``params`` holds numeric arguments (RZ angle, operator powers);
    ``source`` holds the file path for CUSTOM gates.
    """

    name: str
    dim: int
    params: tuple[float, ...] = ()
    source: str | None = None


def parse_gate(text: str, dim: int) -> GateSpec:
    """Parse one token of the form NAME or NAME(args) against a dimension."""
    m = _TOKEN_RE.match(text.strip())
    if m is None:
        raise UnknownGate(f"cannot parse gate token {text!r}")
    name = m.group(1).upper()
    raw_args = m.group(2)
    if name == "CUSTOM":
        if raw_args is None or not raw_args.strip():
            raise BadParameter("CUSTOM requires a file path argument")
        return GateSpec(name=name, dim=dim, source=raw_args.strip())
    params: tuple[float, ...] = ()
    if raw_args is not None:
        try:
            params = tuple(float(p) for p in raw_args.split(","))
        except ValueError as exc:
            raise BadParameter(f"bad numeric arguments in {text!r}") from exc
    return GateSpec(name=name, dim=dim, params=params)


def resolve_gate(spec: GateSpec) -> UnitaryOp:
    """Build the unitary named by a GateSpec, enforcing dimension rules."""
    name, d = spec.name, spec.dim
    if d < 2:
        raise BadDimension(f"gate dimension must be >= 2, got {d}")
    if name == "I":
        _expect_params(spec, 0)
        return identity(d)
    if name == "X":
        _expect_params(spec, 0)
        return shift(d)
    if name == "Z":
        _expect_params(spec, 0)
        return clock(d)
    if name == "Y":
        _expect_params(spec, 0)
        _expect_dim(spec, 2)
        return pauli_y()
    if name == "H":
        _expect_params(spec, 0)
        _expect_dim(spec, 2)
        return hadamard()
    if name == "S":
        _expect_params(spec, 0)
        _expect_dim(spec, 2)
        return phase_s()
    if name == "RZ":
        _expect_params(spec, 1)
        _expect_dim(spec, 2)
        return rz(spec.params[0])
    if name == "CNOT":
        _expect_params(spec, 0)
        k = _square_side(spec)
        return generalized_cx(k)
    if name == "SWAP":
        _expect_params(spec, 0)
        k = _square_side(spec)
        return swap(k)
    if name == "HW":
        _expect_params(spec, 2)
        a, b = spec.params
        if a != int(a) or b != int(b):
            raise BadParameter(f"HW powers must be integers, got {spec.params}")
        return heisenberg_weyl_element(d, int(a), int(b))
    if name == "CUSTOM":
        # Deferred import: file handling lives with the serialization code.
        from .matfile import load_unitary

        u = load_unitary(spec.source)
        if u.dim != d:
            raise DimensionMismatch(f"file unitary has dim {u.dim}, expected {d}")
        return u
    raise UnknownGate(f"unknown gate name {spec.name!r}")


def parse_operator(text: str, dim: int) -> UnitaryOp:
    """Resolve a full operator expression, including ``tensor:`` products.

    ``tensor:A,B`` builds A x B where the factor dimensions multiply out
    to ``dim``; factor dimensions must be equal (registers of one size).
    """
    text = text.strip()
    if text.lower().startswith("tensor:"):
        parts = [p for p in text[len("tensor:"):].split(",") if p.strip()]
        if len(parts) < 2:
            raise BadParameter("tensor: needs at least two comma-separated factors")
        k = round(dim ** (1.0 / len(parts)))
        if k ** len(parts) != dim:
            raise DimensionMismatch(
                f"dimension {dim} is not a {len(parts)}-fold power of equal registers"
            )
        factors = [resolve_gate(parse_gate(p, k)) for p in parts]
        out = factors[0]
        for f in factors[1:]:
            out = out.tensor(f)
        return out
    return resolve_gate(parse_gate(text, dim))


def _expect_params(spec: GateSpec, n: int) -> None:
    if len(spec.params) != n:
        raise BadParameter(f"{spec.name} takes {n} parameter(s), got {len(spec.params)}")


def _expect_dim(spec: GateSpec, d: int) -> None:
    if spec.dim != d:
        raise BadDimension(f"{spec.name} is only defined for dimension {d}, got {spec.dim}")


def _square_side(spec: GateSpec) -> int:
    k = round(np.sqrt(spec.dim))
    if k * k != spec.dim or k < 2:
        raise BadDimension(f"{spec.name} needs a two-register dimension k^2, got {spec.dim}")
    return k
