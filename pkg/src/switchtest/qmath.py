"""Core linear algebra: typed wrappers for unitaries and states.

All matrices are dense ``np.complex128`` arrays.  The package targets
desk-scale systems, so validation is strict rather than fast: every
UnitaryOp is checked against U U^dag = I and every QuantumState against
normalization / positivity when constructed.  Total Hilbert dimension is
capped at MAX_TOTAL_DIM; beyond that dense simulation is the wrong tool.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadDimension,
    DimensionMismatch,
    InvalidState,
    NonSquareMatrix,
    NotPure,
)

MAX_TOTAL_DIM = 4096

UNITARY_ATOL = 1e-10
STATE_ATOL = 1e-10


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise NonSquareMatrix(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise InvalidState("matrix contains non-finite entries")
    return m


def mat_trace(a) -> complex:
    m = as_complex_matrix(a)
    if m.shape[0] != m.shape[1]:
        raise NonSquareMatrix(f"trace of non-square matrix {m.shape}")
    return complex(np.trace(m))


def dagger(a) -> np.ndarray:
    """Conjugate transpose, returned as a fresh contiguous array."""
    return np.ascontiguousarray(as_complex_matrix(a).conj().T)


def tensor(a, b) -> np.ndarray:
    """Kronecker product of two matrices (or column vectors)."""
    return np.kron(np.asarray(a, dtype=np.complex128), np.asarray(b, dtype=np.complex128))


def _check_total_dim(dim: int) -> None:
    if dim < 1:
        raise BadDimension(f"dimension must be positive, got {dim}")
    if dim > MAX_TOTAL_DIM:
        raise BadDimension(f"total dimension {dim} exceeds cap {MAX_TOTAL_DIM}")


def _as_rng(seed) -> np.random.Generator:
    """Accept an integer seed or a ready Generator."""
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unitary(d: int, seed) -> "UnitaryOp":
    """Haar-random unitary on C^d.

    QR of a complex Ginibre matrix, with the R diagonal phases divided
    out so the distribution is exactly Haar rather than QR-convention
    biased.
    """
    _check_total_dim(d)
    rng = _as_rng(seed)
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    phases = np.diag(r) / np.abs(np.diag(r))
    return UnitaryOp(q * phases)


def random_pure_state(d: int, seed) -> "QuantumState":
    """Haar-random pure state: normalized complex Gaussian vector."""
    _check_total_dim(d)
    rng = _as_rng(seed)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return QuantumState.pure(v / np.linalg.norm(v))


def partial_trace(rho: np.ndarray, dims: tuple[int, ...], keep: tuple[int, ...]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep``.

    dims gives the register dimensions in tensor order; keep lists the
    register indices to retain, in their original order.
    """
    rho = as_complex_matrix(rho)
    n = len(dims)
    total = int(np.prod(dims))
    if rho.shape != (total, total):
        raise DimensionMismatch(f"rho shape {rho.shape} does not match dims {dims}")
    keep = tuple(keep)
    if any(k < 0 or k >= n for k in keep):
        raise BadDimension(f"keep indices {keep} out of range for {n} registers")
    t = rho.reshape(*dims, *dims)
    # Contract the bra and ket indices of each traced register.
    traced = 0
    for reg in range(n):
        if reg in keep:
            continue
        axis = reg - traced
        t = np.trace(t, axis1=axis, axis2=axis + (n - traced))
        traced += 1
    kept = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(kept, kept)


@dataclass(frozen=True)
class UnitaryOp:
    """A validated unitary operator on a Hilbert space of dimension dim."""

    matrix: np.ndarray
    dim: int = field(init=False)

    def __post_init__(self):
        m = as_complex_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise NonSquareMatrix(f"unitary must be square, got {m.shape}")
        _check_total_dim(m.shape[0])
        err = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
        if err > UNITARY_ATOL:
            raise InvalidState(f"matrix is not unitary: |U U^dag - I| = {err:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "dim", m.shape[0])

    def dagger(self) -> "UnitaryOp":
        return UnitaryOp(dagger(self.matrix))

    def tensor(self, other: "UnitaryOp") -> "UnitaryOp":
        return UnitaryOp(tensor(self.matrix, other.matrix))

    def phased(self, alpha: float) -> "UnitaryOp":
        """The same operator with a global phase e^{i alpha} attached."""
        return UnitaryOp(np.exp(1j * alpha) * self.matrix)

    def __matmul__(self, other: "UnitaryOp") -> "UnitaryOp":
        if self.dim != other.dim:
            raise DimensionMismatch(f"cannot compose dims {self.dim} and {other.dim}")
        return UnitaryOp(self.matrix @ other.matrix)


@dataclass(frozen=True)
class QuantumState:
    """A pure or mixed state over one or more registers.

    Pure states hold a normalized vector; mixed states hold a Hermitian,
    unit-trace, positive-semidefinite density matrix.  dims records the
    register structure (e.g. (2, 2) for two qubits) and multiplies out to
    the total dimension.
    """

    dims: tuple[int, ...]
    vector: np.ndarray | None = None
    rho: np.ndarray | None = None

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise BadDimension(f"bad register dims {dims}")
        total = int(np.prod(dims))
        _check_total_dim(total)
        object.__setattr__(self, "dims", dims)
        if (self.vector is None) == (self.rho is None):
            raise InvalidState("exactly one of vector/rho must be given")
        if self.vector is not None:
            v = np.asarray(self.vector, dtype=np.complex128).reshape(-1)
            if v.shape[0] != total:
                raise DimensionMismatch(f"vector length {v.shape[0]} != prod(dims) {total}")
            if not np.all(np.isfinite(v.real)) or not np.all(np.isfinite(v.imag)):
                raise InvalidState("state vector contains non-finite entries")
            nrm = np.linalg.norm(v)
            if abs(nrm - 1.0) > STATE_ATOL:
                raise InvalidState(f"state vector norm {nrm!r} is not 1")
            v.setflags(write=False)
            object.__setattr__(self, "vector", v)
        else:
            r = as_complex_matrix(self.rho)
            if r.shape != (total, total):
                raise DimensionMismatch(f"rho shape {r.shape} != ({total}, {total})")
            if np.max(np.abs(r - r.conj().T)) > STATE_ATOL:
                raise InvalidState("density matrix is not Hermitian")
            tr = np.trace(r).real
            if abs(tr - 1.0) > STATE_ATOL:
                raise InvalidState(f"density matrix trace {tr!r} is not 1")
            evals = np.linalg.eigvalsh(r)
            if evals.min() < -STATE_ATOL:
                raise InvalidState(f"density matrix has negative eigenvalue {evals.min():.3e}")
            r.setflags(write=False)
            object.__setattr__(self, "rho", r)

    # -- constructors -------------------------------------------------

    @classmethod
    def pure(cls, vector, dims: tuple[int, ...] | None = None) -> "QuantumState":
        v = np.asarray(vector, dtype=np.complex128).reshape(-1)
        if dims is None:
            dims = (v.shape[0],)
        return cls(dims=tuple(dims), vector=v)

    @classmethod
    def mixed(cls, rho, dims: tuple[int, ...] | None = None) -> "QuantumState":
        r = as_complex_matrix(rho)
        if dims is None:
            dims = (r.shape[0],)
        return cls(dims=tuple(dims), rho=r)

    @classmethod
    def basis(cls, d: int, k: int) -> "QuantumState":
        if not 0 <= k < d:
            raise BadDimension(f"basis index {k} out of range for dimension {d}")
        v = np.zeros(d, dtype=np.complex128)
        v[k] = 1.0
        return cls.pure(v)

    @classmethod
    def maximally_mixed(cls, d: int) -> "QuantumState":
        return cls.mixed(np.eye(d, dtype=np.complex128) / d)

    # -- views ---------------------------------------------------------

    @property
    def is_pure(self) -> bool:
        return self.vector is not None

    @property
    def total_dim(self) -> int:
        return int(np.prod(self.dims))

    def density(self) -> np.ndarray:
        """The density matrix view, built on demand for pure states."""
        if self.vector is not None:
            return np.outer(self.vector, self.vector.conj())
        return np.array(self.rho)

    def require_pure(self) -> np.ndarray:
        if self.vector is None:
            raise NotPure("operation requires a pure state")
        return self.vector

    def tensor(self, other: "QuantumState") -> "QuantumState":
        dims = self.dims + other.dims
        if self.is_pure and other.is_pure:
            return QuantumState(dims=dims, vector=np.kron(self.vector, other.vector))
        return QuantumState(dims=dims, rho=tensor(self.density(), other.density()))

    def overlap_with(self, other: "QuantumState") -> float:
        """tr(rho sigma); equals |<psi|phi>|^2 when both are pure."""
        if self.total_dim != other.total_dim:
            raise DimensionMismatch(
                f"states have dims {self.total_dim} and {other.total_dim}"
            )
        if self.is_pure and other.is_pure:
            return float(abs(np.vdot(self.vector, other.vector)) ** 2)
        return float(np.trace(self.density() @ other.density()).real)
