"""Dense linear algebra and density-operator primitives for one and two qubits.

Matrices are plain ``numpy`` complex arrays. Qubit ordering is big-endian:
the first tensor factor is qubit 0 and is the most significant bit of a
basis index, so ``|q0 q1>`` has index ``2*q0 + q1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ATOL_STRUCT = 1e-10
ATOL_EXACT = 1e-12


class DimensionError(ValueError):
    """Operands have incompatible or unsupported dimensions."""


class ValidationError(ValueError):
    """An object violates a structural invariant (unitarity, PSD, trace...)."""


I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
SDG = S.conj().T
CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    return m


def allclose(a, b, atol: float = ATOL_EXACT) -> bool:
    """Entrywise equality with an explicit absolute tolerance."""
    a, b = np.asarray(a), np.asarray(b)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol))


def dagger(a) -> np.ndarray:
    return np.asarray(a).conj().T


def is_unitary(u, atol: float = ATOL_STRUCT) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return allclose(u.conj().T @ u, np.eye(u.shape[0]), atol)


def is_hermitian(a, atol: float = ATOL_EXACT) -> bool:
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and allclose(a, a.conj().T, atol)


def is_psd(a, atol: float = ATOL_STRUCT) -> bool:
    """Hermitian with smallest eigenvalue >= -atol."""
    if not is_hermitian(a, atol):
        return False
    herm = (np.asarray(a) + dagger(a)) / 2
    return bool(np.linalg.eigvalsh(herm).min() >= -atol)


def kron(a, b) -> np.ndarray:
    """Kronecker product; ``a`` acts on the more significant qubits."""
    return np.kron(as_matrix(a), as_matrix(b))


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized state vector on one or two qubits."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size not in (2, 4):
            raise DimensionError(f"pure state must have dim 2 or 4, got {amps.size}")
        if abs(np.linalg.norm(amps) - 1.0) > ATOL_EXACT:
            raise ValidationError(f"state norm {np.linalg.norm(amps)!r} != 1")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, amplitudes) -> PureState:
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        return cls(amps / np.linalg.norm(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def density(self) -> DensityOperator:
        return DensityOperator(np.outer(self.amplitudes, self.amplitudes.conj()))


@dataclass(frozen=True, eq=False)
class DensityOperator:
    """Hermitian, positive semi-definite, unit-trace matrix on 1 or 2 qubits."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix).copy()
        if m.shape not in ((2, 2), (4, 4)):
            raise DimensionError(f"density operator must be 2x2 or 4x4, got {m.shape}")
        if not is_hermitian(m, ATOL_EXACT):
            raise ValidationError("density operator is not Hermitian")
        if abs(np.trace(m) - 1.0) > ATOL_EXACT:
            raise ValidationError(f"density operator trace {np.trace(m).real!r} != 1")
        if np.linalg.eigvalsh((m + m.conj().T) / 2).min() < -ATOL_STRUCT:
            raise ValidationError("density operator is not positive semi-definite")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def from_state(cls, psi) -> DensityOperator:
        if not isinstance(psi, PureState):
            psi = PureState(psi)
        return psi.density()

    def isclose(self, other, atol: float = ATOL_STRUCT) -> bool:
        other = other.matrix if isinstance(other, DensityOperator) else other
        return allclose(self.matrix, other, atol)


def basis_state(index: int, dim: int = 2) -> PureState:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1
    return PureState(v)


def apply_unitary(u, rho: DensityOperator) -> DensityOperator:
    """Return ``u rho u^dagger``.

    Raises
    ------
    DimensionError
        If ``u`` does not match the dimension of ``rho``.
    ValidationError
        If ``u`` is not unitary to within 1e-10.
    """
    u = as_matrix(u)
    if u.shape != (rho.dim, rho.dim):
        raise DimensionError(f"unitary of shape {u.shape} on dim-{rho.dim} state")
    if not is_unitary(u):
        raise ValidationError("operator is not unitary")
    out = u @ rho.matrix @ u.conj().T
    # Re-symmetrize so round-off never trips the Hermitian check.
    return DensityOperator((out + out.conj().T) / 2)


def computational_probs(rho: DensityOperator) -> np.ndarray:
    """Measurement probabilities in the computational basis."""
    p = np.real(np.diag(rho.matrix)).copy()
    p[(p < 0) & (p >= -ATOL_STRUCT)] = 0.0
    p[(p > 1) & (p <= 1 + ATOL_STRUCT)] = 1.0
    return p


def partial_trace(rho: DensityOperator, keep: int) -> DensityOperator:
    """Reduce a two-qubit density operator to qubit ``keep`` (0 or 1)."""
    if rho.dim != 4:
        raise DimensionError(f"partial_trace needs a two-qubit operator, got dim {rho.dim}")
    if keep not in (0, 1):
        raise DimensionError(f"keep must be 0 or 1, got {keep}")
    t = rho.matrix.reshape(2, 2, 2, 2)
    out = np.einsum("ijkj->ik", t) if keep == 0 else np.einsum("jijk->ik", t)
    return DensityOperator(out)


def svd_2x2(m) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Singular value decomposition ``m = u @ diag(s) @ v^dagger``.

    Returns ``(u, s, v)`` with ``s`` real, non-negative and descending.
    """
    m = as_matrix(m)
    if m.shape != (2, 2):
        raise DimensionError(f"svd_2x2 needs a 2x2 matrix, got {m.shape}")
    u, s, vh = np.linalg.svd(m)
    return u, s, vh.conj().T
