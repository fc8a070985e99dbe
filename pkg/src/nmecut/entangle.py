"""Non-maximally entangled resource states, Schmidt form and robustness."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qmath import PureState, kron, svd_2x2


class DomainError(ValueError):
    """Argument outside the mathematical domain of the function."""


def check_k(k: float) -> float:
    k = float(k)
    if not math.isfinite(k) or k < 0:
        raise DomainError(f"k must be finite and non-negative, got {k!r}")
    return k


@dataclass(frozen=True)
class NmeResource:
    """The resource state ``K(|00> + k|11>)`` with ``K = 1/sqrt(1 + k^2)``."""

    k: float

    def __post_init__(self):
        object.__setattr__(self, "k", check_k(self.k))

    @property
    def normalization(self) -> float:
        return 1.0 / math.sqrt(1.0 + self.k**2)

    @property
    def robustness(self) -> float:
        return robustness_of_k(self.k)

    def state(self) -> PureState:
        return nme_state(self.k)


@dataclass(frozen=True, eq=False)
class SchmidtDecomposition:
    """``psi = (a ⊗ b)(p0|00> + p1|11>)`` with ``p0 >= p1 >= 0``."""

    p0: float
    p1: float
    a: np.ndarray
    b: np.ndarray

    def reconstruct(self) -> np.ndarray:
        core = np.array([self.p0, 0, 0, self.p1], dtype=complex)
        return kron(self.a, self.b) @ core

    @property
    def robustness(self) -> float:
        return robustness_pure(self.p0, self.p1)


def nme_state(k: float) -> PureState:
    """Two-qubit state ``K(|00> + k|11>)``.

    >>> nme_state(1.0).amplitudes.round(6)
    array([0.707107+0.j, 0.      +0.j, 0.      +0.j, 0.707107+0.j])
    """
    k = check_k(k)
    norm = 1.0 / math.sqrt(1.0 + k * k)
    return PureState(np.array([norm, 0, 0, k * norm], dtype=complex))


def robustness_pure(p0: float, p1: float) -> float:
    """Robustness of entanglement ``(p0 + p1)^2 - 1`` of a pure two-qubit state."""
    if p0 < 0 or p1 < 0:
        raise DomainError("Schmidt coefficients must be non-negative")
    if abs(p0 * p0 + p1 * p1 - 1.0) > 1e-8:
        raise DomainError(f"Schmidt coefficients not normalized: {p0!r}, {p1!r}")
    return min(max((p0 + p1) ** 2 - 1.0, 0.0), 1.0)


def robustness_of_k(k: float) -> float:
    """Robustness ``2k/(1+k^2)`` of the resource state with parameter ``k``."""
    k = check_k(k)
    return 2.0 * k / (1.0 + k * k)


def k_from_robustness(r: float) -> float:
    """Inverse of :func:`robustness_of_k` on the branch ``k in [0, 1]``."""
    r = float(r)
    if not (0.0 <= r <= 1.0):
        raise DomainError(f"robustness must lie in [0, 1], got {r!r}")
    if r == 0.0:
        return 0.0
    # r / (1 + sqrt(1 - r^2)) is the cancellation-free form of (1 - sqrt(1 - r^2)) / r
    return r / (1.0 + math.sqrt((1.0 - r) * (1.0 + r)))


def schmidt_decompose(psi) -> SchmidtDecomposition:
    """Schmidt decomposition of a two-qubit pure state via the SVD of its
    2x2 amplitude matrix ``M[i, j] = <ij|psi>``."""
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    if psi.dim != 4:
        raise DomainError("schmidt_decompose needs a two-qubit state")
    u, s, v = svd_2x2(psi.amplitudes.reshape(2, 2))
    # M = u diag(s) v^dagger  =>  psi = (u ⊗ conj(v)) (s0|00> + s1|11>)
    return SchmidtDecomposition(float(s[0]), float(s[1]), u, v.conj())


def haar_random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed ``dim x dim`` unitary.

    QR of a complex Ginibre matrix, with each column of ``Q`` multiplied by the
    phase of the matching diagonal entry of ``R`` so the result is uniform
    rather than biased by the QR sign convention.
    """
    if dim < 1:
        raise DomainError(f"dim must be >= 1, got {dim}")
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    phases = d / np.abs(d)
    return q * phases


def haar_random_state(dim: int, rng: np.random.Generator) -> PureState:
    """First column of a Haar unitary, i.e. ``U|0>``."""
    return PureState.normalized(haar_random_unitary(dim, rng)[:, 0])


def fidelity(a, b) -> float:
    """``|<a|b>|`` for two state vectors."""
    a = a.amplitudes if isinstance(a, PureState) else np.asarray(a)
    b = b.amplitudes if isinstance(b, PureState) else np.asarray(b)
    return float(abs(np.vdot(a, b)))

