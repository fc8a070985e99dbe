"""Finite-shot estimation through a quasi-probabilistic wire cut."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import WireCutDecomposition, sample_bits, term_distribution
from .entangle import DomainError
from .qmath import ATOL_EXACT, DimensionError, PureState, is_hermitian

MODES = ("proportional", "multinomial", "montecarlo")


class UnsupportedObservableError(ValueError):
    """Observable is not diagonal in the computational basis."""


@dataclass(frozen=True)
class ShotPlan:
    total: int
    per_term: tuple[int, ...]
    mode: str = "proportional"

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown allocation mode {self.mode!r}; expected one of {MODES}")
        if sum(self.per_term) != self.total:
            raise ValueError(f"per-term shots {self.per_term} do not sum to {self.total}")


@dataclass(frozen=True, eq=False)
class CutEstimate:
    """Quasi-probability estimate of ``(P(0), P(1))``.

    Entries of ``probs`` can fall outside ``[0, 1]`` unless clipping was
    requested.
    """

    probs: np.ndarray
    per_term_freqs: np.ndarray
    shots_used: tuple[int, ...]
    kappa: float
    mode: str = "proportional"


@dataclass(frozen=True, eq=False)
class Observable:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (2, 2) or not is_hermitian(m, ATOL_EXACT):
            raise ValueError("observable must be a Hermitian 2x2 matrix")
        object.__setattr__(self, "matrix", m)

    @property
    def is_diagonal(self) -> bool:
        return abs(self.matrix[0, 1]) <= ATOL_EXACT and abs(self.matrix[1, 0]) <= ATOL_EXACT


def _largest_remainder(total: int, weights: np.ndarray) -> np.ndarray:
    # Round quotas slightly so float noise (e.g. 999.9999999) does not lose a floor.
    quotas = np.round(total * weights, 9)
    base = np.floor(quotas).astype(np.int64)
    frac = quotas - base
    leftover = total - int(base.sum())
    # stable sort on -frac keeps lower indices first among ties
    order = np.argsort(-frac, kind="stable")
    base[order[:leftover]] += 1
    return base


def allocate_shots(
    d: WireCutDecomposition,
    total: int,
    mode: str = "proportional",
    rng: np.random.Generator | None = None,
) -> ShotPlan:
    """Split ``total`` shots across the terms of ``d`` according to ``p_i = |c_i|/kappa``.

    ``proportional`` is deterministic largest-remainder rounding (ties go to
    the lower term index). ``multinomial`` draws the counts jointly and
    ``montecarlo`` draws a term for every shot; both need ``rng``.
    """
    total = int(total)
    if total < 0:
        raise DomainError(f"total shots must be non-negative, got {total}")
    p = d.probabilities
    if mode == "proportional":
        counts = _largest_remainder(total, p)
    elif mode == "multinomial":
        counts = _require(rng).multinomial(total, p)
    elif mode == "montecarlo":
        draws = _require(rng).choice(len(p), size=total, p=p)
        counts = np.bincount(draws, minlength=len(p))
    else:
        raise ValueError(f"unknown allocation mode {mode!r}; expected one of {MODES}")
    return ShotPlan(total, tuple(int(c) for c in counts), mode)


def _require(rng):
    if rng is None:
        raise ValueError("this allocation mode needs a random generator")
    return rng


def estimate_distribution(
    d: WireCutDecomposition,
    psi: PureState,
    total: int,
    mode: str = "proportional",
    rng: np.random.Generator | None = None,
    *,
    clip: bool = False,
) -> CutEstimate:
    """Estimate the computational-basis distribution of ``psi`` sent through the cut.

    Each term is run for its allotted shots. In ``proportional`` and
    ``multinomial`` modes the per-term frequencies are recombined as
    ``sum_i c_i f_i``; a term that received no shots contributes zero. In
    ``montecarlo`` mode every shot is weighted by ``sign(c_i) * kappa`` and
    averaged. With ``clip=True`` the result is clipped to ``[0, 1]`` and
    renormalized, which gives up unbiasedness.
    """
    if total < 1:
        raise DomainError(f"total shots must be >= 1, got {total}")
    if rng is None:
        rng = np.random.default_rng()
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    plan = allocate_shots(d, total, mode, rng)
    counts = np.zeros((len(d), 2))
    for i, (term, n) in enumerate(zip(d.terms, plan.per_term)):
        if n:
            ones = int(sample_bits(term, psi, n, rng).sum())
            counts[i] = (n - ones, ones)
    shots = np.array(plan.per_term, dtype=float)
    freqs = np.divide(counts, shots[:, None], out=np.zeros_like(counts), where=shots[:, None] > 0)
    c = d.coefficients
    if mode == "montecarlo":
        probs = d.kappa * (np.sign(c) @ counts) / total
    else:
        probs = c @ freqs
    if clip:
        probs = np.clip(probs, 0.0, 1.0)
        s = probs.sum()
        probs = probs / s if s > 0 else np.full(2, 0.5)
    return CutEstimate(probs, freqs, plan.per_term, d.kappa, mode)


def expected_distribution(d: WireCutDecomposition, psi: PureState) -> np.ndarray:
    """Infinite-shot limit of :func:`estimate_distribution`: ``sum_i c_i`` times
    the exact per-term distributions."""
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    return sum(t.coefficient * term_distribution(t, psi) for t in d.terms)


def estimate_expectation(
    d: WireCutDecomposition,
    psi: PureState,
    obs,
    total: int,
    mode: str = "proportional",
    rng: np.random.Generator | None = None,
) -> float:
    """Estimate ``<obs>`` on the receiver for a computational-diagonal observable.

    Rotate the input yourself for other observables.
    """
    if not isinstance(obs, Observable):
        obs = Observable(obs)
    if not obs.is_diagonal:
        raise UnsupportedObservableError(
            "only computational-basis-diagonal observables are supported"
        )
    est = estimate_distribution(d, psi, total, mode, rng)
    return float(est.probs @ np.real(np.diag(obs.matrix)))


def shots_for_accuracy(kappa: float, epsilon: float) -> int:
    """Nominal shot count ``ceil(kappa^2 / epsilon^2)``.

    The constant in front of the ``O(kappa^2/eps^2)`` scaling is taken to be 1;
    treat the value as a scale, not a guarantee.
    """
    if epsilon <= 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    if kappa < 1:
        raise DomainError(f"kappa must be >= 1, got {kappa!r}")
    # round first so 9/1e-4 = 90000.00000000001 does not become 90001
    return math.ceil(round(kappa**2 / epsilon**2, 6))


def l2_error(estimate, exact) -> float:
    a = np.asarray(estimate, dtype=float)
    b = np.asarray(exact, dtype=float)
    if a.shape != b.shape or a.shape != (2,):
        raise DimensionError(f"expected two 2-vectors, got {a.shape} and {b.shape}")
    return float(np.linalg.norm(a - b))
