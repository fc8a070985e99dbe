"""Wire-cut terms and quasi-probabilistic decompositions of the identity.

Each :class:`CutTerm` carries a declarative circuit (sender gates, sender
measurements, classically controlled receiver corrections, receiver gates).
From that one description we derive

* the exact one-qubit channel, as Kraus operators obtained by pushing the
  two computational basis inputs through the circuit outcome by outcome, and
* shot-level samples, by running a batch of independent copies of the
  circuit with Born-rule measurement and collapse.

Register layout: qubit 0 carries the input. For measure-and-prepare terms
qubit 1 is the receiver, initialized in ``|0>``. For the teleportation term
qubits 1 and 2 hold the shared resource state and qubit 2 is the receiver.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .entangle import DomainError, check_k, nme_state, robustness_of_k
from .qmath import (
    ATOL_EXACT,
    ATOL_STRUCT,
    CNOT,
    H,
    I2,
    S,
    SDG,
    X,
    Z,
    DensityOperator,
    PureState,
    ValidationError,
    allclose,
    is_psd,
)

LABELS = ("tele", "comp1", "comp2", "mp-general")
_NAMED_GATES = {"X": X, "Z": Z, "H": H, "S": S, "Sdg": SDG, "I": I2, "CNOT": CNOT}


@dataclass(frozen=True, eq=False)
class Gate:
    name: str
    qubits: tuple[int, ...]
    matrix: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        m = _NAMED_GATES[self.name] if self.matrix is None else self.matrix
        m = np.asarray(m, dtype=complex)
        if m.shape != (2 ** len(self.qubits),) * 2:
            raise ValidationError(f"gate {self.name} does not match qubits {self.qubits}")
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True, eq=False)
class CutCircuit:
    """Declarative description of one sub-experiment of a wire cut.

    ``corrections`` holds ``(gate name, classical bit)`` pairs applied to the
    receiver in order, where bit ``i`` is the outcome of ``measured[i]``.
    """

    n_qubits: int
    sender: tuple[Gate, ...]
    measured: tuple[int, ...]
    corrections: tuple[tuple[str, int], ...]
    receiver_gates: tuple[str, ...]
    receiver: int
    resource: PureState | None = None

    def __post_init__(self):
        rest = set(range(self.n_qubits)) - set(self.measured)
        if rest != {self.receiver}:
            raise ValidationError("every qubit except the receiver must be measured")
        if self.resource is not None and self.n_qubits != 3:
            raise ValidationError("a resource state needs a three-qubit register")


# --- batched state-vector simulation --------------------------------------


def _initial(circuit: CutCircuit, inputs: np.ndarray) -> np.ndarray:
    """Batch of registers ``input ⊗ (resource | |0>)``, shape ``(batch, 2, ..., 2)``."""
    if circuit.resource is not None:
        rest = circuit.resource.amplitudes
    else:
        rest = np.zeros(2 ** (circuit.n_qubits - 1), dtype=complex)
        rest[0] = 1
    full = np.einsum("bi,j->bij", inputs, rest)
    return full.reshape((inputs.shape[0],) + (2,) * circuit.n_qubits)


def _apply_gate(states: np.ndarray, gate: Gate) -> np.ndarray:
    k = len(gate.qubits)
    axes = [q + 1 for q in gate.qubits]
    g = gate.matrix.reshape((2,) * (2 * k))
    out = np.tensordot(states, g, axes=(axes, list(range(k, 2 * k))))
    # tensordot appends the gate's output axes at the end; move them back.
    return np.moveaxis(out, list(range(out.ndim - k, out.ndim)), axes)


def _sender_stage(circuit: CutCircuit, inputs: np.ndarray) -> np.ndarray:
    """Run sender gates; return amplitudes shaped ``(batch, outcomes, 2)``
    with measured qubits flattened (big-endian over ``measured``) and the
    receiver qubit last."""
    states = _initial(circuit, inputs)
    for gate in circuit.sender:
        states = _apply_gate(states, gate)
    order = [q + 1 for q in circuit.measured] + [circuit.receiver + 1]
    states = np.moveaxis(states, order, list(range(1, circuit.n_qubits + 1)))
    return states.reshape(inputs.shape[0], 2 ** len(circuit.measured), 2)


def _outcome_bits(circuit: CutCircuit) -> np.ndarray:
    return np.array(list(itertools.product((0, 1), repeat=len(circuit.measured))))


@lru_cache(maxsize=256)
def _receiver_ops(circuit: CutCircuit) -> tuple[np.ndarray, ...]:
    """Receiver-side operator (corrections then gates) for each outcome."""
    tail = I2
    for name in circuit.receiver_gates:
        tail = _NAMED_GATES[name] @ tail
    ops = []
    for bits in _outcome_bits(circuit):
        op = I2
        for name, bit in circuit.corrections:
            if bits[bit]:
                op = _NAMED_GATES[name] @ op
        ops.append(tail @ op)
    return tuple(ops)


def circuit_kraus(circuit: CutCircuit) -> tuple[np.ndarray, ...]:
    """Kraus operators (input qubit -> receiver qubit), one per sender outcome."""
    amps = _sender_stage(circuit, np.eye(2, dtype=complex))
    # amps[col, m, :] is the unnormalized receiver vector for input |col>
    return tuple(op @ amps[:, m, :].T for m, op in enumerate(_receiver_ops(circuit)))


def simulate_shots(
    circuit: CutCircuit, psi: PureState, shots: int, rng: np.random.Generator
) -> np.ndarray:
    """Run ``shots`` independent copies of the circuit on ``psi``.

    Each copy samples its sender outcome from the Born rule, collapses onto
    it, gets the corrections selected by its own classical bits, and finally
    has its receiver measured in the computational basis. All copies share
    the same pre-measurement state, so that stage is computed once.
    Returns the receiver bits as an ``int8`` array.
    """
    if psi.dim != 2:
        raise DomainError("cut input must be a one-qubit state")
    if shots == 0:
        return np.zeros(0, dtype=np.int8)
    amps = _sender_stage(circuit, psi.amplitudes[None, :])[0]
    probs = np.sum(np.abs(amps) ** 2, axis=1)
    cdf = np.cumsum(probs)
    outcome = np.searchsorted(cdf, rng.random(shots) * cdf[-1], side="right")
    outcome = np.minimum(outcome, len(probs) - 1)
    # receiver P(0) after collapse onto each outcome and its corrections
    p0 = np.zeros(len(probs))
    for m, op in enumerate(_receiver_ops(circuit)):
        if probs[m] > 0:
            vec = op @ (amps[m] / np.sqrt(probs[m]))
            p0[m] = abs(vec[0]) ** 2
    return (rng.random(shots) >= p0[outcome]).astype(np.int8)


# --- channels --------------------------------------------------------------


def _apply_kraus(kraus: Sequence[np.ndarray], m: np.ndarray) -> np.ndarray:
    return sum(k @ m @ k.conj().T for k in kraus)


def choi_of_map(channel: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
    """Unnormalized Choi matrix ``sum_ij |i><j| ⊗ channel(|i><j|)``."""
    out = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2), dtype=complex)
            e[i, j] = 1
            out += np.kron(e, channel(e))
    return out


IDENTITY_CHOI = choi_of_map(lambda m: m)


def choi_is_trace_preserving(choi_matrix, atol: float = ATOL_STRUCT) -> bool:
    reduced = np.einsum("ijkj->ik", np.asarray(choi_matrix).reshape(2, 2, 2, 2))
    return allclose(reduced, I2, atol)


def choi_is_completely_positive(choi_matrix, atol: float = ATOL_STRUCT) -> bool:
    return is_psd(choi_matrix, atol)


@dataclass(frozen=True, eq=False)
class MeasurePrepareChannel:
    """Channel ``rho -> sum_i a_i Tr[E_i rho] rho_i``."""

    terms: tuple[tuple[int, np.ndarray, DensityOperator], ...]

    def __post_init__(self):
        total = np.zeros((2, 2), dtype=complex)
        for a, e, prep in self.terms:
            if a not in (1, -1):
                raise ValidationError(f"sign must be +1 or -1, got {a!r}")
            if not is_psd(e):
                raise ValidationError("POVM element is not PSD")
            if prep.dim != 2:
                raise ValidationError("prepared states must be one-qubit")
            total = total + e
        if not allclose(total, I2, ATOL_STRUCT):
            raise ValidationError("POVM elements do not sum to the identity")

    @classmethod
    def from_bases(cls, measure_basis, prepare_basis) -> MeasurePrepareChannel:
        """Measure in the columns of ``measure_basis``; on outcome ``j``
        prepare column ``j`` of ``prepare_basis``."""
        mb = np.asarray(measure_basis, dtype=complex)
        pb = np.asarray(prepare_basis, dtype=complex)
        return cls(
            tuple(
                (1, np.outer(mb[:, j], mb[:, j].conj()), PureState(pb[:, j]).density())
                for j in range(2)
            )
        )

    def __call__(self, m) -> np.ndarray:
        m = m.matrix if isinstance(m, DensityOperator) else np.asarray(m)
        return sum(a * np.trace(e @ m) * prep.matrix for a, e, prep in self.terms)


@dataclass(frozen=True, eq=False)
class CutTerm:
    """One weighted sub-experiment of a wire cut.

    The Kraus representation of its exact channel is computed from
    ``circuit`` at construction and checked to be CPTP.
    """

    label: str
    coefficient: float
    circuit: CutCircuit
    name: str = ""
    kraus: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValidationError(f"unknown term label {self.label!r}")
        object.__setattr__(self, "coefficient", float(self.coefficient))
        object.__setattr__(self, "kraus", circuit_kraus(self.circuit))
        c = self.choi()
        if not choi_is_trace_preserving(c):
            raise ValidationError(f"term {self.label} is not trace preserving")
        if not choi_is_completely_positive(c):
            raise ValidationError(f"term {self.label} is not completely positive")

    def channel(self, m) -> np.ndarray:
        """Apply the exact channel to any 2x2 matrix (linear extension)."""
        return _apply_kraus(self.kraus, np.asarray(m, dtype=complex))

    def choi(self) -> np.ndarray:
        return choi_of_map(self.channel)

    def measure_prepare_form(self) -> MeasurePrepareChannel:
        """Eq.-style measure-and-prepare form read off the circuit.

        Only defined for two-qubit terms (no resource state).
        """
        c = self.circuit
        if c.resource is not None:
            raise ValidationError("teleportation terms are not measure-and-prepare")
        v = I2
        for gate in c.sender:
            v = gate.matrix @ v
        p = I2
        for name in c.receiver_gates:
            p = _NAMED_GATES[name] @ p
        # measuring V rho V^dag in |j> <=> POVM V^dag|j><j|V; prepare P X^j |0>
        return MeasurePrepareChannel.from_bases(v.conj().T, p)


@dataclass(frozen=True, eq=False)
class WireCutDecomposition:
    """Quasi-probabilistic decomposition ``Id = sum_i c_i E_i``."""

    terms: tuple[CutTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        if abs(sum(self.coefficients) - 1.0) > ATOL_EXACT:
            raise ValidationError(f"coefficients sum to {sum(self.coefficients)!r}, not 1")
        if not allclose(self.choi(), IDENTITY_CHOI, ATOL_STRUCT):
            raise ValidationError("decomposition does not reproduce the identity channel")

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([t.coefficient for t in self.terms])

    @property
    def kappa(self) -> float:
        return float(np.sum(np.abs(self.coefficients)))

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(self.coefficients) / self.kappa

    def channel(self, m) -> np.ndarray:
        return sum(t.coefficient * t.channel(m) for t in self.terms)

    def choi(self) -> np.ndarray:
        return choi_of_map(self.channel)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)


def measure_prepare_circuit(sender: Sequence[str], receiver: Sequence[str]) -> CutCircuit:
    return CutCircuit(
        n_qubits=2,
        sender=tuple(Gate(name, (0,)) for name in sender),
        measured=(0,),
        corrections=(("X", 0),),
        receiver_gates=tuple(receiver),
        receiver=1,
    )


def teleport_circuit(k: float) -> CutCircuit:
    """Standard teleportation wiring on the resource ``K(|00> + k|11>)``.

    X on the receiver is controlled by the resource-half bit, Z by the input bit.
    """
    return CutCircuit(
        n_qubits=3,
        sender=(Gate("CNOT", (0, 1)), Gate("H", (0,))),
        measured=(0, 1),
        corrections=(("X", 1), ("Z", 0)),
        receiver_gates=(),
        receiver=2,
        resource=nme_state(k),
    )


def harada_cut() -> WireCutDecomposition:
    """Optimal three-term wire cut with ``kappa = 3``.

    Terms: measure/prepare in the ``H`` basis (+1), in the ``SH`` basis (+1),
    and measure computational / prepare the flipped state (-1).
    """
    return WireCutDecomposition(
        (
            CutTerm("mp-general", 1.0, measure_prepare_circuit(["H"], ["H"]), name="H-basis"),
            CutTerm(
                "mp-general", 1.0, measure_prepare_circuit(["Sdg", "H"], ["H", "S"]), name="SH-basis"
            ),
            CutTerm("mp-general", -1.0, measure_prepare_circuit([], ["X"]), name="flip"),
        )
    )


def tele_term(k: float, coefficient: float = 1.0) -> CutTerm:
    return CutTerm("tele", coefficient, teleport_circuit(check_k(k)), name=f"tele(k={k:g})")


def comp1_term(coefficient: float) -> CutTerm:
    return CutTerm("comp1", coefficient, measure_prepare_circuit(["H"], ["H"]), name="comp1")


def comp2_term(coefficient: float) -> CutTerm:
    return CutTerm("comp2", coefficient, measure_prepare_circuit(["S", "H"], ["H", "S"]), name="comp2")


def compensation_factor(k: float) -> float:
    return 1.0 - robustness_of_k(check_k(k))


def nme_cut(k: float) -> WireCutDecomposition:
    """Wire cut using the resource ``K(|00> + k|11>)``: teleportation plus two
    compensation terms weighted ``+c`` and ``-c`` with ``c = 1 - R``."""
    c = compensation_factor(k)
    return WireCutDecomposition((tele_term(k), comp1_term(c), comp2_term(-c)))


def kappa_nme(k: float) -> float:
    """Sampling overhead ``3 - 4k/(1+k^2)`` of :func:`nme_cut`."""
    return 3.0 - 2.0 * robustness_of_k(k)


def teleport_exact(k: float, rho: DensityOperator) -> DensityOperator:
    """Closed-form teleportation output on the NME resource: populations
    kept, coherences scaled by the resource robustness."""
    r = robustness_of_k(check_k(k))
    m = rho.matrix.copy()
    m[0, 1] *= r
    m[1, 0] *= r
    return DensityOperator(m)


def _as_density(rho) -> DensityOperator:
    if isinstance(rho, DensityOperator):
        return rho
    if isinstance(rho, PureState):
        return rho.density()
    return DensityOperator(rho)


def _hermitize(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def apply_term_exact(term: CutTerm, rho) -> DensityOperator:
    return DensityOperator(_hermitize(term.channel(_as_density(rho).matrix)))


def apply_decomposition_exact(d: WireCutDecomposition, rho) -> DensityOperator:
    return DensityOperator(_hermitize(d.channel(_as_density(rho).matrix)))


def choi(obj) -> np.ndarray:
    """Choi matrix of a term, a decomposition, or a callable on 2x2 matrices."""
    if isinstance(obj, (CutTerm, WireCutDecomposition)):
        return obj.choi()
    if callable(obj):
        return choi_of_map(obj)
    raise TypeError(f"cannot build a Choi matrix from {type(obj).__name__}")


def identity_deviation(d: WireCutDecomposition) -> float:
    """Largest entrywise deviation of ``choi(d)`` from the identity channel's."""
    return float(np.max(np.abs(d.choi() - IDENTITY_CHOI)))


def term_distribution(term: CutTerm, psi: PureState) -> np.ndarray:
    """Exact computational-basis distribution of the receiver for input ``psi``."""
    out = term.channel(np.outer(psi.amplitudes, psi.amplitudes.conj()))
    return np.clip(np.real(np.diag(out)), 0.0, 1.0)


def sample_bits(term: CutTerm, psi: PureState, shots: int, rng: np.random.Generator) -> np.ndarray:
    """Receiver measurement bits from ``shots`` runs of ``term`` on ``psi``."""
    if not isinstance(psi, PureState):
        psi = PureState(psi)
    return simulate_shots(term.circuit, psi, int(shots), rng)


def sample_term(term: CutTerm, psi: PureState, rng: np.random.Generator) -> int:
    """One shot of ``term`` on ``psi``; returns the receiver bit."""
    return int(sample_bits(term, psi, 1, rng)[0])
