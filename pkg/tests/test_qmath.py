import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from nmecut.entangle import haar_random_unitary, nme_state
from nmecut.qmath import (
    CNOT,
    H,
    I2,
    X,
    DensityOperator,
    DimensionError,
    PureState,
    ValidationError,
    allclose,
    apply_unitary,
    basis_state,
    computational_probs,
    kron,
    partial_trace,
    svd_2x2,
)

PLUS = PureState.normalized([1, 1])


def test_kron_identity():
    assert allclose(kron(I2, I2), np.eye(4))


def test_kron_bit_flip_on_first_qubit():
    out = kron(X, I2) @ basis_state(0, 4).amplitudes
    assert allclose(out, basis_state(2, 4).amplitudes)


def test_kron_hadamard_pair():
    # oracle: the 4x4 matrix written out entry by entry
    hh = 0.5 * np.array(
        [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]], dtype=complex
    )
    expected = hh @ np.array([1, 0, 0, 0])
    assert allclose(expected, np.full(4, 0.5))
    assert allclose(kron(H, H) @ np.array([1, 0, 0, 0]), expected)


def test_cnot_is_big_endian():
    # control = qubit 0 (most significant): |10> -> |11>
    assert allclose(CNOT @ basis_state(2, 4).amplitudes, basis_state(3, 4).amplitudes)


complex_2x2 = arrays(
    np.complex128,
    (2, 2),
    elements=st.complex_numbers(max_magnitude=1, allow_nan=False, allow_infinity=False),
)


@given(complex_2x2, complex_2x2, complex_2x2, complex_2x2)
def test_kron_mixed_product(a, b, c, d):
    assert allclose(kron(a, b) @ kron(c, d), kron(a @ c, b @ d), 1e-12)


@given(complex_2x2, complex_2x2, complex_2x2)
def test_kron_associative(a, b, c):
    assert allclose(kron(kron(a, b), c), kron(a, kron(b, c)), 1e-12)


def test_apply_unitary_examples():
    zero = basis_state(0).density()
    assert zero.isclose(apply_unitary(I2, zero), 1e-12)
    assert apply_unitary(X, zero).isclose(basis_state(1).density(), 1e-12)
    # oracle: H|0><0|H written out
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    expected = h @ np.diag([1, 0]) @ h.T
    assert allclose(expected, np.full((2, 2), 0.5))
    assert apply_unitary(H, zero).isclose(expected, 1e-12)


def test_apply_unitary_errors():
    zero = basis_state(0).density()
    with pytest.raises(ValidationError):
        apply_unitary(np.diag([1, 2]), zero)
    with pytest.raises(DimensionError):
        apply_unitary(np.eye(4), zero)


@pytest.mark.parametrize("dim", [2, 4])
def test_apply_unitary_preserves_spectrum(dim):
    gen = np.random.default_rng(3)
    for _ in range(50):
        g = gen.standard_normal((dim, dim)) + 1j * gen.standard_normal((dim, dim))
        m = g @ g.conj().T
        rho = DensityOperator(m / np.trace(m))
        out = apply_unitary(haar_random_unitary(dim, gen), rho)
        assert abs(np.trace(out.matrix) - 1) <= 1e-10
        assert allclose(np.linalg.eigvalsh(out.matrix), np.linalg.eigvalsh(rho.matrix), 1e-10)


def test_computational_probs():
    assert allclose(computational_probs(basis_state(0).density()), [1, 0])
    assert allclose(computational_probs(PLUS.density()), [0.5, 0.5])
    u = haar_random_unitary(2, np.random.default_rng(11))
    rho = apply_unitary(u, basis_state(0).density())
    assert allclose(computational_probs(rho), [abs(u[0, 0]) ** 2, abs(u[1, 0]) ** 2], 1e-12)


def test_computational_probs_sum_to_one():
    gen = np.random.default_rng(5)
    for _ in range(100):
        g = gen.standard_normal((4, 4)) + 1j * gen.standard_normal((4, 4))
        m = g @ g.conj().T
        p = computational_probs(DensityOperator(m / np.trace(m)))
        assert abs(p.sum() - 1) <= 1e-10
        assert np.all(p >= 0)


def test_partial_trace():
    assert partial_trace(basis_state(0, 4).density(), keep=0).isclose(np.diag([1, 0]), 1e-12)
    assert partial_trace(nme_state(1).density(), keep=1).isclose(I2 / 2, 1e-12)
    # K^2 diag(1, k^2) with K^2 = 1/1.25
    assert partial_trace(nme_state(0.5).density(), keep=1).isclose(np.diag([0.8, 0.2]), 1e-12)


def test_partial_trace_keeps_correct_factor():
    rho = DensityOperator(np.kron(np.diag([1.0, 0.0]), np.full((2, 2), 0.5)))
    assert partial_trace(rho, keep=0).isclose(np.diag([1, 0]), 1e-12)
    assert partial_trace(rho, keep=1).isclose(np.full((2, 2), 0.5), 1e-12)
    with pytest.raises(DimensionError):
        partial_trace(PLUS.density(), keep=0)


@pytest.mark.parametrize(
    "m, s",
    [
        (np.diag([1.0, 0.0]), (1.0, 0.0)),
        (np.eye(2) / np.sqrt(2), (1 / np.sqrt(2), 1 / np.sqrt(2))),
        (np.diag([0.6, 0.8]), (0.8, 0.6)),
    ],
)
def test_svd_2x2_examples(m, s):
    u, sv, v = svd_2x2(m)
    assert allclose(sv, s, 1e-12)
    assert allclose(u @ np.diag(sv) @ v.conj().T, m, 1e-10)


def test_svd_2x2_random_reconstruction():
    gen = np.random.default_rng(8)
    for _ in range(1000):
        m = gen.uniform(-1, 1, (2, 2)) + 1j * gen.uniform(-1, 1, (2, 2))
        u, s, v = svd_2x2(m)
        assert s[0] >= s[1] >= 0
        assert allclose(u.conj().T @ u, I2, 1e-10) and allclose(v.conj().T @ v, I2, 1e-10)
        assert allclose(u @ np.diag(s) @ v.conj().T, m, 1e-10)


def test_density_operator_validation():
    with pytest.raises(ValidationError):
        DensityOperator(np.diag([1.0, 1.0]))
    with pytest.raises(ValidationError):
        DensityOperator(np.diag([1.5, -0.5]))
    with pytest.raises(ValidationError):
        DensityOperator(np.array([[0.5, 0.5], [0.0, 0.5]]))
    with pytest.raises(DimensionError):
        DensityOperator(np.eye(3) / 3)
    with pytest.raises(ValidationError):
        PureState([1, 1])


@settings(max_examples=50)
@given(st.floats(0, 2 * np.pi), st.floats(0, np.pi))
def test_pure_state_density_is_valid(phi, theta):
    psi = PureState([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])
    rho = psi.density()
    assert abs(np.trace(rho.matrix) - 1) < 1e-12
