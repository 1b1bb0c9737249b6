import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinladder.spin import (
    SpinQuantumNumber,
    basis_state,
    check_hermitian,
    expectation,
    hermitian_eigendecomposition,
    ladder_elements,
    make_operators,
)

twice_s = st.integers(min_value=1, max_value=40)


def test_spin_half_is_pauli_over_two():
    ops = make_operators(0.5)
    np.testing.assert_allclose(ops.sx, [[0, 0.5], [0.5, 0]])
    np.testing.assert_allclose(ops.sy, [[0, -0.5j], [0.5j, 0]])
    np.testing.assert_allclose(ops.sz, [[0.5, 0], [0, -0.5]])


def test_spin_one_matrices():
    r = 1 / np.sqrt(2)
    ops = make_operators(1)
    np.testing.assert_allclose(ops.sx, r * np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]]), atol=1e-15)
    np.testing.assert_allclose(ops.s_plus, np.sqrt(2) * np.diag([1, 1], k=1), atol=1e-15)


def test_ladder_elements_s10():
    # <m|S+|m-1> = sqrt(S(S+1) - m(m-1)); top element sqrt(110 - 90)
    k = ladder_elements(SpinQuantumNumber(20))
    assert k.size == 20
    assert k[0] == pytest.approx(np.sqrt(20))
    assert k[9] == pytest.approx(np.sqrt(110))  # m = 1 -> 0
    np.testing.assert_allclose(k, k[::-1])


def test_quantum_number_basics():
    s = SpinQuantumNumber.from_value(9.5)
    assert s.twice_s == 19 and s.dim == 20 and s.is_half_integer
    assert s.m_values()[0] == 9.5 and s.m_values()[-1] == -9.5
    assert s.index_of(-9.5) == 19
    with pytest.raises(ValueError):
        s.index_of(3)
    with pytest.raises(ValueError):
        SpinQuantumNumber.from_value(0.3)
    with pytest.raises(ValueError):
        SpinQuantumNumber(0)


@given(twice_s)
def test_commutators_and_casimir(n):
    ops = make_operators(SpinQuantumNumber(n))
    s = n / 2
    comm = ops.sx @ ops.sy - ops.sy @ ops.sx
    np.testing.assert_allclose(comm, 1j * ops.sz, atol=1e-11 * n)
    np.testing.assert_allclose(ops.casimir, s * (s + 1) * np.eye(n + 1), atol=1e-10 * n * n)
    np.testing.assert_allclose(ops.s_minus, ops.s_plus.conj().T)
    for op in (ops.sx, ops.sy, ops.sz):
        check_hermitian(op)


@given(twice_s, st.data())
def test_basis_state_expectations(n, data):
    spin = SpinQuantumNumber(n)
    m = data.draw(st.sampled_from(list(spin.m_values())))
    ops = make_operators(spin)
    psi = basis_state(spin, m)
    assert expectation(ops.sz, psi) == pytest.approx(m)
    assert expectation(ops.sx, psi) == pytest.approx(0, abs=1e-14)


def test_expectation_rejects_non_hermitian():
    psi = np.array([1, 1j]) / np.sqrt(2)
    with pytest.raises(ValueError):
        expectation(np.array([[0, 1], [0, 0]], dtype=complex), psi)
    with pytest.raises(ValueError):
        check_hermitian(np.array([[0, 1], [0, 0]], dtype=complex))


def test_eigendecomposition_reconstructs(rng):
    a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
    h = a + a.conj().T
    lam, v = hermitian_eigendecomposition(h)
    np.testing.assert_allclose(v @ np.diag(lam) @ v.conj().T, h, atol=1e-12)
    assert np.all(np.diff(lam) >= 0)
