import numpy as np
import pytest
from hypothesis import given, strategies as st

from spinladder.hamiltonian import (
    DriveSpec,
    StaticModel,
    barrier_profile,
    drive_coefficients,
    eval_f,
    hamiltonian,
    lab_hamiltonian,
    ladder_frequencies,
    level_energies,
    level_energy,
    rotating_hamiltonian,
    transition_frequency,
    validate_drive,
)
from spinladder.spin import check_hermitian, make_operators


def cos_sum(twice_s, d, t):
    """Oracle: sum_{m=S}^{-S+1} cos(D(2m-1)t) by direct summation."""
    t = np.asarray(t, dtype=float)
    ms = [(twice_s - 2 * j) / 2 for j in range(twice_s)]
    return sum(np.cos(d * (2 * m - 1) * t) for m in ms)


# --- static model -----------------------------------------------------------

def test_barrier_s10():
    model = StaticModel(10, 0.1)
    prof = barrier_profile(model)
    assert prof.e_min == pytest.approx(-10.0)  # -D S^2
    assert dict(prof.pairs())[0.0] == pytest.approx(10.0)  # top of the barrier, D S^2 above the wells
    assert dict(prof.pairs())[10.0] == 0.0
    np.testing.assert_allclose(prof.energy, prof.energy[::-1])


def test_level_energy_with_field():
    model = StaticModel(10, 0.1, hz=0.1)
    assert level_energy(model, 10) == pytest.approx(-11.0)
    assert level_energy(model, -10) == pytest.approx(-9.0)
    with pytest.raises(ValueError):
        level_energy(model, 10.5)


def test_transition_frequencies():
    model = StaticModel(10, 0.1)
    assert transition_frequency(model, 10) == pytest.approx(1.9)
    assert transition_frequency(model, 1) == pytest.approx(0.1)
    assert transition_frequency(model, -9) == pytest.approx(-1.9)
    w = ladder_frequencies(model)
    assert w.size == 20
    np.testing.assert_allclose(np.diff(w), -0.2)
    with pytest.raises(ValueError):
        transition_frequency(model, -10)


@given(st.integers(1, 30), st.floats(0.0, 1.0), st.floats(-2.0, 2.0))
def test_transition_is_energy_difference(twice_s, d, hz):
    model = StaticModel(twice_s / 2, d, hz)
    e = level_energies(model)
    np.testing.assert_allclose(ladder_frequencies(model), e[1:] - e[:-1], atol=1e-12)


def test_negative_anisotropy_rejected():
    with pytest.raises(ValueError):
        StaticModel(10, -0.1)


# --- compact kernel ---------------------------------------------------------

@pytest.mark.parametrize("twice_s", [1, 2, 3, 19, 20, 40])
def test_kernel_matches_cosine_sum(twice_s):
    t = np.linspace(0, 3000, 20001)
    np.testing.assert_allclose(eval_f(twice_s / 2, 0.1, t), cos_sum(twice_s, 0.1, t), atol=1e-10 * twice_s)


@pytest.mark.parametrize("twice_s", [19, 20])
@pytest.mark.parametrize("k", [0, 1, 2, 7, 95])
def test_kernel_at_singular_points(twice_s, k):
    # cos((2m-1) k pi) is (-1)^k for integer S and 1 for half-integer S
    d = 0.1
    expected = twice_s * (1.0 if twice_s % 2 else (-1.0) ** k)
    t0 = k * np.pi / d
    assert eval_f(twice_s / 2, d, t0) == pytest.approx(expected, abs=1e-9)
    for eps in (1e-12, 1e-9, 1e-6):
        for side in (-1, 1):
            t = t0 + side * eps
            assert eval_f(twice_s / 2, d, t) == pytest.approx(float(cos_sum(twice_s, d, t)), abs=1e-8)


def test_kernel_is_even_and_scalar():
    assert isinstance(eval_f(10, 0.1, 3.0), float)
    assert eval_f(10, 0.1, -3.0) == pytest.approx(eval_f(10, 0.1, 3.0))
    with pytest.raises(ValueError):
        eval_f(10, 0.0, 1.0)


@given(st.integers(1, 40), st.floats(0.01, 1.0), st.floats(0.0, 5000.0))
def test_kernel_property(twice_s, d, t):
    assert eval_f(twice_s / 2, d, t) == pytest.approx(float(cos_sum(twice_s, d, t)), abs=1e-7 * twice_s)


def test_explicit_full_sum_telescopes_to_kernel():
    # the lab-frame sum of all 2S components at Hz = 0 equals b = f(t), a = 0
    model = StaticModel(10, 0.1)
    t = np.linspace(0, 500, 4001)
    a, b = drive_coefficients(model, DriveSpec("explicit-sum", 0.005, s_prime=-9), t)
    a2, b2 = drive_coefficients(model, DriveSpec("compact-kernel", 0.005), t)
    np.testing.assert_allclose(a, 0, atol=1e-10)
    np.testing.assert_allclose(a2, 0, atol=1e-10)
    np.testing.assert_allclose(b, b2, atol=1e-10)


# --- Hamiltonians -----------------------------------------------------------

@pytest.mark.parametrize("form,kw", [
    ("explicit-sum", {"s_prime": 3}),
    ("single-frequency", {"m_single": 10}),
    ("compact-kernel", {}),
])
def test_lab_hamiltonian_hermitian(form, kw, rng):
    model = StaticModel(10, 0.1, 0.1)
    ops = make_operators(10)
    drive = DriveSpec(form, 0.005, **kw)
    for t in rng.uniform(0, 3000, 5):
        check_hermitian(lab_hamiltonian(model, drive, ops, t))


def test_rotating_form_is_field_free():
    ops = make_operators(10)
    drive = DriveSpec("compact-kernel", 0.005, "rotating")
    for t in (0.0, 1.3, 31.41592653589793, 777.7):
        h0 = rotating_hamiltonian(StaticModel(10, 0.1, 0.0), drive, ops, t)
        h1 = rotating_hamiltonian(StaticModel(10, 0.1, 0.37), drive, ops, t)
        np.testing.assert_array_equal(h0, h1)
        expected = -0.1 * ops.sz @ ops.sz - 0.005 * eval_f(10, 0.1, t) * ops.sy
        np.testing.assert_allclose(h0, expected, atol=1e-14)


def test_lab_to_rotating_transformation(rng):
    # H_rot = U^+ H_lab U - Hz Sz with U = exp(i Hz Sz t), the frame co-rotating with the field
    model = StaticModel(10, 0.1, 0.23)
    ops = make_operators(10)
    lab = DriveSpec("compact-kernel", 0.005, "lab")
    rot = DriveSpec("compact-kernel", 0.005, "rotating")
    m = np.diag(ops.sz).real
    for t in rng.uniform(0, 500, 4):
        u = np.diag(np.exp(1j * model.hz * m * t))
        transformed = u.conj().T @ lab_hamiltonian(model, lab, ops, t) @ u + model.hz * ops.sz
        np.testing.assert_allclose(transformed, rotating_hamiltonian(model, rot, ops, t), atol=1e-12)


def test_frame_dispatch_and_guards():
    model = StaticModel(10, 0.1)
    ops = make_operators(10)
    rot = DriveSpec("compact-kernel", 0.005, "rotating")
    np.testing.assert_array_equal(hamiltonian(model, rot, ops, 2.0), rotating_hamiltonian(model, rot, ops, 2.0))
    with pytest.raises(ValueError):
        lab_hamiltonian(model, rot, ops, 0.0)
    with pytest.raises(ValueError):
        validate_drive(model, DriveSpec("explicit-sum", 0.005, "rotating", s_prime=5))
    with pytest.raises(ValueError):
        validate_drive(StaticModel(10, 0.0), DriveSpec("compact-kernel", 0.005))
    with pytest.raises(ValueError):
        validate_drive(model, DriveSpec("rabi-flat", 0.005))
    with pytest.raises(ValueError):
        validate_drive(model, DriveSpec("explicit-sum", 0.005, s_prime=-10))
    with pytest.raises(ValueError):
        DriveSpec("compact-kernel", 0.0)
