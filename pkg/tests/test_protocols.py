import numpy as np
import pytest

from spinladder.hamiltonian import StaticModel
from spinladder.protocols import (
    full_gqoab_protocol,
    ladder_protocol,
    pi_pulse_duration,
    rabi_period,
    rabi_protocol,
    single_resonance_protocol,
)

MODEL = StaticModel(10, 0.1)


def test_single_resonance():
    p = single_resonance_protocol(MODEL, 10, 0.005)
    assert p.label == "single(m=10)"
    assert p.frequency_list == pytest.approx((1.9,))
    assert p.effective_amplitude == 0.005


def test_ladder_frequency_count():
    for s_prime, n in [(10, 1), (9, 2), (0, 11), (-9, 20)]:
        p = ladder_protocol(MODEL, s_prime, 0.005)
        assert len(p.frequency_list) == n
    assert ladder_protocol(MODEL, -9, 0.005).label == "ladder(S'=-9)"
    with pytest.raises(ValueError):
        ladder_protocol(MODEL, -10, 0.005)
    with pytest.raises(ValueError):
        ladder_protocol(MODEL, 5, 0.005, frame="rotating")


def test_half_integer_labels():
    model = StaticModel(9.5, 0.1)
    assert ladder_protocol(model, -8.5, 0.005).label == "ladder(S'=-8.5)"
    assert len(full_gqoab_protocol(model, 0.005).frequency_list) == 19


def test_full_ladder_and_rabi():
    p = full_gqoab_protocol(MODEL, 0.005, frame="rotating")
    np.testing.assert_allclose(p.frequency_list, 1.9 - 0.2 * np.arange(20), atol=1e-12)
    with pytest.raises(ValueError):
        full_gqoab_protocol(StaticModel(10, 0.0), 0.005)
    r = rabi_protocol(10, 0.1, 0.005)
    assert r.model.d == 0
    assert r.effective_amplitude == pytest.approx(0.1)  # 2S h_ac
    assert set(r.frequency_list) == {0.1}


def test_pulse_timing():
    # T = 2 pi / h_ac, pi pulse at T/2
    assert rabi_period(0.005) == pytest.approx(1256.6370614359173)
    assert pi_pulse_duration(0.005) == pytest.approx(628.3185307179587)
    with pytest.raises(ValueError):
        pi_pulse_duration(0)
