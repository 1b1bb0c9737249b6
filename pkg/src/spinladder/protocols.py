"""Named drive protocols: single resonance, partial ladders, the full ladder and flat Rabi."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import DriveSpec, Frame, StaticModel, drive_frequencies, validate_drive
from .spin import SpinQuantumNumber, _as_spin


def _fmt_m(m) -> str:
    m = float(m)
    return str(int(m)) if m.is_integer() else f"{m:g}"


@dataclass(frozen=True)
class DriveProtocol:
    model: StaticModel
    drive: DriveSpec
    label: str
    frequency_list: tuple[float, ...]

    @property
    def effective_amplitude(self) -> float:
        """Amplitude that sets the Rabi rate: 2S h_ac for the flat drive, h_ac otherwise."""
        if self.drive.form == "rabi-flat":
            return self.model.spin.twice_s * self.drive.h_ac
        return self.drive.h_ac


def _build(model, drive, label) -> DriveProtocol:
    validate_drive(model, drive)
    freqs = tuple(float(w) for w in drive_frequencies(model, drive))
    return DriveProtocol(model, drive, label, freqs)


def single_resonance_protocol(model: StaticModel, m, h_ac: float) -> DriveProtocol:
    """One circular component resonant with m -> m-1."""
    drive = DriveSpec("single-frequency", h_ac, "lab", m_single=float(m))
    return _build(model, drive, f"single(m={_fmt_m(m)})")


def ladder_protocol(model: StaticModel, s_prime, h_ac: float, frame: Frame = "lab") -> DriveProtocol:
    """Explicit sum of the components m = S down to ``s_prime``."""
    drive = DriveSpec("explicit-sum", h_ac, frame, s_prime=float(s_prime))
    return _build(model, drive, f"ladder(S'={_fmt_m(s_prime)})")


def full_gqoab_protocol(model: StaticModel, h_ac: float, frame: Frame = "lab") -> DriveProtocol:
    """All 2S ladder components, summed in closed form through the compact kernel."""
    if model.d <= 0:
        raise ValueError("the full-ladder protocol needs d > 0; use rabi_protocol for d = 0")
    drive = DriveSpec("compact-kernel", h_ac, frame)
    return _build(model, drive, "full-gqoab")


def rabi_protocol(s, hz: float, h_ac: float, frame: Frame = "lab") -> DriveProtocol:
    """Flat resonant drive at d = 0: 2S coincident components, amplitude 2S h_ac."""
    model = StaticModel(_as_spin(s), 0.0, hz)
    return _build(model, DriveSpec("rabi-flat", h_ac, frame), "rabi-d0")


def pi_pulse_duration(h_ac: float) -> float:
    """Half a Rabi period, pi / h_ac."""
    if not h_ac > 0:
        raise ValueError("h_ac must be positive")
    return float(np.pi / h_ac)


def rabi_period(h_ac: float) -> float:
    return 2 * pi_pulse_duration(h_ac)
