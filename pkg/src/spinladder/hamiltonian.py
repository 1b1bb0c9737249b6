"""Uniaxial spin Hamiltonian, resonance ladder and ac-drive terms.

Units have hbar = 1: energies, fields and angular frequencies share one unit
and time is measured in its inverse.  The drive phase convention is fixed::

    H_drive(t) = -h_ac * (a(t) Sx + b(t) Sy)

where for a single circularly polarised component at frequency w the pair is
(a, b) = (sin wt, cos wt).  Every drive in this module reduces to one (a, b)
pair, so the full Hamiltonian is always tridiagonal in the Sz basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .spin import SpinOperatorSet, SpinQuantumNumber, _as_spin

DriveForm = Literal["explicit-sum", "compact-kernel", "single-frequency", "rabi-flat"]
Frame = Literal["lab", "rotating"]

DRIVE_FORMS = ("explicit-sum", "compact-kernel", "single-frequency", "rabi-flat")
FRAMES = ("lab", "rotating")

# below this |sin(D t)| the kernel is summed term by term instead of as a ratio
KERNEL_RATIO_CUTOFF = 1e-8


@dataclass(frozen=True)
class StaticModel:
    """-D Sz^2 - Hz Sz for spin ``spin``."""

    spin: SpinQuantumNumber
    d: float
    hz: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "spin", _as_spin(self.spin))
        if not (np.isfinite(self.d) and np.isfinite(self.hz)):
            raise ValueError("d and hz must be finite")
        if self.d < 0:
            raise ValueError(f"anisotropy d must be >= 0 (easy axis), got {self.d}")

    @property
    def s(self) -> float:
        return self.spin.s


@dataclass(frozen=True)
class DriveSpec:
    form: DriveForm
    h_ac: float
    frame: Frame = "lab"
    s_prime: float | None = None
    m_single: float | None = None

    def __post_init__(self):
        if self.form not in DRIVE_FORMS:
            raise ValueError(f"unknown drive form {self.form!r}")
        if self.frame not in FRAMES:
            raise ValueError(f"unknown frame {self.frame!r}")
        if not (np.isfinite(self.h_ac) and self.h_ac > 0):
            raise ValueError(f"h_ac must be positive, got {self.h_ac}")
        if self.form == "explicit-sum" and self.s_prime is None:
            raise ValueError("explicit-sum drive needs s_prime")
        if self.form == "single-frequency" and self.m_single is None:
            raise ValueError("single-frequency drive needs m_single")


@dataclass(frozen=True)
class BarrierProfile:
    m: np.ndarray
    energy: np.ndarray  # E_m - E_min
    e_min: float

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.m.tolist(), self.energy.tolist()))


def level_energy(model: StaticModel, m) -> float:
    model.spin.index_of(m)
    m = float(m)
    return -model.d * m * m - model.hz * m


def level_energies(model: StaticModel) -> np.ndarray:
    """E_m in basis order m = S, ..., -S."""
    m = model.spin.m_values()
    return -model.d * m * m - model.hz * m


def transition_frequency(model: StaticModel, m) -> float:
    """w_{m -> m-1} = E_{m-1} - E_m = Hz + D(2m - 1)."""
    if model.spin.index_of(m) == model.spin.dim - 1:
        raise ValueError(f"m={m} is the bottom of the ladder; no m-1 state")
    return model.hz + model.d * (2 * float(m) - 1)


def ladder_frequencies(model: StaticModel, m_low=None) -> np.ndarray:
    """Frequencies w_{m -> m-1} for m = S down to ``m_low`` (default -S+1)."""
    s = model.spin
    if m_low is None:
        m_low = -s.s + 1
    stop = s.index_of(m_low)
    if stop == s.dim - 1:
        raise ValueError(f"lowest driven level m={m_low} has no m-1 partner")
    m = s.m_values()[: stop + 1]
    return model.hz + model.d * (2 * m - 1)


def barrier_profile(model: StaticModel) -> BarrierProfile:
    s = model.spin.s
    e_min = -model.d * s * s - model.hz * s
    return BarrierProfile(model.spin.m_values(), level_energies(model) - e_min, e_min)


def _kernel_sum(twice_s: int, d: float, t: np.ndarray) -> np.ndarray:
    out = np.zeros_like(t)
    for m in (twice_s - 2 * np.arange(twice_s)) / 2:  # m = S, ..., -S+1
        out += np.cos(d * (2 * m - 1) * t)
    return out


def eval_f(s, d: float, t):
    """Compact ladder kernel sin(2DSt)/sin(Dt).

    Equal to sum_{m=S}^{-S+1} cos(D(2m-1)t).  The argument Dt is first reduced
    modulo pi so numerator and denominator see the same rounding, which keeps
    the ratio accurate right up to the removable singularities; there the
    finite cosine sum is used instead.
    """
    s = _as_spin(s)
    if not d > 0:
        raise ValueError("eval_f needs d > 0; use the rabi-flat drive for d = 0")
    t_arr = np.asarray(t, dtype=float)
    x = d * t_arr
    k = np.round(x / np.pi)
    r = x - k * np.pi
    sin_r = np.sin(r)
    sign = np.where((k * (s.twice_s - 1)) % 2 == 0, 1.0, -1.0)
    small = np.abs(sin_r) <= KERNEL_RATIO_CUTOFF
    safe = np.where(small, 1.0, sin_r)
    out = sign * np.sin(s.twice_s * r) / safe
    if np.any(small):
        out = np.where(small, _kernel_sum(s.twice_s, d, t_arr), out)
    return out if out.ndim else float(out)


def drive_frequencies(model: StaticModel, drive: DriveSpec) -> np.ndarray:
    """Frequencies of the circular components making up ``drive``."""
    if drive.form == "single-frequency":
        return np.array([transition_frequency(model, drive.m_single)])
    if drive.form == "explicit-sum":
        return ladder_frequencies(model, drive.s_prime)
    if drive.form == "compact-kernel":
        return ladder_frequencies(model)
    return np.full(model.spin.twice_s, model.hz)


def is_full_ladder(model: StaticModel, drive: DriveSpec) -> bool:
    if drive.form == "compact-kernel":
        return True
    if drive.form == "explicit-sum":
        return model.spin.index_of(drive.s_prime) == model.spin.dim - 2
    return False


def validate_drive(model: StaticModel, drive: DriveSpec) -> None:
    s = model.spin
    if drive.form == "explicit-sum":
        i = s.index_of(drive.s_prime)
        if i == s.dim - 1:
            raise ValueError(f"s_prime={drive.s_prime} must satisfy -S+1 <= s_prime <= S")
    elif drive.form == "single-frequency":
        if s.index_of(drive.m_single) == s.dim - 1:
            raise ValueError(f"m_single={drive.m_single} must satisfy -S+1 <= m <= S")
    elif drive.form == "compact-kernel":
        if model.d <= 0:
            raise ValueError("compact-kernel drive is undefined at d = 0; use rabi-flat")
    elif drive.form == "rabi-flat":
        if model.d != 0:
            raise ValueError("rabi-flat drive assumes d = 0")
    if drive.frame == "rotating" and not (is_full_ladder(model, drive) or drive.form == "rabi-flat"):
        raise ValueError(f"{drive.form} drive with this ladder has no rotating-frame form")


def drive_coefficients(model: StaticModel, drive: DriveSpec, t) -> tuple[np.ndarray, np.ndarray]:
    """(a(t), b(t)) such that the drive term is -h_ac (a Sx + b Sy)."""
    validate_drive(model, drive)
    t = np.asarray(t, dtype=float)
    two_s = model.spin.twice_s
    if drive.frame == "rotating":
        if drive.form == "compact-kernel":
            b = eval_f(model.spin, model.d, t)
        elif drive.form == "rabi-flat":
            b = np.full_like(t, float(two_s))
        else:
            b = _kernel_sum(two_s, model.d, t)
        return np.zeros_like(t), np.asarray(b, dtype=float)
    if drive.form == "compact-kernel":
        f = eval_f(model.spin, model.d, t)
        return f * np.sin(model.hz * t), f * np.cos(model.hz * t)
    if drive.form == "rabi-flat":
        return two_s * np.sin(model.hz * t), two_s * np.cos(model.hz * t)
    a = np.zeros_like(t)
    b = np.zeros_like(t)
    for w in drive_frequencies(model, drive):
        a += np.sin(w * t)
        b += np.cos(w * t)
    return a, b


def frame_energies(model: StaticModel, frame: Frame) -> np.ndarray:
    """Diagonal of the static part in the given frame (basis order)."""
    if frame == "rotating":
        m = model.spin.m_values()
        return -model.d * m * m
    return level_energies(model)


def static_hamiltonian(model: StaticModel, ops: SpinOperatorSet) -> np.ndarray:
    return -model.d * ops.sz @ ops.sz - model.hz * ops.sz


def lab_hamiltonian(model: StaticModel, drive: DriveSpec, ops: SpinOperatorSet, t: float) -> np.ndarray:
    if drive.frame != "lab":
        raise ValueError("lab_hamiltonian needs a lab-frame drive")
    a, b = drive_coefficients(model, drive, t)
    return static_hamiltonian(model, ops) - drive.h_ac * (float(a) * ops.sx + float(b) * ops.sy)


def rotating_hamiltonian(model: StaticModel, drive: DriveSpec, ops: SpinOperatorSet, t: float) -> np.ndarray:
    """-D Sz^2 - h_ac f(t) Sy; Hz drops out by construction."""
    if drive.frame != "rotating":
        raise ValueError("rotating_hamiltonian needs a rotating-frame drive")
    _, b = drive_coefficients(model, drive, t)
    return -model.d * ops.sz @ ops.sz - drive.h_ac * float(b) * ops.sy


def hamiltonian(model: StaticModel, drive: DriveSpec, ops: SpinOperatorSet, t: float) -> np.ndarray:
    if drive.frame == "rotating":
        return rotating_hamiltonian(model, drive, ops, t)
    return lab_hamiltonian(model, drive, ops, t)
