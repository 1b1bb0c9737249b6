"""Fixed-step unitary propagation of i d(psi)/dt = H(t) psi.

Two one-step routines act on any Hamiltonian supplied as a callable
``h_provider(t) -> matrix``; they are the reference implementations.
``evolve`` runs the same schemes on the tridiagonal drive Hamiltonians of
this package through compiled loops, in the interaction picture of the static
part.  That change of picture is exact (the static part is diagonal) and
leaves populations, and therefore <Sz>, untouched.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Literal

import numpy as np

from . import _kernels
from .hamiltonian import drive_coefficients, frame_energies, ladder_frequencies
from .protocols import DriveProtocol
from .spin import hermitian_eigendecomposition, ladder_elements

log = logging.getLogger(__name__)

Method = Literal["exponential-midpoint", "rk4"]
METHODS = ("exponential-midpoint", "rk4")

DEFAULT_DT = 0.01
MIN_STEPS_PER_PERIOD = 20
DEFAULT_STEPS_PER_PERIOD = 2000
MAX_RECORDED = 100_000
RK4_ABORT_DRIFT = 1e-6
CHUNK_STEPS = 1 << 16

HProvider = Callable[[float], np.ndarray]


class ConvergenceError(RuntimeError):
    """Raised when a run cannot be trusted numerically (e.g. RK4 norm blow-up)."""


@dataclass(frozen=True)
class IntegratorConfig:
    t_max: float
    dt: float | None = None
    method: Method = "exponential-midpoint"
    record_stride: int | None = None

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if not (math.isfinite(self.t_max) and self.t_max > 0):
            raise ValueError(f"t_max must be positive, got {self.t_max}")
        if self.dt is not None and not (math.isfinite(self.dt) and self.dt > 0):
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.record_stride is not None and (int(self.record_stride) != self.record_stride or self.record_stride < 1):
            raise ValueError(f"record_stride must be a positive integer, got {self.record_stride}")

    @property
    def n_steps(self) -> int:
        return math.ceil(self.t_max / self.dt - 1e-9)


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (len(times), dim), frame of the protocol's drive
    protocol_label: str
    config: IntegratorConfig
    frame: str = "lab"
    max_norm_drift: float = 0.0

    def __len__(self):
        return self.times.size


def fastest_frequency(protocol: DriveProtocol) -> float:
    """Fastest rate left once the static part is removed.

    That is the larger of the biggest detuning between a drive component and
    a ladder transition, and a bound on the coupling strength (row sum of the
    drive term).  Flat Rabi driving has no detuning, only coupling.
    """
    model = protocol.model
    drive = np.asarray(protocol.frequency_list)
    transitions = ladder_frequencies(model)
    detuning = float(np.max(np.abs(drive[:, None] - transitions[None, :]))) if drive.size else 0.0
    coupling = protocol.drive.h_ac * drive.size * float(ladder_elements(model.spin).max())
    return max(detuning, coupling)


def max_dt(protocol: DriveProtocol) -> float:
    nu = fastest_frequency(protocol)
    return 2 * math.pi / (MIN_STEPS_PER_PERIOD * nu)


def resolve_config(protocol: DriveProtocol, config: IntegratorConfig) -> IntegratorConfig:
    """Fill in dt and record_stride.

    An automatic dt resolves the fastest rate with DEFAULT_STEPS_PER_PERIOD
    steps and divides t_max evenly.  A pinned dt coarser than MIN_STEPS_PER_PERIOD
    steps per period is rejected.
    """
    nu = fastest_frequency(protocol)
    dt = config.dt
    if dt is None:
        target = min(DEFAULT_DT, 2 * math.pi / (DEFAULT_STEPS_PER_PERIOD * nu))
        dt = config.t_max / math.ceil(config.t_max / target)
        if target < DEFAULT_DT:
            log.info("%s: dt tightened to %.6g (fastest rate %.4g)", protocol.label, dt, nu)
    elif dt > max_dt(protocol) * (1 + 1e-12):
        raise ValueError(
            f"dt={dt} gives fewer than {MIN_STEPS_PER_PERIOD} steps per period of the "
            f"fastest rate {nu:.4g}; use dt <= {max_dt(protocol):.4g}"
        )
    resolved = replace(config, dt=dt)
    stride = config.record_stride or max(1, math.ceil(resolved.n_steps / MAX_RECORDED))
    return replace(resolved, record_stride=stride)


def step_exponential_midpoint(h_provider: HProvider, psi: np.ndarray, t: float, dt: float) -> np.ndarray:
    """psi(t+dt) = exp(-i H(t+dt/2) dt) psi(t), via eigendecomposition of H."""
    lam, v = hermitian_eigendecomposition(h_provider(t + dt / 2))
    return v @ (np.exp(-1j * lam * dt) * (v.conj().T @ psi))


def step_rk4(h_provider: HProvider, psi: np.ndarray, t: float, dt: float) -> tuple[np.ndarray, float]:
    """One classical RK4 step, renormalised.  Returns (state, norm drift of the raw step)."""
    def rhs(tt, y):
        return -1j * (h_provider(tt) @ y)

    k1 = rhs(t, psi)
    k2 = rhs(t + dt / 2, psi + dt / 2 * k1)
    k3 = rhs(t + dt / 2, psi + dt / 2 * k2)
    k4 = rhs(t + dt, psi + dt * k3)
    out = psi + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
    norm2 = float(np.vdot(out, out).real)
    drift = abs(norm2 - float(np.vdot(psi, psi).real))
    if drift > RK4_ABORT_DRIFT:
        raise ConvergenceError(f"RK4 norm drift {drift:.3e} at t={t}; reduce dt")
    return out / math.sqrt(norm2) * math.sqrt(float(np.vdot(psi, psi).real)), drift


def propagate(h_provider: HProvider, psi0: np.ndarray, dt: float, n_steps: int, method: Method = "exponential-midpoint"):
    """Apply ``n_steps`` reference steps from t = 0; returns the final state."""
    psi = np.asarray(psi0, dtype=complex)
    for i in range(n_steps):
        if method == "rk4":
            psi, _ = step_rk4(h_provider, psi, i * dt, dt)
        else:
            psi = step_exponential_midpoint(h_provider, psi, i * dt, dt)
    return psi


def _plus_coefficient(model, drive, t):
    """S+ coefficient of the drive: -h_ac (a Sx + b Sy) = c S+ + conj(c) S-."""
    a, b = drive_coefficients(model, drive, t)
    return -drive.h_ac * (a - 1j * b) / 2


def _check_initial(psi0, dim) -> np.ndarray:
    psi = np.array(psi0, dtype=complex).reshape(-1)
    if psi.size != dim:
        raise ValueError(f"initial state has size {psi.size}, expected {dim}")
    norm = np.vdot(psi, psi).real
    if abs(norm - 1) > 1e-12:
        raise ValueError(f"initial state must be normalised (|psi|^2 = {norm})")
    return psi


def evolve(protocol: DriveProtocol, psi0: np.ndarray, config: IntegratorConfig) -> Trajectory:
    """Integrate from t = 0 to t_max on a fixed grid; deterministic for a fixed config."""
    model, drive = protocol.model, protocol.drive
    cfg = resolve_config(protocol, config)
    dim = model.spin.dim
    psi = _check_initial(psi0, dim)

    energies = frame_energies(model, drive.frame)
    k = ladder_elements(model.spin)
    nu = energies[:-1] - energies[1:]
    nu0 = float(nu[0])
    dnu = float(nu[1] - nu[0]) if nu.size > 1 else 0.0
    if not np.allclose(nu, nu0 + dnu * np.arange(nu.size), rtol=0, atol=1e-12 * max(1.0, np.abs(nu).max())):
        raise ValueError("static energies must be quadratic in m")
    dt, stride, n_steps = cfg.dt, cfg.record_stride, cfg.n_steps
    n_rec = n_steps // stride
    rec = np.empty((n_rec + 1, dim), dtype=complex)
    rec[0] = psi
    # keep chunks aligned with the recording stride
    chunk = max(stride, CHUNK_STEPS // stride * stride)
    row = 1
    worst = 0.0
    for start in range(0, n_steps, chunk):
        count = min(chunk, n_steps - start)
        out = np.empty((count // stride, dim), dtype=complex)
        if cfg.method == "rk4":
            t_half = (2 * start + np.arange(2 * count + 1)) * (dt / 2)
            c_half = _plus_coefficient(model, drive, t_half)
            wrote, drift = _kernels.rk4_chunk(k, nu0, dnu, c_half, t_half, psi, dt, count, stride, out, RK4_ABORT_DRIFT)
            worst = max(worst, drift)
            if wrote < 0:
                raise ConvergenceError(f"RK4 norm drift {drift:.3e} exceeded {RK4_ABORT_DRIFT:g}; reduce dt")
        else:
            t_mid = (2 * start + 1 + 2 * np.arange(count)) * (dt / 2)
            c_mid = _plus_coefficient(model, drive, t_mid)
            wrote = _kernels.midpoint_chunk(k, nu0, dnu, c_mid, t_mid, psi, dt, count, stride, out)
        rec[row:row + wrote] = out[:wrote]
        row += wrote
    times = np.arange(n_rec + 1) * (dt * stride)
    # back from the interaction picture: psi = exp(-i E t) psi_I
    states = rec * np.exp(-1j * np.outer(times, energies))
    return Trajectory(times, states, protocol.label, cfg, drive.frame, worst)


def sz_series(traj: Trajectory, m_values: np.ndarray) -> np.ndarray:
    return (np.abs(traj.states) ** 2) @ m_values


def convergence_report(protocol: DriveProtocol, psi0: np.ndarray, config: IntegratorConfig,
                       reference: Trajectory | None = None) -> float:
    """max |<Sz>_dt - <Sz>_{dt/2}| over the recorded grid.

    ``reference`` may be a trajectory already computed with ``config``.
    """
    cfg = resolve_config(protocol, config)
    if reference is None:
        reference = evolve(protocol, psi0, cfg)
    fine = evolve(protocol, psi0, replace(cfg, dt=cfg.dt / 2, record_stride=2 * cfg.record_stride))
    m = protocol.model.spin.m_values()
    a, b = sz_series(reference, m), sz_series(fine, m)
    n = min(a.size, b.size)
    return float(np.max(np.abs(a[:n] - b[:n]), initial=0.0))
