"""Observables along a trajectory and quantities derived from them."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .integrator import Trajectory
from .spin import SpinOperatorSet, SpinQuantumNumber


@dataclass(frozen=True, eq=False)
class ObservableSeries:
    spin: SpinQuantumNumber
    times: np.ndarray
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    s_fidelity: np.ndarray  # <Sx>^2 + <Sy>^2 + <Sz>^2
    s_total: np.ndarray  # <Sx^2 + Sy^2 + Sz^2>
    norm: np.ndarray
    populations: np.ndarray  # (len(times), 2S+1), basis order m = S..-S

    def __len__(self):
        return self.times.size

    def reduced(self, name: str) -> np.ndarray:
        """A component divided by S (spin components) or S^2 (fidelity, total spin)."""
        s = self.spin.s
        scale = {"sx": s, "sy": s, "sz": s, "s_fidelity": s * s, "s_total": s * s}[name]
        return getattr(self, name) / scale


@dataclass(frozen=True)
class PeriodEstimate:
    period: float
    method: str
    first_minimum_time: float
    min_value: float


def _expect(states: np.ndarray, op: np.ndarray) -> np.ndarray:
    return np.einsum("ni,ij,nj->n", states.conj(), op, states).real


def observables(trajectory: Trajectory, ops: SpinOperatorSet) -> ObservableSeries:
    states = trajectory.states
    if states.shape[1] != ops.dim:
        raise ValueError(f"trajectory dimension {states.shape[1]} does not match operators ({ops.dim})")
    sx, sy, sz = (_expect(states, op) for op in (ops.sx, ops.sy, ops.sz))
    pops = np.abs(states) ** 2
    return ObservableSeries(
        spin=ops.spin,
        times=trajectory.times,
        sx=sx,
        sy=sy,
        sz=sz,
        s_fidelity=sx**2 + sy**2 + sz**2,
        s_total=_expect(states, ops.casimir),
        norm=np.sqrt(pops.sum(axis=1)),
        populations=pops,
    )


def period_window(drive_amplitude: float) -> float:
    """End of the search window for the first reversal, 1.5 Rabi periods."""
    return 1.5 * 2 * math.pi / drive_amplitude


def reversal_period(series: ObservableSeries, drive_amplitude: float) -> PeriodEstimate:
    """Twice the time of the deepest point of the first excursion of <Sz>.

    The window [0, 1.5 * 2pi/amplitude], clipped to the run length, fixes the
    depth ``vmin`` of the reversal.  The first envelope oscillation starts when
    <Sz> drops below the level halfway between its start and ``vmin`` and ends
    once it climbs back three quarters of the way up, so fast ripple around
    the halfway level cannot cut it short.  Its lowest point is the first
    minimum.
    """
    t, sz = series.times, series.sz
    if t.size < 3:
        raise ValueError("series too short for a period estimate")
    end = period_window(drive_amplitude)
    inside = t <= end * (1 + 1e-9)
    vmin = sz[inside].min()
    depth = sz[0] - vmin
    below = np.flatnonzero(sz < sz[0] - 0.5 * depth)
    if depth <= 0 or below.size == 0:
        raise ValueError("no reversal in the search window")
    first = below[0]
    above = np.flatnonzero(sz[first:] >= sz[0] - 0.25 * depth)
    if above.size == 0:
        raise ValueError("no recovery after the first minimum; increase t_max")
    last = first + above[0]
    i = first + int(np.argmin(sz[first:last]))
    return PeriodEstimate(
        period=2 * float(t[i]),
        method="2x first minimum of <Sz>",
        first_minimum_time=float(t[i]),
        min_value=float(sz[i]),
    )


def compare_series(a, b) -> float:
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"series grids differ: {a.shape} vs {b.shape}")
    return float(np.max(np.abs(a - b), initial=0.0))


def leakage(series: ObservableSeries, target_ms) -> float:
    """Largest total population found outside the levels ``target_ms``."""
    idx = {series.spin.index_of(m) for m in target_ms}
    outside = [i for i in range(series.spin.dim) if i not in idx]
    if not outside:
        return 0.0
    return float(series.populations[:, outside].sum(axis=1).max())


SWEEP_AXES = ("h_ac", "d", "hz", "s", "s_prime")


@dataclass(frozen=True)
class SweepRow:
    value: float
    period: PeriodEstimate | None
    min_sz_reduced: float | None
    max_norm_error: float | None  # max | |psi|^2 - 1 |
    max_s_total_error: float | None  # max |<S^2> - S(S+1)|
    error: str | None = None


def _with_axis(base, axis: str, value):
    from dataclasses import replace

    if axis == "s":
        spin_changed = replace(base, twice_s=int(round(2 * value)), initial_m=None)
        if base.protocol == "single" and base.m_single is not None:
            spin_changed = replace(spin_changed, m_single=None)
        return spin_changed
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; expected one of {', '.join(SWEEP_AXES)}")
    return replace(base, **{axis: value})


def sweep_row(base, axis: str, value) -> SweepRow:
    """Run one sweep point; failures are captured in the row instead of raised."""
    from .config import run_simulation
    from .spin import make_operators

    try:
        config = _with_axis(base, axis, value).validate()
        protocol, traj = run_simulation(config)
        series = observables(traj, make_operators(config.spin))
    except (ValueError, RuntimeError) as exc:
        return SweepRow(float(value), None, None, None, None, str(exc))
    s = config.spin.s
    norm_err = float(np.max(np.abs(series.norm**2 - 1)))
    total_err = float(np.max(np.abs(series.s_total - s * (s + 1))))
    try:
        period = reversal_period(series, protocol.effective_amplitude)
        error = None
    except ValueError as exc:
        period, error = None, str(exc)
    return SweepRow(float(value), period, float(series.sz.min() / s), norm_err, total_err, error)


def sweep(base, axis: str, values, max_workers: int = 1) -> list[SweepRow]:
    """One row per value of ``axis``, in the order given.

    Rows are independent; ``max_workers > 1`` computes them in separate processes.
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"unknown sweep axis {axis!r}; expected one of {', '.join(SWEEP_AXES)}")
    values = list(values)
    if max_workers <= 1 or len(values) <= 1:
        return [sweep_row(base, axis, v) for v in values]
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(sweep_row, [base] * len(values), [axis] * len(values), values))
