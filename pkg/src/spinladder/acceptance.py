"""Reproduction criteria for the barrier-crossing dynamics, runnable as a suite.

Each criterion returns a :class:`CriterionResult`.  Trajectories are cached per
process so criteria that share a configuration (and the conservation and
convergence sweeps over every run) do not integrate twice.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .analysis import ObservableSeries, compare_series, observables, reversal_period
from .hamiltonian import DriveSpec, StaticModel, drive_coefficients
from .integrator import IntegratorConfig, Trajectory, convergence_report, evolve, sz_series
from .protocols import (
    DriveProtocol,
    full_gqoab_protocol,
    ladder_protocol,
    pi_pulse_duration,
    rabi_protocol,
    single_resonance_protocol,
)
from .spin import SpinQuantumNumber, basis_state, make_operators

H_AC = 0.005
RUN_T_MAX = 3000.0
CONVERGENCE_TOL = 1e-6
NORM_TOL = 1e-9
CASIMIR_TOL = 1e-9
FIDELITY_FLAT_TOL = 1e-6
FIDELITY_DIP_FRACTION = 0.1


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    detail: str
    values: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} [{self.number:2d}] {self.title}: {self.detail} ({self.seconds:.1f}s)"


@dataclass
class _Run:
    protocol: DriveProtocol
    config: IntegratorConfig
    trajectory: Trajectory
    series: ObservableSeries


class RunCache:
    """Memoises evolve() and convergence_report() by (protocol, t_max, method)."""

    def __init__(self):
        self.runs: dict = {}
        self.convergence: dict = {}

    def run(self, protocol: DriveProtocol, t_max: float, method: str = "exponential-midpoint") -> _Run:
        key = (protocol, t_max, method)
        if key not in self.runs:
            spin = protocol.model.spin
            cfg = IntegratorConfig(t_max, method=method)
            traj = evolve(protocol, basis_state(spin, spin.s), cfg)
            self.runs[key] = _Run(protocol, traj.config, traj, observables(traj, make_operators(spin)))
        return self.runs[key]

    def convergence_of(self, key) -> float:
        if key not in self.convergence:
            r = self.runs[key]
            psi0 = basis_state(r.protocol.model.spin, r.protocol.model.spin.s)
            self.convergence[key] = convergence_report(r.protocol, psi0, r.config, reference=r.trajectory)
        return self.convergence[key]


def _model(s, d, hz=0.0) -> StaticModel:
    return StaticModel(SpinQuantumNumber.from_value(s), d, hz)


def _window_t_max(h_ac: float) -> float:
    # a little past the 1.5-period search window so the recovery is on record
    return round(1.6 * 2 * math.pi / h_ac, 6)


def _period(cache: RunCache, protocol: DriveProtocol, t_max=None):
    amp = protocol.effective_amplitude
    r = cache.run(protocol, t_max or _window_t_max(amp))
    return reversal_period(r.series, amp), r


def _spread(values) -> float:
    """max / min - 1 of positive values."""
    return max(values) / min(values) - 1


def c1_rabi(cache):
    h = H_AC
    p_half = rabi_protocol(0.5, 0.1, h)
    est, _ = _period(cache, p_half)
    expected = 2 * math.pi / h
    rel_half = abs(est.period - expected) / expected
    at_pi = cache.run(p_half, pi_pulse_duration(h))
    sz_pi = at_pi.series.reduced("sz")[-1]
    p10 = rabi_protocol(10, 0.1, h)
    est10, _ = _period(cache, p10)
    expected10 = 2 * math.pi / (20 * h)
    rel10 = abs(est10.period - expected10) / expected10
    ok = rel_half <= 0.01 and abs(sz_pi + 1) <= 1e-3 and rel10 <= 0.02
    detail = (f"S=1/2 period {est.period:.2f} (rel err {rel_half:.2e} <= 1e-2), "
              f"Sz/S(pi/h) {sz_pi:.6f} (|+1| <= 1e-3); S=10 period {est10.period:.3f} vs {expected10:.3f} "
              f"(rel err {rel10:.2e} <= 2e-2)")
    return ok, detail, {"period_half": est.period, "sz_at_pi": sz_pi, "period_10": est10.period}


def c2_single_resonance(cache):
    r = cache.run(single_resonance_protocol(_model(10, 0.1), 10, H_AC), RUN_T_MAX)
    sz_min = r.series.sz.min()
    sx_max = np.abs(r.series.sx).max()
    ok = 8.8 <= sz_min <= 9.2 and 1.8 <= sx_max <= 2.2
    return ok, f"min Sz {sz_min:.4f} in [8.8, 9.2]; max |Sx| {sx_max:.4f} in [1.8, 2.2]", \
        {"min_sz": sz_min, "max_abs_sx": sx_max}


def c3_partial_ladders(cache):
    model = _model(10, 0.1)
    mins = {}
    for sp in (9, 10, 8, 5, -9):
        mins[sp] = cache.run(ladder_protocol(model, sp, H_AC), RUN_T_MAX).series.sz.min()
    ok = abs(mins[9] - 8) <= 0.3 and all(abs(mins[sp] - (sp - 1)) <= 0.5 for sp in (10, 8, 5, -9))
    detail = "; ".join(f"S'={sp}: min Sz {v:.3f} (target {sp - 1})" for sp, v in mins.items())
    return ok, detail + "; tol 0.3 for S'=9, 0.5 otherwise", {f"min_sz_sprime_{k}": v for k, v in mins.items()}


def c4_full_reversal(cache):
    r = cache.run(full_gqoab_protocol(_model(10, 0.1), H_AC), RUN_T_MAX)
    window = r.series.times <= 1.5 * 2 * math.pi / H_AC
    red = r.series.sz[window].min() / 10
    return red <= -0.9, f"min Sz/S in first period window {red:.5f} <= -0.9", {"min_sz_reduced": red}


def c5_hz_invariance(cache):
    a = cache.run(full_gqoab_protocol(_model(10, 0.1, 0.0), H_AC), RUN_T_MAX)
    b = cache.run(full_gqoab_protocol(_model(10, 0.1, 0.2), H_AC), RUN_T_MAX)
    dev = compare_series(a.series.sz, b.series.sz)
    return dev <= 1e-6, f"max |Sz(Hz=0) - Sz(Hz=0.2)| {dev:.2e} <= 1e-6", {"max_dev": dev}


def kernel_identity_grid(d: float, n: int = 100_000, t_max: float = RUN_T_MAX) -> np.ndarray:
    """Uniform grid plus points at and within 1e-6..1e-12 of the kernel singularities k*pi/d."""
    ks = np.arange(1, int(t_max * d / math.pi) + 1)
    near = [ks * math.pi / d + off for off in (0.0, 1e-6, -1e-6, 1e-9, -1e-9, 1e-12, -1e-12)]
    special = np.concatenate(near)
    uniform = np.linspace(0.0, t_max, n - special.size)
    return np.sort(np.concatenate([uniform, special]))


def c6_kernel_identity(cache):
    worst = 0.0
    for s in (10, 9.5):
        model = _model(s, 0.1, 0.2)
        t = kernel_identity_grid(model.d)
        a_sum, b_sum = drive_coefficients(model, DriveSpec("explicit-sum", H_AC, s_prime=-model.s + 1), t)
        a_cmp, b_cmp = drive_coefficients(model, DriveSpec("compact-kernel", H_AC), t)
        worst = max(worst, compare_series(a_sum, a_cmp), compare_series(b_sum, b_cmp))
    return worst <= 1e-10, f"max |explicit sum - f(t)(sin, cos)(Hz t)| {worst:.2e} <= 1e-10 on 1e5 points", \
        {"max_dev": worst}


def c7_frame_equivalence(cache):
    model = _model(10, 0.1, 0.1)
    lab = cache.run(ladder_protocol(model, -9, H_AC, "lab"), RUN_T_MAX)
    rot = cache.run(full_gqoab_protocol(model, H_AC, "rotating"), RUN_T_MAX)
    dev = compare_series(lab.series.sz, rot.series.sz)
    return dev <= 1e-6, f"max |Sz lab explicit - Sz rotating compact| {dev:.2e} <= 1e-6", {"max_dev": dev}


def c8_amplitude_scaling(cache):
    products = {}
    for h in (0.005, 0.01, 0.02):
        est, _ = _period(cache, full_gqoab_protocol(_model(10, 0.1), h))
        products[h] = est.period * h
    spread = _spread(products.values())
    detail = ", ".join(f"h={h}: T*h={v:.4f}" for h, v in products.items())
    return spread <= 0.10, f"{detail}; spread {spread:.2e} <= 0.10", {"period_times_h": products}


def c9_d_independence(cache):
    periods = {}
    for d in (0.1, 0.2, 0.5):
        est, _ = _period(cache, full_gqoab_protocol(_model(10, d), H_AC))
        periods[d] = est.period
    spread = _spread(periods.values())
    small = {}
    for d in (0.05, 0.01):
        r = cache.run(full_gqoab_protocol(_model(10, d), H_AC), _window_t_max(H_AC))
        small[d] = r.series.sz.min() / 10
    ok = spread <= 0.10 and all(v <= -0.5 for v in small.values())
    detail = (", ".join(f"D={d}: T={v:.2f}" for d, v in periods.items()) + f"; spread {spread:.2e} <= 0.10; "
              + ", ".join(f"D={d}: min Sz/S {v:.3f} <= -0.5" for d, v in small.items()))
    return ok, detail, {"periods": periods, "small_d_min": small}


def c10_spin_universality(cache):
    periods, mins = {}, {}
    for s in (5, 10, 9.5):
        est, r = _period(cache, full_gqoab_protocol(_model(s, 0.1), H_AC))
        periods[s] = est.period
        mins[s] = r.series.sz.min() / s
    spread = _spread(periods.values())
    ok = spread <= 0.15 and all(v <= -0.9 for v in mins.values())
    detail = ", ".join(f"S={s}: T={periods[s]:.2f} min Sz/S={mins[s]:.4f}" for s in periods)
    return ok, f"{detail}; period spread {spread:.2e} <= 0.15, min <= -0.9", {"periods": periods, "mins": mins}


def _ensure_conservation_runs(cache):
    rabi_protocol_half = rabi_protocol(0.5, 0.1, H_AC)
    cache.run(rabi_protocol_half, _window_t_max(H_AC))
    cache.run(rabi_protocol(10, 0.1, H_AC), _window_t_max(20 * H_AC))
    return cache.run(full_gqoab_protocol(_model(10, 0.1), H_AC), RUN_T_MAX)


def c11_conservation(cache):
    full_run = _ensure_conservation_runs(cache)
    worst_norm = worst_total = worst_flat = 0.0
    for (protocol, _, _), r in cache.runs.items():
        s = protocol.model.s
        worst_norm = max(worst_norm, float(np.max(np.abs(r.series.norm**2 - 1))))
        worst_total = max(worst_total, float(np.max(np.abs(r.series.s_total - s * (s + 1)))))
        if protocol.model.d == 0:
            worst_flat = max(worst_flat, float(np.ptp(r.series.s_fidelity)))
    dip = float(np.ptp(full_run.series.s_fidelity)) / 100
    ok = worst_norm <= NORM_TOL and worst_total <= CASIMIR_TOL and worst_flat <= FIDELITY_FLAT_TOL \
        and dip >= FIDELITY_DIP_FRACTION
    detail = (f"{len(cache.runs)} runs: norm drift {worst_norm:.1e} <= 1e-9, |<S^2> - S(S+1)| {worst_total:.1e} <= 1e-9, "
              f"D=0 s_f range {worst_flat:.1e} <= 1e-6, full-ladder s_f range/S^2 {dip:.3f} >= 0.1")
    return ok, detail, {"norm": worst_norm, "s_total": worst_total, "flat": worst_flat, "dip": dip}


def c12_self_validation(cache):
    _ensure_conservation_runs(cache)
    worst, worst_label = 0.0, ""
    for key in list(cache.runs):
        if key[2] != "exponential-midpoint":
            continue
        v = cache.convergence_of(key)
        if v >= worst:
            worst, worst_label = v, f"{key[0].label} S={key[0].model.spin} D={key[0].model.d}"
    protocol = single_resonance_protocol(_model(10, 0.1), 10, H_AC)
    mid = cache.run(protocol, RUN_T_MAX)
    rk4 = cache.run(protocol, RUN_T_MAX, "rk4")
    dev = compare_series(mid.series.sz, rk4.series.sz)
    ok = worst <= CONVERGENCE_TOL and dev <= 1e-6
    detail = (f"worst dt vs dt/2 <Sz> deviation {worst:.2e} <= 1e-6 ({worst_label}); "
              f"midpoint vs RK4 on single resonance {dev:.2e} <= 1e-6")
    return ok, detail, {"worst_convergence": worst, "rk4_dev": dev}


@dataclass(frozen=True)
class Criterion:
    number: int
    title: str
    quick: bool
    check: Callable


CRITERIA = (
    Criterion(1, "Rabi baseline", True, c1_rabi),
    Criterion(2, "single-resonance oscillation", True, c2_single_resonance),
    Criterion(3, "partial ladders", False, c3_partial_ladders),
    Criterion(4, "full-ladder reversal", True, c4_full_reversal),
    Criterion(5, "Hz invariance", True, c5_hz_invariance),
    Criterion(6, "compact-kernel identity", True, c6_kernel_identity),
    Criterion(7, "frame equivalence", False, c7_frame_equivalence),
    Criterion(8, "amplitude scaling", False, c8_amplitude_scaling),
    Criterion(9, "D independence", False, c9_d_independence),
    Criterion(10, "spin-size universality", False, c10_spin_universality),
    Criterion(11, "conservation", False, c11_conservation),
    Criterion(12, "numerical self-validation", False, c12_self_validation),
)


def run_criterion(criterion: Criterion, cache: RunCache) -> CriterionResult:
    start = time.perf_counter()
    try:
        passed, detail, values = criterion.check(cache)
    except (ValueError, RuntimeError) as exc:
        passed, detail, values = False, f"error: {exc}", {}
    return CriterionResult(criterion.number, criterion.title, bool(passed), detail, values,
                           time.perf_counter() - start)


def run_suite(quick: bool = False, only=None, cache: RunCache | None = None, report=print) -> list[CriterionResult]:
    cache = cache or RunCache()
    results = []
    for c in CRITERIA:
        if (quick and not c.quick) or (only and c.number not in only):
            continue
        res = run_criterion(c, cache)
        if report:
            report(res.line())
        results.append(res)
    return results
