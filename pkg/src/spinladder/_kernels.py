"""Compiled inner loops for tridiagonal Schrödinger propagation.

The static part of every Hamiltonian here is diagonal in the Sz basis, and the
drive only couples neighbouring levels.  The loops work in the interaction
picture of the static part, where the Hamiltonian is purely off-diagonal::

    H_I[j, j+1](t) = c(t) * k[j] * exp(1j * nu[j] * t),   nu[j] = E[j] - E[j+1]

with c(t) the S+ coefficient of the drive and k the S+ matrix elements.
The static energies are quadratic in m, so nu is an arithmetic progression
nu[j] = nu0 + j * dnu and each step needs only two complex exponentials.
"""
from __future__ import annotations

import numba as nb
import numpy as np

TAYLOR_TOL2 = 1e-34
MAX_SUBSTEP_NORM = 0.5


@nb.njit(cache=True)
def _coupling(g, c, k, nu0, dnu, t):
    phase = c * complex(np.cos(nu0 * t), np.sin(nu0 * t))
    rot = complex(np.cos(dnu * t), np.sin(dnu * t))
    for j in range(k.size):
        g[j] = k[j] * phase
        phase *= rot


@nb.njit(cache=True)
def _apply_h(g, x, out):
    """out = H x for the Hermitian tridiagonal matrix with zero diagonal and superdiagonal g."""
    m = g.size
    out[0] = g[0] * x[1]
    for j in range(1, m):
        out[j] = g[j] * x[j + 1] + np.conj(g[j - 1]) * x[j - 1]
    out[m] = np.conj(g[m - 1]) * x[m - 1]


@nb.njit(cache=True)
def _expm_apply(g, psi, dt, acc, term, tmp):
    """psi <- exp(-i dt H) psi by a Taylor series run to machine precision."""
    n = psi.size
    bound = 0.0
    for j in range(n):
        r = 0.0
        if j + 1 < n:
            r += abs(g[j])
        if j > 0:
            r += abs(g[j - 1])
        bound = max(bound, r)
    nsub = max(1, int(np.ceil(bound * abs(dt) / MAX_SUBSTEP_NORM)))
    h = dt / nsub
    for _ in range(nsub):
        for j in range(n):
            acc[j] = psi[j]
            term[j] = psi[j]
        for p in range(1, 60):
            _apply_h(g, term, tmp)
            size = 0.0
            f = -1j * h / p
            for j in range(n):
                v = f * tmp[j]
                term[j] = v
                acc[j] += v
                size += v.real * v.real + v.imag * v.imag
            if size < TAYLOR_TOL2:
                break
        for j in range(n):
            psi[j] = acc[j]


@nb.njit(cache=True)
def midpoint_chunk(k, nu0, dnu, c_mid, t_mid, psi, dt, nsteps, stride, out):
    """Exponential midpoint steps; writes psi after every ``stride`` steps into ``out``.

    ``c_mid[s]`` is the drive coefficient at the step midpoint ``t_mid[s]``.
    Each step is unitary up to round-off, which is biased enough to drift the
    norm by ~1e-11 over 10^7 steps, so the norm is reset after every step.
    """
    n = psi.size
    g = np.empty(n - 1, np.complex128)
    acc = np.empty(n, np.complex128)
    term = np.empty(n, np.complex128)
    tmp = np.empty(n, np.complex128)
    target = 0.0
    for j in range(n):
        target += psi[j].real * psi[j].real + psi[j].imag * psi[j].imag
    row = 0
    for s in range(nsteps):
        _coupling(g, c_mid[s], k, nu0, dnu, t_mid[s])
        _expm_apply(g, psi, dt, acc, term, tmp)
        norm2 = 0.0
        for j in range(n):
            norm2 += psi[j].real * psi[j].real + psi[j].imag * psi[j].imag
        scale = np.sqrt(target / norm2)
        for j in range(n):
            psi[j] *= scale
        if (s + 1) % stride == 0:
            out[row, :] = psi
            row += 1
    return row


@nb.njit(cache=True)
def rk4_chunk(k, nu0, dnu, c_half, t_half, psi, dt, nsteps, stride, out, max_drift):
    """Classical RK4 steps with renormalisation.

    ``c_half`` samples the drive coefficient on the half-step grid ``t_half``.

    Returns (rows written, largest per-step norm drift).  Stops early, with
    rows = -1, once a step drifts by more than ``max_drift``.
    """
    n = psi.size
    g = np.empty(n - 1, np.complex128)
    k1 = np.empty(n, np.complex128)
    k2 = np.empty(n, np.complex128)
    k3 = np.empty(n, np.complex128)
    k4 = np.empty(n, np.complex128)
    y = np.empty(n, np.complex128)
    worst = 0.0
    row = 0
    for s in range(nsteps):
        i = 2 * s
        _coupling(g, c_half[i], k, nu0, dnu, t_half[i])
        _apply_h(g, psi, k1)
        for j in range(n):
            k1[j] *= -1j
            y[j] = psi[j] + 0.5 * dt * k1[j]
        _coupling(g, c_half[i + 1], k, nu0, dnu, t_half[i + 1])
        _apply_h(g, y, k2)
        for j in range(n):
            k2[j] *= -1j
            y[j] = psi[j] + 0.5 * dt * k2[j]
        _apply_h(g, y, k3)
        for j in range(n):
            k3[j] *= -1j
            y[j] = psi[j] + dt * k3[j]
        _coupling(g, c_half[i + 2], k, nu0, dnu, t_half[i + 2])
        _apply_h(g, y, k4)
        nrm = 0.0
        for j in range(n):
            k4[j] *= -1j
            psi[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            nrm += psi[j].real ** 2 + psi[j].imag ** 2
        drift = abs(nrm - 1.0)
        worst = max(worst, drift)
        if drift > max_drift:
            return -1, worst
        scale = 1.0 / np.sqrt(nrm)
        for j in range(n):
            psi[j] *= scale
        if (s + 1) % stride == 0:
            out[row, :] = psi
            row += 1
    return row, worst
