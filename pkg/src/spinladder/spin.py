"""Spin-S operator algebra in the Sz eigenbasis.

Basis ordering is m = S, S-1, ..., -S, so index 0 is the fully polarised
state |m=S> and index 2S is |m=-S>.  All matrices are dense complex arrays.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np

HERMITIAN_ATOL = 1e-12


@dataclass(frozen=True)
class SpinQuantumNumber:
    """Spin length stored as the integer ``twice_s = 2S``."""

    twice_s: int

    def __post_init__(self):
        if int(self.twice_s) != self.twice_s or self.twice_s < 1:
            raise ValueError(f"twice_s must be a positive integer, got {self.twice_s!r}")
        object.__setattr__(self, "twice_s", int(self.twice_s))

    @classmethod
    def from_value(cls, s) -> "SpinQuantumNumber":
        two = Fraction(s) * 2
        if two.denominator != 1:
            raise ValueError(f"S must be an integer or half-integer, got {s!r}")
        return cls(int(two))

    @property
    def s(self) -> float:
        return self.twice_s / 2

    @property
    def dim(self) -> int:
        return self.twice_s + 1

    @property
    def is_half_integer(self) -> bool:
        return self.twice_s % 2 == 1

    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers in basis order, S down to -S."""
        return (self.twice_s - 2 * np.arange(self.dim)) / 2

    def index_of(self, m) -> int:
        """Basis index of ``m``; raises if ``m`` is not on the ladder."""
        two_m = Fraction(m) * 2
        if two_m.denominator != 1:
            raise ValueError(f"m={m!r} is not a half-integer")
        two_m = int(two_m)
        if abs(two_m) > self.twice_s or (self.twice_s - two_m) % 2:
            raise ValueError(f"m={m!r} is not on the ladder of S={self}")
        return (self.twice_s - two_m) // 2

    def __str__(self):
        return str(self.twice_s // 2) if self.twice_s % 2 == 0 else f"{self.twice_s}/2"


def _as_spin(s) -> SpinQuantumNumber:
    return s if isinstance(s, SpinQuantumNumber) else SpinQuantumNumber.from_value(s)


def ladder_elements(s: SpinQuantumNumber) -> np.ndarray:
    """<m|S+|m-1> for m = S, ..., -S+1 (the superdiagonal of S+)."""
    s = _as_spin(s)
    m = s.m_values()[:-1]
    return np.sqrt(s.s * (s.s + 1) - m * (m - 1))


@dataclass(frozen=True, eq=False)
class SpinOperatorSet:
    spin: SpinQuantumNumber
    sx: np.ndarray
    sy: np.ndarray
    sz: np.ndarray
    s_plus: np.ndarray
    s_minus: np.ndarray

    @cached_property
    def casimir(self) -> np.ndarray:
        return self.sx @ self.sx + self.sy @ self.sy + self.sz @ self.sz

    @property
    def dim(self) -> int:
        return self.spin.dim


def make_operators(s) -> SpinOperatorSet:
    """Build Sx, Sy, Sz, S+ and S- for spin ``s`` (a SpinQuantumNumber or a number)."""
    s = _as_spin(s)
    s_plus = np.diag(ladder_elements(s), 1).astype(complex)
    s_minus = s_plus.conj().T
    sz = np.diag(s.m_values()).astype(complex)
    sx = (s_plus + s_minus) / 2
    sy = (s_plus - s_minus) / 2j
    for a in (s_plus, s_minus, sx, sy, sz):
        a.flags.writeable = False
    return SpinOperatorSet(s, sx, sy, sz, s_plus, s_minus)


def basis_state(s, m) -> np.ndarray:
    s = _as_spin(s)
    psi = np.zeros(s.dim, dtype=complex)
    psi[s.index_of(m)] = 1.0
    return psi


def expectation(op: np.ndarray, psi: np.ndarray) -> float:
    """Real expectation value <psi|op|psi> of a Hermitian operator."""
    op = np.asarray(op)
    psi = np.asarray(psi)
    if op.shape != (psi.size, psi.size):
        raise ValueError(f"operator shape {op.shape} does not match state of size {psi.size}")
    value = np.vdot(psi, op @ psi)
    if abs(value.imag) > HERMITIAN_ATOL * max(1.0, abs(value.real)):
        raise ValueError(f"expectation has imaginary part {value.imag:.3e}; operator not Hermitian?")
    return float(value.real)


def check_hermitian(h: np.ndarray, atol: float = HERMITIAN_ATOL) -> None:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    err = np.max(np.abs(h - h.conj().T), initial=0.0)
    if err > atol * max(1.0, np.max(np.abs(h), initial=0.0)):
        raise ValueError(f"matrix is not Hermitian (max asymmetry {err:.3e})")


def hermitian_eigendecomposition(h: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return ascending eigenvalues and the unitary eigenvector matrix of ``h``."""
    check_hermitian(h)
    lam, v = np.linalg.eigh(h)
    return lam, v
