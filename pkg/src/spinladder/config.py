"""Flat ``key=value`` run configuration and the glue that turns it into a run.

Example::

    twice_s=20
    d=0.1
    hz=0
    h_ac=0.005
    protocol=full-gqoab
    frame=lab
    t_max=3000

Blank lines and ``#`` comments are ignored.  Unknown keys are errors.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from .hamiltonian import FRAMES, StaticModel
from .integrator import METHODS, IntegratorConfig, Trajectory, evolve
from .protocols import (
    DriveProtocol,
    full_gqoab_protocol,
    ladder_protocol,
    rabi_protocol,
    single_resonance_protocol,
)
from .spin import SpinQuantumNumber, basis_state

PROTOCOLS = ("single", "ladder", "full-gqoab", "rabi-d0")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimulationConfig:
    twice_s: int
    h_ac: float
    protocol: str
    t_max: float
    d: float = 0.1
    hz: float = 0.0
    s_prime: float | None = None
    m_single: float | None = None
    frame: str = "lab"
    method: str = "exponential-midpoint"
    dt: float | None = None
    record_stride: int | None = None
    initial_m: float | None = None
    output_dir: str | None = None

    @property
    def spin(self) -> SpinQuantumNumber:
        return SpinQuantumNumber(self.twice_s)

    def validate(self) -> "SimulationConfig":
        """Check every field and fill derived defaults; returns the completed config."""
        try:
            spin = self.spin
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        for name in ("h_ac", "t_max", "d", "hz", "dt"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise ConfigError(f"{name} must be finite")
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"protocol must be one of {', '.join(PROTOCOLS)}; got {self.protocol!r}")
        if self.frame not in FRAMES:
            raise ConfigError(f"frame must be one of {', '.join(FRAMES)}; got {self.frame!r}")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {', '.join(METHODS)}; got {self.method!r}")
        if self.h_ac <= 0 or self.t_max <= 0:
            raise ConfigError("h_ac and t_max must be positive")
        if self.dt is not None and self.dt <= 0:
            raise ConfigError("dt must be positive")
        if self.record_stride is not None and self.record_stride < 1:
            raise ConfigError("record_stride must be >= 1")
        if self.d < 0:
            raise ConfigError("d must be >= 0")
        out = self
        if out.initial_m is None:
            out = replace(out, initial_m=spin.s)
        if out.protocol == "single" and out.m_single is None:
            out = replace(out, m_single=spin.s)
        if out.protocol == "ladder" and out.s_prime is None:
            raise ConfigError("protocol=ladder needs s_prime")
        if out.protocol == "rabi-d0" and out.d != 0:
            raise ConfigError("protocol=rabi-d0 needs d=0")
        if out.protocol == "full-gqoab" and out.d <= 0:
            raise ConfigError("protocol=full-gqoab needs d > 0")
        try:
            spin.index_of(out.initial_m)
            out.build_protocol()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return out

    def model(self) -> StaticModel:
        return StaticModel(self.spin, self.d, self.hz)

    def build_protocol(self) -> DriveProtocol:
        if self.protocol == "single":
            if self.frame != "lab":
                raise ConfigError("protocol=single is defined in the lab frame only")
            m = self.spin.s if self.m_single is None else self.m_single
            return single_resonance_protocol(self.model(), m, self.h_ac)
        if self.protocol == "ladder":
            return ladder_protocol(self.model(), self.s_prime, self.h_ac, self.frame)
        if self.protocol == "full-gqoab":
            return full_gqoab_protocol(self.model(), self.h_ac, self.frame)
        return rabi_protocol(self.spin, self.hz, self.h_ac, self.frame)

    def integrator_config(self) -> IntegratorConfig:
        return IntegratorConfig(self.t_max, self.dt, self.method, self.record_stride)

    def initial_state(self) -> np.ndarray:
        m = self.spin.s if self.initial_m is None else self.initial_m
        return basis_state(self.spin, m)


_INT_KEYS = {"twice_s", "record_stride"}
_STR_KEYS = {"protocol", "frame", "method", "output_dir"}
_KEYS = {f.name for f in fields(SimulationConfig)}
_REQUIRED = {"twice_s", "h_ac", "protocol", "t_max"}


def _parse_value(key: str, raw: str, lineno: int):
    if key in _STR_KEYS:
        return raw
    try:
        if key in _INT_KEYS:
            return int(raw)
        return float(raw)
    except ValueError:
        kind = "integer" if key in _INT_KEYS else "number"
        raise ConfigError(f"line {lineno}: {key}: malformed {kind} {raw!r}") from None


def parse_config(text: str) -> SimulationConfig:
    values: dict = {}
    lines: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key=value, got {line!r}")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        values[key] = _parse_value(key, raw, lineno)
        lines[key] = lineno
    missing = _REQUIRED - values.keys()
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(sorted(missing))}")
    try:
        return SimulationConfig(**values).validate()
    except ConfigError as exc:
        # point at the first offending key mentioned in the message, if any
        for key, lineno in sorted(lines.items(), key=lambda kv: kv[1]):
            if re.search(rf"\b{key}\b", str(exc)):
                raise ConfigError(f"line {lineno}: {exc}") from None
        raise


def load_config(path) -> SimulationConfig:
    return parse_config(Path(path).read_text())


def config_to_text(config: SimulationConfig) -> str:
    out = []
    for f in fields(SimulationConfig):
        v = getattr(config, f.name)
        if v is None:
            continue
        out.append(f"{f.name}={v!r}" if isinstance(v, float) else f"{f.name}={v}")
    return "\n".join(out) + "\n"


def config_to_dict(config: SimulationConfig) -> dict:
    return {f.name: getattr(config, f.name) for f in fields(SimulationConfig)}


def run_simulation(config: SimulationConfig) -> tuple[DriveProtocol, Trajectory]:
    config = config.validate()
    protocol = config.build_protocol()
    return protocol, evolve(protocol, config.initial_state(), config.integrator_config())
