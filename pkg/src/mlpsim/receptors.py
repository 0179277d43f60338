"""Somatosensory receptor catalog and stimulus synthesis."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .channel import Series
from .errors import FrequencyOutOfBand, InvalidParams

Adaptation = Literal["rapid", "slow", "mixed", "depends"]
ADAPTATIONS: tuple[str, ...] = ("rapid", "slow", "mixed", "depends")

MIXED_FLOOR = 0.2


@dataclass(frozen=True)
class ReceptorSpec:
    name: str
    label: str
    structure: str
    sensation: str
    signals: str
    adaptation: Adaptation
    band_hz: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.adaptation not in ADAPTATIONS:
            raise InvalidParams(f"{self.name}: unknown adaptation {self.adaptation!r}")
        if self.band_hz is not None:
            low, high = self.band_hz
            if not 0 < low < high:
                raise InvalidParams(f"{self.name}: band must satisfy 0 < low < high")

    def band_text(self) -> str:
        if self.band_hz is None:
            return ""
        return f"{self.band_hz[0]:g}-{self.band_hz[1]:g} Hz"


_SPINDLE = ("Encapsulated annulospiral and flower spray endings", "Muscle stretch",
            "Muscle length, velocity", "mixed")

_CATALOG: tuple[ReceptorSpec, ...] = (
    ReceptorSpec("meissner_corpuscle", "Meissner corpuscle", "Encapsulated, layered",
                 "Touch: Flutter, Movement", "Frequency/Velocity, Direction", "rapid",
                 (20.0, 50.0)),
    ReceptorSpec("pacinian_corpuscle", "Pacinian corpuscle", "Encapsulated, layered",
                 "Touch: Vibration", "Frequency: 100-300 Hz", "rapid", (100.0, 300.0)),
    ReceptorSpec("ruffini_corpuscle", "Ruffini corpuscle", "Encapsulated collagen",
                 "Touch: Skin Stretch", "Direction, Force", "slow"),
    ReceptorSpec("hair_follicle", "Hair follicle", "Unencapsulated",
                 "Touch: Movement", "Direction, Velocity", "rapid"),
    ReceptorSpec("merkel_complex", "Merkel complex", "Specialized epithelial cell",
                 "Touch, Pressure, Form", "Location, magnitude", "slow"),
    ReceptorSpec("free_nerve_ending", "Free Nerve Ending", "Unencapsulated",
                 "Pain, Touch, or Temperature", "Tissue damage, Contact, Temperature change",
                 "depends"),
    ReceptorSpec("muscle_spindle_1", "Muscle Spindle", *_SPINDLE),
    ReceptorSpec("golgi_tendon_organ", "Muscle: Golgi Tendon Organ", "Encapsulated collagen",
                 "Muscle tension", "Muscle contraction", "slow"),
    ReceptorSpec("joint_pacinian", "Joint: Pacinian", "Encapsulated, layered",
                 "Joint Movement", "Direction, velocity", "rapid"),
    ReceptorSpec("joint_ruffini", "Joint: Ruffini", "Encapsulated collagen",
                 "Joint pressure", "Pressure, Angle", "slow"),
    ReceptorSpec("joint_golgi_organ", "Joint: Golgi Organ", "Encapsulated collagen",
                 "Joint torque", "Twisting force", "slow"),
    ReceptorSpec("muscle_spindle_2", "Muscle Spindle", *_SPINDLE),
)


def catalog() -> list[ReceptorSpec]:
    """All twelve receptor rows in table order (the spindle row appears twice)."""
    return list(_CATALOG)


def receptor(name: str) -> ReceptorSpec:
    for spec in _CATALOG:
        if spec.name == name:
            return spec
    raise KeyError(f"unknown receptor {name!r}")


@dataclass(frozen=True)
class StimulusParams:
    amplitude: float = 1.0
    duration_s: float = 0.01
    frequency_hz: float | None = None
    adaptation_tau_s: float = 0.005

    def __post_init__(self) -> None:
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise InvalidParams("amplitude must be a finite value >= 0")
        if not (math.isfinite(self.duration_s) and self.duration_s > 0):
            raise InvalidParams("duration_s must be > 0")
        if not (math.isfinite(self.adaptation_tau_s) and self.adaptation_tau_s > 0):
            raise InvalidParams("adaptation_tau_s must be > 0")
        if self.frequency_hz is not None and not (
                math.isfinite(self.frequency_hz) and self.frequency_hz > 0):
            raise InvalidParams("frequency_hz must be > 0")


def adaptation_envelope(kind: str, t, tau_s: float):
    """Response envelope of an adaptation class at time ``t`` (scalar or array).

    slow and depends hold at 1; rapid decays as exp(-t/tau); mixed decays the
    same way down to a sustained floor of 0.2.
    """
    if not tau_s > 0:
        raise InvalidParams("tau_s must be > 0")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or not np.all(np.isfinite(t_arr)):
        raise InvalidParams("t must be finite and >= 0")
    if kind in ("slow", "depends"):
        env = np.ones_like(t_arr)
    elif kind == "rapid":
        env = np.exp(-t_arr / tau_s)
    elif kind == "mixed":
        env = np.maximum(np.exp(-t_arr / tau_s), MIXED_FLOOR)
    else:
        raise InvalidParams(f"unknown adaptation class {kind!r}")
    return float(env) if env.ndim == 0 else env


def sample_count(duration_s: float, dt: float) -> int:
    ratio = duration_s / dt
    nearest = round(ratio)
    # 0.3/0.1 = 2.9999999999999996 must still give 3 samples.
    if abs(ratio - nearest) <= 1e-9 * max(1.0, abs(ratio)):
        return int(nearest)
    return math.ceil(ratio)


def synthesize(spec: ReceptorSpec, params: StimulusParams, dt: float) -> Series:
    """Sample the stimulus a receptor produces at spacing ``dt``."""
    if not (math.isfinite(dt) and dt > 0):
        raise InvalidParams("dt must be > 0")
    n = sample_count(params.duration_s, dt)
    t = np.arange(n, dtype=float) * dt
    env = adaptation_envelope(spec.adaptation, t, params.adaptation_tau_s)
    if spec.band_hz is not None:
        f = params.frequency_hz
        if f is None:
            raise InvalidParams(f"{spec.name} needs frequency_hz in {spec.band_text()}")
        low, high = spec.band_hz
        if not low <= f <= high:
            raise FrequencyOutOfBand(spec.name, f, spec.band_hz)
        values = params.amplitude * np.sin(2.0 * np.pi * f * t) * env
    else:
        values = params.amplitude * env
    return Series(dt, tuple(float(x) for x in values))
