"""Discrete-time channel with additive afferent noise and single-tap feedback.

The end-to-end session couples the channel output to the stage pipeline and
the pathway Moore machine: each transmitted sample is split into the eleven
stage signals, aggregated, bridged onto the classifier's factor lines and
used to step the machine once per tick.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any, Literal

import numpy as np

from . import __version__
from .errors import EmptySeries, InvalidParams, NonFiniteInput
from .moore import FactorReading, State, build_mlp_machine, classify, step
from .pipeline import StageSamples, Thresholds, reception, stage_aggregates
from .trace import SessionTrace, TraceRow

GENERATOR_NAME = "numpy.random.PCG64"
NoiseKind = Literal["none", "gaussian", "uniform"]


@dataclass(frozen=True)
class Series:
    """Uniformly sampled real signal; sample ``i`` sits at time ``i * dt``."""

    dt: float
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not (math.isfinite(self.dt) and self.dt > 0):
            raise InvalidParams(f"dt must be > 0, got {self.dt!r}")
        vals = tuple(float(v) for v in self.values)
        if not all(math.isfinite(v) for v in vals):
            raise NonFiniteInput("series contains non-finite samples")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class NoiseModel:
    kind: NoiseKind = "none"
    mean: float = 0.0
    spread: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("none", "gaussian", "uniform"):
            raise InvalidParams(f"unknown noise kind {self.kind!r}")
        if not (math.isfinite(self.spread) and self.spread >= 0):
            raise InvalidParams("noise spread must be >= 0")
        if not math.isfinite(self.mean):
            raise InvalidParams("noise mean must be finite")
        if not 0 <= self.seed < 2**64:
            raise InvalidParams("seed must be a 64-bit unsigned integer")

    def generator(self) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(self.seed))


@dataclass(frozen=True)
class ChannelConfig:
    noise: NoiseModel = field(default_factory=NoiseModel)
    feedback_gain: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.feedback_gain) and abs(self.feedback_gain) < 1):
            raise InvalidParams("feedback_gain must satisfy |g| < 1")


def sample_noise(model: NoiseModel, rng: np.random.Generator) -> tuple[float, np.random.Generator]:
    """Draw one noise sample. ``kind="none"`` returns 0 without touching ``rng``."""
    if model.kind == "none":
        return 0.0, rng
    if model.kind == "gaussian":
        return model.mean + model.spread * float(rng.standard_normal()), rng
    return model.mean + float(rng.uniform(-model.spread, model.spread)), rng


def transmit(signal: Series, config: ChannelConfig,
             rng: np.random.Generator | None = None) -> Series:
    """y[0] = h[0] + m[0];  y[i] = h[i] + m[i] + g * y[i-1]."""
    if len(signal) == 0:
        raise EmptySeries("cannot transmit an empty series")
    if rng is None:
        rng = config.noise.generator()
    g = config.feedback_gain
    out: list[float] = []
    prev = 0.0
    for i, h in enumerate(signal.values):
        m, rng = sample_noise(config.noise, rng)
        y = h + m if i == 0 else h + m + g * prev
        out.append(y)
        prev = y
    return Series(signal.dt, tuple(out))


@dataclass(frozen=True)
class StageDerivation:
    """Weights splitting one transmitted sample ``x`` into the stage signals.

    Each stage signal is ``weight * x``; the two synapse signals are further
    scaled by ``synapse_attenuation``.
    """

    h_s: float = 1.0 / 3.0
    h_j: float = 1.0 / 3.0
    h_m: float = 1.0 / 3.0
    s_gf: float = 0.5
    s_cf: float = 0.5
    synapse_attenuation: float = 1.0
    a_bs: float = 1.0
    t_t: float = 0.0
    t_c: float = 0.0
    t_p: float = 0.0
    v_v: float = 1.0
    v_t: float = 0.0

    def __post_init__(self) -> None:
        for k, v in asdict(self).items():
            if not math.isfinite(v):
                raise InvalidParams(f"stage coefficient {k} must be finite")

    def derive(self, x: float) -> StageSamples:
        att = self.synapse_attenuation
        return StageSamples(
            h_s=self.h_s * x, h_j=self.h_j * x, h_m=self.h_m * x,
            s_gf=self.s_gf * x * att, s_cf=self.s_cf * x * att,
            a_bs=self.a_bs * x, t_t=self.t_t * x, t_c=self.t_c * x, t_p=self.t_p * x,
            v_v=self.v_v * x, v_t=self.v_t * x,
        )


def bridge_factors(h: float, s: float, m: float, v: float, r: float,
                   thresholds: Thresholds) -> FactorReading:
    """Place stage aggregates on the classifier's factor lines.

    The M and R gates compare against zero, so their thresholds are fixed at 0.
    """
    for x in (h, s, m, v, r):
        if not math.isfinite(x):
            raise NonFiniteInput(f"non-finite stage aggregate {x!r}")
    return FactorReading(t1=h, t2=s, t3=m, t4=v, t5=r,
                         th_cs=thresholds.h_th, th_s=thresholds.s_th, th_t=0.0,
                         th_v=thresholds.v_th, th_r=0.0)


def session_header(thresholds: Thresholds, config: ChannelConfig, derivation: StageDerivation,
                   dt: float, max_ticks: int, extra: dict[str, Any] | None = None) -> dict:
    header: dict[str, Any] = {
        "artifact": "mlpsim",
        "version": __version__,
        "generator": GENERATOR_NAME,
        "seed": config.noise.seed,
        "dt": dt,
        "max_ticks": max_ticks,
        "thresholds": asdict(thresholds),
        "channel": {
            "noise": config.noise.kind,
            "mean": config.noise.mean,
            "spread": config.noise.spread,
            "feedback_gain": config.feedback_gain,
        },
        "stages": asdict(derivation),
    }
    if extra:
        header.update(extra)
    return header


def simulate_end_to_end(stimulus: Series, thresholds: Thresholds, config: ChannelConfig,
                        max_ticks: int, derivation: StageDerivation | None = None,
                        header_extra: dict[str, Any] | None = None) -> SessionTrace:
    """Run one session: transmit, aggregate, classify and step once per tick."""
    if len(stimulus) == 0:
        raise EmptySeries("stimulus is empty")
    if max_ticks < 1:
        raise InvalidParams("max_ticks must be >= 1")
    derivation = derivation or StageDerivation()
    machine = build_mlp_machine()

    n = min(max_ticks, len(stimulus))
    head = Series(stimulus.dt, stimulus.values[:n])
    channel_out = transmit(head, config)

    rows: list[TraceRow] = []
    state = machine.initial
    reached = accepted = False
    for tick, x in enumerate(channel_out.values):
        h, s, m, v = stage_aggregates(derivation.derive(x))
        r, nonzero = reception(h, s, m, v)
        reading = bridge_factors(h, s, m, v, r, thresholds)
        symbol = classify(state, reading)
        res = step(machine, state, symbol)
        rows.append(TraceRow(tick=tick, h=h, s=s, m=m, v=v, r=r, symbol=symbol.value,
                             state_before=str(state), state_after=str(res.next_state),
                             emitted=str(res.emitted), wait=res.next_state == state))
        if res.next_state == State.RS:
            reached = True
            accepted = accepted or nonzero
        state = res.next_state

    header = session_header(thresholds, config, derivation, stimulus.dt, max_ticks, header_extra)
    return SessionTrace(header=header, rows=tuple(rows), reached_rs=reached, accepted=accepted)
