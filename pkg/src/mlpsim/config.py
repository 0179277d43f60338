"""Strict JSON configuration for simulation runs.

Layout (every key optional; defaults shown)::

    {
      "thresholds": {"h_th": 0.0, "s_th": 0.0, "v_th": 0.0},
      "channel":    {"noise": "none", "mean": 0.0, "spread": 0.0, "feedback_gain": 0.0},
      "stimulus":   {"receptor": "merkel_complex", "amplitude": 1.0, "frequency_hz": null,
                     "duration_s": 0.01, "adaptation_tau_s": 0.005},
      "stages":     {"h_s": 0.333.., "h_j": 0.333.., "h_m": 0.333.., "s_gf": 0.5, "s_cf": 0.5,
                     "synapse_attenuation": 1.0, "a_bs": 1.0, "t_t": 0.0, "t_c": 0.0,
                     "t_p": 0.0, "v_v": 1.0, "v_t": 0.0},
      "dt": 0.001,
      "max_ticks": 10000,
      "seed": 0
    }

Unknown keys are rejected rather than ignored.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any

from .channel import ChannelConfig, NoiseModel, Series, StageDerivation
from .errors import ConfigParseError, ConfigValidationError, InvalidParams
from .pipeline import Thresholds
from .receptors import StimulusParams, receptor, synthesize

DEFAULT_DT = 0.001
DEFAULT_MAX_TICKS = 10_000


@dataclass(frozen=True)
class StimulusConfig:
    receptor: str = "merkel_complex"
    amplitude: float = 1.0
    frequency_hz: float | None = None
    duration_s: float = 0.01
    adaptation_tau_s: float = 0.005

    def params(self) -> StimulusParams:
        return StimulusParams(amplitude=self.amplitude, duration_s=self.duration_s,
                              frequency_hz=self.frequency_hz,
                              adaptation_tau_s=self.adaptation_tau_s)


@dataclass(frozen=True)
class SimConfig:
    thresholds: Thresholds = field(default_factory=Thresholds)
    channel: ChannelConfig = field(default_factory=ChannelConfig)
    stimulus: StimulusConfig = field(default_factory=StimulusConfig)
    stages: StageDerivation = field(default_factory=StageDerivation)
    dt: float = DEFAULT_DT
    max_ticks: int = DEFAULT_MAX_TICKS
    seed: int = 0

    def with_overrides(self, seed: int | None = None, max_ticks: int | None = None) -> SimConfig:
        cfg = self
        if seed is not None:
            _check_seed("seed", seed)
            noise = replace(cfg.channel.noise, seed=seed)
            cfg = replace(cfg, seed=seed, channel=replace(cfg.channel, noise=noise))
        if max_ticks is not None:
            _check_count("max_ticks", max_ticks)
            cfg = replace(cfg, max_ticks=max_ticks)
        return cfg

    def stimulus_series(self) -> Series:
        return synthesize(receptor(self.stimulus.receptor), self.stimulus.params(), self.dt)

    def to_dict(self) -> dict[str, Any]:
        return {
            "thresholds": asdict(self.thresholds),
            "channel": {"noise": self.channel.noise.kind, "mean": self.channel.noise.mean,
                        "spread": self.channel.noise.spread,
                        "feedback_gain": self.channel.feedback_gain},
            "stimulus": asdict(self.stimulus),
            "stages": asdict(self.stages),
            "dt": self.dt,
            "max_ticks": self.max_ticks,
            "seed": self.seed,
        }


_SECTIONS = {
    "thresholds": tuple(f.name for f in fields(Thresholds)),
    "channel": ("noise", "mean", "spread", "feedback_gain"),
    "stimulus": tuple(f.name for f in fields(StimulusConfig)),
    "stages": tuple(f.name for f in fields(StageDerivation)),
}
_SCALARS = ("dt", "max_ticks", "seed")


def _locate(text: str, key: str) -> tuple[int | None, int | None]:
    needle = json.dumps(key)
    pos = text.find(needle)
    if pos < 0:
        return None, None
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _real(key: str, value: Any) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigValidationError(key, "a number")
    value = float(value)
    if not math.isfinite(value):
        raise ConfigValidationError(key, "a finite number")
    return value


def _check_count(key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 1:
        raise ConfigValidationError(key, "an integer >= 1")
    return value


def _check_seed(key: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < 2**64:
        raise ConfigValidationError(key, "an integer in [0, 2^64)")
    return value


def parse_config(text: str) -> SimConfig:
    """Parse and validate a configuration document."""
    if not text.strip():
        doc: Any = {}
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(doc, dict):
        raise ConfigParseError("top level must be an object", 1, 1)

    for key, value in doc.items():
        if key in _SECTIONS:
            if not isinstance(value, dict):
                raise ConfigParseError(f"section {key!r} must be an object", *_locate(text, key),
                                       key=key)
            for sub in value:
                if sub not in _SECTIONS[key]:
                    raise ConfigParseError(f"unknown key {key}.{sub!r}", *_locate(text, sub),
                                           key=sub)
        elif key not in _SCALARS:
            raise ConfigParseError(f"unknown key {key!r}", *_locate(text, key), key=key)

    th = doc.get("thresholds", {})
    thresholds = Thresholds(**{k: _real(k, v) for k, v in th.items()})

    ch = doc.get("channel", {})
    kind = ch.get("noise", "none")
    if kind not in ("none", "gaussian", "uniform"):
        raise ConfigValidationError("noise", "one of none|gaussian|uniform")
    mean = _real("mean", ch.get("mean", 0.0))
    spread = _real("spread", ch.get("spread", 0.0))
    if spread < 0:
        raise ConfigValidationError("spread", "spread >= 0")
    gain = _real("feedback_gain", ch.get("feedback_gain", 0.0))
    if not abs(gain) < 1:
        raise ConfigValidationError("feedback_gain", "|g| < 1")

    dt = _real("dt", doc.get("dt", DEFAULT_DT))
    if dt <= 0:
        raise ConfigValidationError("dt", "dt > 0")
    max_ticks = _check_count("max_ticks", doc.get("max_ticks", DEFAULT_MAX_TICKS))
    seed = _check_seed("seed", doc.get("seed", 0))

    st = doc.get("stimulus", {})
    stim_kwargs: dict[str, Any] = {}
    for k, v in st.items():
        if k == "receptor":
            if not isinstance(v, str):
                raise ConfigValidationError(k, "a receptor name")
            stim_kwargs[k] = v
        elif k == "frequency_hz" and v is None:
            stim_kwargs[k] = None
        else:
            stim_kwargs[k] = _real(k, v)
    stimulus = StimulusConfig(**stim_kwargs)
    try:
        spec = receptor(stimulus.receptor)
    except KeyError:
        raise ConfigValidationError("receptor", "a catalog receptor name") from None
    try:
        params = stimulus.params()
    except InvalidParams as exc:
        raise ConfigValidationError("stimulus", str(exc)) from None
    if spec.band_hz is not None:
        low, high = spec.band_hz
        if params.frequency_hz is None or not low <= params.frequency_hz <= high:
            raise ConfigValidationError("frequency_hz", f"{low:g} <= f <= {high:g} for {spec.name}")

    stages = StageDerivation(**{k: _real(k, v) for k, v in doc.get("stages", {}).items()})

    channel = ChannelConfig(NoiseModel(kind, mean, spread, seed), gain)
    return SimConfig(thresholds=thresholds, channel=channel, stimulus=stimulus,
                     stages=stages, dt=dt, max_ticks=max_ticks, seed=seed)


def load_config(path) -> SimConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
