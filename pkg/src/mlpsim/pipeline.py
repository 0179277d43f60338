"""Threshold-gated signal pipeline for the lemniscal pathway.

Four stage aggregates are formed from raw per-tick signals::

    H = h_s + h_j + h_m                  cumulative reception at the receptors
    S = s_gf + s_cf                      synapse in the gracile/cuneate nuclei
    M = a_bs + t_t + t_c + t_p           second-order afferent processing
    V = v_v + v_t                        ventral posterolateral potential

and gated in order H > h_th, S > s_th, M > 0, V > v_th. A pass through all
four gates ends the loop and the signal is accepted when R = H+S+M+V is
non-zero. A failed gate abandons the pass and the loop retries on fresh
samples, up to ``max_iterations`` passes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from typing import Callable, Iterable, Iterator, Union

from .errors import ExhaustedSource, InvalidParams, NonFiniteInput

DEFAULT_MAX_ITERATIONS = 10_000

GATES = ("h", "s", "m", "v")


def _check_finite(*values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise NonFiniteInput(f"non-finite operand {v!r}")


@dataclass(frozen=True, slots=True)
class StageSamples:
    h_s: float = 0.0
    h_j: float = 0.0
    h_m: float = 0.0
    s_gf: float = 0.0
    s_cf: float = 0.0
    a_bs: float = 0.0
    t_t: float = 0.0
    t_c: float = 0.0
    t_p: float = 0.0
    v_v: float = 0.0
    v_t: float = 0.0

    def check(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v):
                raise NonFiniteInput(f"StageSamples.{f.name} is not finite: {v!r}")


@dataclass(frozen=True)
class Thresholds:
    h_th: float = 0.0
    s_th: float = 0.0
    v_th: float = 0.0

    def __post_init__(self) -> None:
        _check_finite(self.h_th, self.s_th, self.v_th)


@dataclass(frozen=True, slots=True)
class GateRecord:
    """Gate verdicts for one loop pass; ``None`` means the gate was never reached."""

    h: bool | None = None
    s: bool | None = None
    m: bool | None = None
    v: bool | None = None

    @property
    def passed(self) -> bool:
        return bool(self.h and self.s and self.m and self.v)

    def first_failure(self) -> str | None:
        for g in GATES:
            if getattr(self, g) is False:
                return g
        return None


@dataclass(frozen=True)
class PipelineResult:
    h: float
    s: float
    m: float
    v: float
    r: float
    accepted: bool
    iterations: int
    gate_trace: tuple[GateRecord, ...] = field(default=())
    stage_evaluations: int = 0


def cumulative_reception(samples: StageSamples) -> float:
    _check_finite(samples.h_s, samples.h_j, samples.h_m)
    return samples.h_s + samples.h_j + samples.h_m


def medulla_synapse(samples: StageSamples) -> float:
    _check_finite(samples.s_gf, samples.s_cf)
    return samples.s_gf + samples.s_cf


def secondary_afferent(samples: StageSamples) -> float:
    _check_finite(samples.a_bs, samples.t_t, samples.t_c, samples.t_p)
    return samples.a_bs + samples.t_t + samples.t_c + samples.t_p


def vpl_potential(samples: StageSamples) -> float:
    _check_finite(samples.v_v, samples.v_t)
    return samples.v_v + samples.v_t


def reception(h: float, s: float, m: float, v: float) -> tuple[float, bool]:
    """Return ``(R, accepted)``; acceptance is an exact ``R != 0`` test."""
    _check_finite(h, s, m, v)
    r = h + s + m + v
    return r, r != 0.0


def stage_aggregates(samples: StageSamples) -> tuple[float, float, float, float]:
    return (cumulative_reception(samples), medulla_synapse(samples),
            secondary_afferent(samples), vpl_potential(samples))


def evaluate_gates(h: float, s: float, m: float, v: float, thresholds: Thresholds) -> GateRecord:
    """Evaluate gates in order, stopping at the first failure."""
    checks = (h > thresholds.h_th, s > thresholds.s_th, m > 0.0, v > thresholds.v_th)
    verdicts: dict[str, bool] = {}
    for name, ok in zip(GATES, checks):
        verdicts[name] = ok
        if not ok:
            break
    return GateRecord(**verdicts)


SampleSource = Union[Iterable[StageSamples], Callable[[int], StageSamples]]


def _iter_source(source: SampleSource) -> Iterator[StageSamples]:
    if callable(source):
        i = 0
        while True:
            yield source(i)
            i += 1
    else:
        yield from source


def run_pipeline(source: SampleSource, thresholds: Thresholds,
                 max_iterations: int = DEFAULT_MAX_ITERATIONS) -> PipelineResult:
    """Run the gated loop until every gate passes or ``max_iterations`` runs out.

    ``source`` is either an iterable of :class:`StageSamples` (one per pass)
    or a callable taking the zero-based pass index.
    """
    if max_iterations < 1:
        raise InvalidParams(f"max_iterations must be >= 1, got {max_iterations}")
    samples_it = _iter_source(source)
    trace: list[GateRecord] = []
    evaluations = 0
    h = s = m = v = 0.0
    for _ in range(max_iterations):
        try:
            samples = next(samples_it)
        except StopIteration:
            raise ExhaustedSource(f"sample source exhausted after {len(trace)} passes") from None
        samples.check()
        h, s, m, v = stage_aggregates(samples)
        evaluations += 4
        record = evaluate_gates(h, s, m, v, thresholds)
        trace.append(record)
        if record.passed:
            r, accepted = reception(h, s, m, v)
            return PipelineResult(h, s, m, v, r, accepted, len(trace), tuple(trace), evaluations)
    r = h + s + m + v
    return PipelineResult(h, s, m, v, r, False, max_iterations, tuple(trace), evaluations)
