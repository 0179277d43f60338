"""Discrete-time simulator of the medial lemniscal touch/proprioception pathway."""

__version__ = "0.1.0"

from .moore import (  # noqa: E402
    EPSILON, FactorReading, MooreMachine, Output, State, StepResult, Symbol,
    build_mlp_machine, classify, run, step, validate,
)
from .pipeline import (  # noqa: E402
    PipelineResult, StageSamples, Thresholds, cumulative_reception, medulla_synapse,
    reception, run_pipeline, secondary_afferent, vpl_potential,
)
from .channel import (  # noqa: E402
    ChannelConfig, NoiseModel, Series, StageDerivation, bridge_factors, sample_noise,
    simulate_end_to_end, transmit,
)
from .receptors import (  # noqa: E402
    ReceptorSpec, StimulusParams, adaptation_envelope, catalog, receptor, synthesize,
)
from .trace import SessionTrace, TraceRow, read_trace, write_trace  # noqa: E402
