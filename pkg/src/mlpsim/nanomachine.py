"""Cycle-stepped emulator of the pathway nanomachine.

Units map onto :class:`NanomachineState` as follows: the input unit is the
``input_latch``; the storage unit is the register file plus the five ALU
operations; the processing unit classifies the latch and drives one d-line
and the wait line per clock; the output unit exposes ``output_value``.

Per tick the control unit runs a fixed microsequence: read latch, classify
against the current state, assert that d-line, step the Moore machine, set
wait when the state did not change, and on entering RS expose t5.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Iterator, Literal, Optional, Union

from .errors import ExhaustedSource, IndexOutOfRange, InvalidParams, NonFiniteInput
from .moore import FactorReading, State, Symbol, build_mlp_machine, classify, step

MIN_REGISTERS = 12
DEFAULT_REGISTERS = 16

_MACHINE = build_mlp_machine()

_ZERO_READING = FactorReading(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
_LATCH_ORDER = ("t1", "t2", "t3", "t4", "t5", "th_cs", "th_s", "th_t", "th_v", "th_r")


@dataclass(frozen=True)
class NanomachineState:
    cycle: int
    fsm_state: State
    storage: tuple[float, ...]
    input_latch: FactorReading = _ZERO_READING
    d_lines: frozenset[Symbol] = frozenset()
    wait: bool = False
    output_value: Optional[float] = None

    def register(self, index: int) -> float:
        if not 0 <= index < len(self.storage):
            raise IndexOutOfRange(f"register r{index} outside r0..r{len(self.storage) - 1}")
        return self.storage[index]


@dataclass(frozen=True)
class AluOp:
    op: Literal["add", "sub", "and", "or", "not"]
    src_a: int
    dst: int
    src_b: int = 0


# Output-unit feedback into storage. Disabled unless a hook is passed to tick().
OutputHook = Callable[[NanomachineState], NanomachineState]


def reset(register_count: int = DEFAULT_REGISTERS) -> NanomachineState:
    if register_count < MIN_REGISTERS:
        raise InvalidParams(f"need at least {MIN_REGISTERS} registers, got {register_count}")
    return NanomachineState(cycle=0, fsm_state=State.S, storage=(0.0,) * register_count)


def alu_exec(state: NanomachineState, op: AluOp) -> NanomachineState:
    """Execute one storage-unit operation. Does not advance the clock."""
    a = state.register(op.src_a)
    b = state.register(op.src_b) if op.op != "not" else 0.0
    state.register(op.dst)
    if op.op == "add":
        result = a + b
    elif op.op == "sub":
        result = a - b
    elif op.op == "and":
        result = float(a != 0 and b != 0)
    elif op.op == "or":
        result = float(a != 0 or b != 0)
    elif op.op == "not":
        result = float(a == 0)
    else:
        raise InvalidParams(f"unknown ALU op {op.op!r}")
    regs = list(state.storage)
    regs[op.dst] = result
    return replace(state, storage=tuple(regs))


def latch_inputs(state: NanomachineState, reading: FactorReading) -> NanomachineState:
    """Latch a reading and mirror it into r0..r9 (factors, then thresholds)."""
    values = [getattr(reading, k) for k in _LATCH_ORDER]
    if not all(math.isfinite(v) for v in values):
        raise NonFiniteInput("reading contains non-finite values")
    regs = list(state.storage)
    regs[:len(values)] = values
    return replace(state, input_latch=reading, storage=tuple(regs))


def tick(state: NanomachineState, on_output: OutputHook | None = None) -> NanomachineState:
    symbol = classify(state.fsm_state, state.input_latch)
    res = step(_MACHINE, state.fsm_state, symbol)
    nxt = State(res.next_state)
    entered_rs = nxt == State.RS and state.fsm_state != State.RS
    new = replace(
        state,
        cycle=state.cycle + 1,
        fsm_state=nxt,
        d_lines=frozenset({symbol}),
        wait=nxt == state.fsm_state,
        output_value=state.input_latch.t5 if entered_rs else state.output_value,
    )
    if entered_rs and on_output is not None:
        new = on_output(new)
    return new


ReadingSource = Union[Iterable[FactorReading], Callable[[int], FactorReading]]


def _readings(source: ReadingSource) -> Iterator[FactorReading]:
    if callable(source):
        i = 0
        while True:
            yield source(i)
            i += 1
    else:
        yield from source


def run_until_accept(state: NanomachineState, readings: ReadingSource,
                     max_cycles: int) -> tuple[NanomachineState, bool]:
    """Latch and tick until RS holds a non-zero output, or ``max_cycles`` elapse."""
    if max_cycles < 1:
        raise InvalidParams("max_cycles must be >= 1")
    source = _readings(readings)
    for _ in range(max_cycles):
        try:
            reading = next(source)
        except StopIteration:
            raise ExhaustedSource(f"reading source exhausted at cycle {state.cycle}") from None
        state = tick(latch_inputs(state, reading))
        if state.fsm_state == State.RS and state.output_value not in (None, 0.0):
            return state, True
    return state, False


@dataclass
class CycleLog:
    """Collects one snapshot row per cycle for trace output."""

    rows: list[dict] = field(default_factory=list)

    def record(self, state: NanomachineState) -> None:
        (line,) = state.d_lines or (None,)
        self.rows.append({
            "cycle": state.cycle,
            "state": str(state.fsm_state),
            "d_line": None if line is None else str(line),
            "wait": state.wait,
            "output_value": state.output_value,
        })
