import dataclasses
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from mlpsim.errors import ExhaustedSource, IndexOutOfRange, InvalidParams, NonFiniteInput
from mlpsim.moore import FactorReading, State, Symbol, build_mlp_machine, classify, run
from mlpsim.nanomachine import (
    AluOp, CycleLog, alu_exec, latch_inputs, reset, run_until_accept, tick,
)


def reading(**kw):
    base = dict(t1=0.0, t2=0.0, t3=0.0, t4=0.0, t5=0.0,
                th_cs=0.0, th_s=0.0, th_t=0.0, th_v=0.0, th_r=0.0)
    base.update(kw)
    return FactorReading(**base)


HIGH = reading(t1=5, t2=5, t3=5, t4=5, t5=5, th_cs=1, th_s=1, th_t=1, th_v=1, th_r=1)
LOW = reading(th_cs=2, th_s=2, th_t=2, th_v=2, th_r=2)


def test_reset():
    st0 = reset(16)
    assert st0.fsm_state == State.S and st0.cycle == 0
    assert st0.storage == (0.0,) * 16 and not st0.d_lines and not st0.wait
    assert st0.output_value is None
    with pytest.raises(InvalidParams):
        reset(8)
    assert len(reset(12).storage) == 12


def with_regs(*vals):
    regs = [0.0] * 16
    regs[:len(vals)] = vals
    return dataclasses.replace(reset(16), storage=tuple(regs))


@pytest.mark.parametrize("op,regs,expected", [
    (AluOp("add", 0, 2, 1), (2.0, 3.0), 5.0),
    (AluOp("sub", 0, 2, 1), (2.0, 3.0), -1.0),
    (AluOp("and", 0, 2, 1), (1.0, 0.0), 0.0),
    (AluOp("and", 0, 2, 1), (1.0, -4.0), 1.0),
    (AluOp("or", 0, 2, 1), (0.0, 0.5), 1.0),
    (AluOp("or", 0, 2, 1), (0.0, 0.0), 0.0),
    (AluOp("not", 0, 2), (0.0,), 1.0),
    (AluOp("not", 0, 2), (3.0,), 0.0),
])
def test_alu(op, regs, expected):
    before = with_regs(*regs)
    after = alu_exec(before, op)
    assert after.storage[2] == expected
    assert after.cycle == before.cycle
    assert [a for i, a in enumerate(after.storage) if i != 2] == \
           [b for i, b in enumerate(before.storage) if i != 2]


def test_alu_index_errors():
    with pytest.raises(IndexOutOfRange):
        alu_exec(reset(16), AluOp("add", 0, 16, 1))
    with pytest.raises(IndexOutOfRange):
        alu_exec(reset(16), AluOp("add", -1, 0, 1))


def test_latch_mirrors_registers():
    st1 = latch_inputs(reset(16), reading(t1=3.0, th_cs=2.0, t5=7.0, th_r=9.0))
    assert st1.storage[0] == 3.0 and st1.storage[5] == 2.0
    assert st1.storage[4] == 7.0 and st1.storage[9] == 9.0
    assert st1.input_latch.t1 == 3.0
    assert latch_inputs(reset(16), reading()).storage[:10] == (0.0,) * 10


def test_latch_rejects_nan():
    bad = reading()
    object.__setattr__(bad, "t3", float("nan"))  # bypass the constructor check
    with pytest.raises(NonFiniteInput):
        latch_inputs(reset(16), bad)


def test_tick_advance():
    st1 = tick(latch_inputs(reset(16), reading(t1=3, th_cs=2)))
    assert st1.fsm_state == State.MS and st1.d_lines == {Symbol.d2} and not st1.wait
    assert st1.cycle == 1


def test_tick_wait():
    st1 = tick(latch_inputs(reset(16), reading(t1=0, th_cs=2)))
    assert st1.fsm_state == State.S and st1.d_lines == {Symbol.d1} and st1.wait


def test_tick_into_rs_sets_output():
    st0 = dataclasses.replace(reset(16), fsm_state=State.MV)
    st1 = tick(latch_inputs(st0, reading(t4=5, th_v=1, t5=42.0)))
    assert st1.fsm_state == State.RS and st1.d_lines == {Symbol.d8}
    assert st1.output_value == 42.0


def test_output_hook_disabled_by_default_and_callable():
    calls = []
    st0 = reset(16)
    for _ in range(4):
        st0 = tick(latch_inputs(st0, HIGH), on_output=lambda s: calls.append(s.cycle) or s)
    assert st0.fsm_state == State.RS and calls == [4]


def test_run_until_accept_high():
    final, ok = run_until_accept(reset(16), itertools.repeat(HIGH), 10)
    assert ok and final.cycle == 4 and final.output_value == 5


def test_run_until_accept_zero():
    final, ok = run_until_accept(reset(16), itertools.repeat(LOW), 25)
    assert not ok and final.cycle == 25 and final.fsm_state == State.S


def test_run_until_accept_one_cycle():
    final, ok = run_until_accept(reset(16), itertools.repeat(HIGH), 1)
    assert not ok and final.fsm_state == State.MS


def test_run_until_accept_errors():
    with pytest.raises(ExhaustedSource):
        run_until_accept(reset(16), [HIGH], 5)
    with pytest.raises(InvalidParams):
        run_until_accept(reset(16), [HIGH], 0)


def test_shortest_path_exhaustive():
    m = build_mlp_machine()
    symbols = sorted(Symbol, key=str)
    for n in range(4):
        for seq in itertools.product(symbols, repeat=n):
            state = m.initial
            for sym in seq:
                state = m.transitions.get((state, sym))
                if state is None:
                    break
            assert state != State.RS


def test_cycle_log_rows():
    log = CycleLog()
    st0 = reset(16)
    for r in (LOW, HIGH):
        st0 = tick(latch_inputs(st0, r))
        log.record(st0)
    assert log.rows == [
        {"cycle": 1, "state": "S", "d_line": "d1", "wait": True, "output_value": None},
        {"cycle": 2, "state": "MS", "d_line": "d2", "wait": False, "output_value": None},
    ]


val = st.floats(-3, 3, allow_nan=False)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.builds(FactorReading, *([val] * 10)), min_size=1, max_size=30))
def test_cosimulation_with_engine(readings):
    m = build_mlp_machine()
    state = reset(16)
    states, symbols = [], []
    for r in readings:
        before = state.fsm_state
        symbols.append(classify(before, r))
        state = tick(latch_inputs(state, r))
        assert len(state.d_lines) == 1 and next(iter(state.d_lines)) == symbols[-1]
        assert state.wait == (before == state.fsm_state)
        states.append(state.fsm_state)
    assert states == [s.next_state for s in run(m, symbols)]
    assert state.cycle == len(readings)
