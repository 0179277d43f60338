"""Moore machine engine and the five-state lemniscal pathway machine.

The engine is generic over hashable identifiers. The built-in pathway
machine uses the closed enumerations :class:`State`, :class:`Symbol` and
:class:`Output`; each member compares and hashes equal to its string value,
so a machine loaded from a text file interoperates with the built-in one.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import MachineFormatError, NonFiniteInput, UndefinedTransition, UnknownIdentifier

__all__ = [
    "State", "Symbol", "Output", "EPSILON", "STATE_ORDER",
    "MooreMachine", "StepResult", "FactorReading",
    "build_mlp_machine", "step", "run", "classify", "validate", "is_accepting",
    "Diagnostic", "UnknownInitial", "UnknownSource", "UnknownSymbol", "DanglingTarget",
    "OutputNotTotal", "UnknownOutput", "Unreachable",
    "loads_machine", "dumps_machine", "load_machine",
]


class _Ident(str, Enum):
    # Hash like the plain string so "S" and State.S are interchangeable keys.
    __hash__ = str.__hash__

    def __str__(self) -> str:
        return self.value


class State(_Ident):
    S = "S"
    MS = "MS"
    MT = "MT"
    MV = "MV"
    RS = "RS"


class Symbol(_Ident):
    d1 = "d1"
    d2 = "d2"
    d3 = "d3"
    d4 = "d4"
    d5 = "d5"
    d6 = "d6"
    d7 = "d7"
    d8 = "d8"
    d9 = "d9"
    d10 = "d10"


class Output(_Ident):
    O1 = "O1"
    O2 = "O2"
    O3 = "O3"
    EPSILON = "ε"


EPSILON = Output.EPSILON

# Progress order used by the monotonicity property.
STATE_ORDER: dict[State, int] = {s: i for i, s in enumerate(State)}


@dataclass(frozen=True)
class MooreMachine:
    """The six-tuple (Q, Σ, Λ, δ, τ, q0) plus an optional set of final states.

    Construction does not check consistency; call :func:`validate` for that.
    """

    states: frozenset
    input_alphabet: frozenset
    output_alphabet: frozenset
    transitions: Mapping[tuple[Hashable, Hashable], Hashable]
    outputs: Mapping[Hashable, Hashable]
    initial: Hashable
    final: frozenset = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "states", frozenset(self.states))
        object.__setattr__(self, "input_alphabet", frozenset(self.input_alphabet))
        object.__setattr__(self, "output_alphabet", frozenset(self.output_alphabet))
        object.__setattr__(self, "final", frozenset(self.final))
        object.__setattr__(self, "transitions", MappingProxyType(dict(self.transitions)))
        object.__setattr__(self, "outputs", MappingProxyType(dict(self.outputs)))

    def symbols_at(self, state: Hashable) -> frozenset:
        return frozenset(sym for (src, sym) in self.transitions if src == state)


@dataclass(frozen=True, slots=True)
class StepResult:
    next_state: Hashable
    emitted: Hashable


@dataclass(frozen=True, slots=True)
class FactorReading:
    """Signal factors t1..t5 and their thresholds, as fed to the classifier."""

    t1: float
    t2: float
    t3: float
    t4: float
    t5: float
    th_cs: float
    th_s: float
    th_t: float
    th_v: float
    th_r: float

    def __post_init__(self) -> None:
        for name in ("t1", "t2", "t3", "t4", "t5", "th_cs", "th_s", "th_t", "th_v", "th_r"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise NonFiniteInput(f"FactorReading.{name} is not finite: {value!r}")


def build_mlp_machine() -> MooreMachine:
    S, MS, MT, MV, RS = State
    d = Symbol
    transitions = {
        (S, d.d1): S,
        (S, d.d2): MS,
        (MS, d.d3): MS,
        (MS, d.d4): MT,
        (MT, d.d5): MT,
        (MT, d.d6): MV,
        (MV, d.d7): MV,
        (MV, d.d8): RS,
        (RS, d.d9): RS,
        # Not in the published table: sustained reception above threshold.
        (RS, d.d10): RS,
    }
    outputs = {S: EPSILON, MS: Output.O1, MT: Output.O2, MV: EPSILON, RS: Output.O3}
    return MooreMachine(
        states=frozenset(State),
        input_alphabet=frozenset(Symbol),
        output_alphabet=frozenset(Output),
        transitions=transitions,
        outputs=outputs,
        initial=S,
        final=frozenset({RS}),
    )


def step(machine: MooreMachine, state: Hashable, symbol: Hashable) -> StepResult:
    """Apply δ once. The emitted output is τ of the state entered."""
    if state not in machine.states:
        raise UnknownIdentifier(f"unknown state {state!r}")
    if symbol not in machine.input_alphabet:
        raise UnknownIdentifier(f"unknown symbol {symbol!r}")
    try:
        nxt = machine.transitions[(state, symbol)]
    except KeyError:
        raise UndefinedTransition(state, symbol) from None
    return StepResult(nxt, machine.outputs[nxt])


def run(machine: MooreMachine, symbols: Iterable[Hashable]) -> list[StepResult]:
    """Fold :func:`step` over ``symbols`` starting from the initial state.

    On an undefined pair the raised :class:`UndefinedTransition` carries the
    failing index and the steps completed so far in ``partial``.
    """
    trace: list[StepResult] = []
    state = machine.initial
    for i, sym in enumerate(symbols):
        try:
            res = step(machine, state, sym)
        except UndefinedTransition as exc:
            raise UndefinedTransition(exc.state, exc.symbol, index=i, partial=trace) from None
        trace.append(res)
        state = res.next_state
    return trace


def is_accepting(machine: MooreMachine, state: Hashable) -> bool:
    return state in machine.final


_CLASSIFIER = {
    State.S: ("t1", "th_cs", Symbol.d1, Symbol.d2),
    State.MS: ("t2", "th_s", Symbol.d3, Symbol.d4),
    State.MT: ("t3", "th_t", Symbol.d5, Symbol.d6),
    State.MV: ("t4", "th_v", Symbol.d7, Symbol.d8),
    State.RS: ("t5", "th_r", Symbol.d9, Symbol.d10),
}


def classify(state: Hashable, reading: FactorReading) -> Symbol:
    """Map the factor watched in ``state`` to its low/high input symbol.

    Ties go to the low symbol (factor <= threshold).
    """
    try:
        factor, threshold, low, high = _CLASSIFIER[state]
    except KeyError:
        raise UnknownIdentifier(f"classify: unknown state {state!r}") from None
    return low if getattr(reading, factor) <= getattr(reading, threshold) else high


# -- validation ---------------------------------------------------------------

@dataclass(frozen=True)
class Diagnostic:
    subject: Hashable

    def __str__(self) -> str:
        return f"{type(self).__name__}({self.subject})"


class UnknownInitial(Diagnostic):
    pass


class UnknownSource(Diagnostic):
    """A transition leaves a state not in Q."""


class UnknownSymbol(Diagnostic):
    """A transition is labelled with a symbol not in Σ."""


class DanglingTarget(Diagnostic):
    """A transition enters a state not in Q."""


class OutputNotTotal(Diagnostic):
    pass


class UnknownOutput(Diagnostic):
    """τ maps a state to something outside Λ."""


class Unreachable(Diagnostic):
    pass


def validate(machine: MooreMachine) -> list[Diagnostic]:
    """Check the structural invariants and reachability from the initial state."""
    diags: list[Diagnostic] = []
    if machine.initial not in machine.states:
        diags.append(UnknownInitial(machine.initial))
    for (src, sym), dst in machine.transitions.items():
        if src not in machine.states:
            diags.append(UnknownSource(src))
        if sym not in machine.input_alphabet:
            diags.append(UnknownSymbol(sym))
        if dst not in machine.states:
            diags.append(DanglingTarget(dst))
    for q in sorted(machine.states, key=str):
        if q not in machine.outputs:
            diags.append(OutputNotTotal(q))
        elif machine.outputs[q] not in machine.output_alphabet:
            diags.append(UnknownOutput(machine.outputs[q]))

    if machine.initial in machine.states:
        seen = {machine.initial}
        queue = deque([machine.initial])
        while queue:
            cur = queue.popleft()
            for (src, _), dst in machine.transitions.items():
                if src == cur and dst in machine.states and dst not in seen:
                    seen.add(dst)
                    queue.append(dst)
        diags.extend(Unreachable(q) for q in sorted(machine.states - seen, key=str))
    return diags


# -- text format ----------------------------------------------------------------
#
#   # comment
#   states: S MS MT MV RS
#   inputs: d1 d2 ...
#   outputs: O1 O2 O3 ε
#   initial: S
#   final: RS
#   S d1 -> S        (transition)
#   S -> ε           (output)

_HEADER_KEYS = ("states", "inputs", "outputs", "initial", "final")
_EPS_SPELLINGS = {"ε", "eps", "epsilon"}


def _ident(tok: str) -> str:
    return EPSILON.value if tok.lower() in _EPS_SPELLINGS else tok


def loads_machine(text: str) -> MooreMachine:
    headers: dict[str, list[str]] = {}
    transitions: dict[tuple[str, str], str] = {}
    outputs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "->" in line:
            lhs, _, rhs = line.partition("->")
            left, right = lhs.split(), rhs.split()
            if len(right) != 1:
                raise MachineFormatError("expected exactly one identifier after '->'", lineno)
            if len(left) == 2:
                key = (left[0], left[1])
                if key in transitions:
                    raise MachineFormatError(f"duplicate transition for {key}", lineno)
                transitions[key] = right[0]
            elif len(left) == 1:
                if left[0] in outputs:
                    raise MachineFormatError(f"duplicate output for {left[0]}", lineno)
                outputs[left[0]] = _ident(right[0])
            else:
                raise MachineFormatError("expected 'state symbol -> state' or 'state -> output'",
                                         lineno)
            continue
        key, sep, value = line.partition(":")
        key = key.strip().lower()
        if not sep or key not in _HEADER_KEYS:
            raise MachineFormatError(f"unrecognised line {raw.strip()!r}", lineno)
        if key in headers:
            raise MachineFormatError(f"duplicate '{key}' header", lineno)
        headers[key] = [_ident(t) for t in value.split()]

    for required in ("states", "inputs", "outputs", "initial"):
        if required not in headers:
            raise MachineFormatError(f"missing '{required}' header")
    if len(headers["initial"]) != 1:
        raise MachineFormatError("'initial' takes exactly one state")
    return MooreMachine(
        states=frozenset(headers["states"]),
        input_alphabet=frozenset(headers["inputs"]),
        output_alphabet=frozenset(headers["outputs"]),
        transitions=transitions,
        outputs=outputs,
        initial=headers["initial"][0],
        final=frozenset(headers.get("final", ())),
    )


def load_machine(path) -> MooreMachine:
    with open(path, encoding="utf-8") as fh:
        return loads_machine(fh.read())


def _ordered(items: Iterable[Hashable], order: Sequence[Hashable] = ()) -> list[str]:
    rank = {str(x): i for i, x in enumerate(order)}
    return sorted((str(x) for x in items), key=lambda s: (rank.get(s, len(rank)), s))


def dumps_machine(machine: MooreMachine) -> str:
    state_order = list(State)
    sym_order = list(Symbol)
    lines = [
        "states: " + " ".join(_ordered(machine.states, state_order)),
        "inputs: " + " ".join(_ordered(machine.input_alphabet, sym_order)),
        "outputs: " + " ".join(_ordered(machine.output_alphabet, list(Output))),
        f"initial: {machine.initial}",
    ]
    if machine.final:
        lines.append("final: " + " ".join(_ordered(machine.final, state_order)))
    srank = {s: i for i, s in enumerate(_ordered(machine.states, state_order))}
    yrank = {s: i for i, s in enumerate(_ordered(machine.input_alphabet, sym_order))}
    for (src, sym), dst in sorted(machine.transitions.items(),
                                  key=lambda kv: (srank.get(str(kv[0][0]), -1),
                                                  yrank.get(str(kv[0][1]), -1),
                                                  str(kv[0]))):
        lines.append(f"{src} {sym} -> {dst}")
    for q in _ordered(machine.outputs, state_order):
        lines.append(f"{q} -> {machine.outputs[q]}")
    return "\n".join(lines) + "\n"
