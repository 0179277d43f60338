"""Exception types raised across the simulator."""

from __future__ import annotations

from typing import Any, Hashable


class SimError(Exception):
    """Base class for every error raised by :mod:`mlpsim`."""


class UndefinedTransition(SimError):
    """Raised when a (state, symbol) pair has no transition.

    ``index`` is the position in the input sequence when raised from
    :func:`mlpsim.moore.run`; ``partial`` holds the steps completed before it.
    """

    def __init__(self, state: Hashable, symbol: Hashable, index: int | None = None,
                 partial: list[Any] | None = None) -> None:
        self.state = state
        self.symbol = symbol
        self.index = index
        self.partial = list(partial or [])
        where = f" at index {index}" if index is not None else ""
        super().__init__(f"no transition for ({state}, {symbol}){where}")


class UnknownIdentifier(SimError, ValueError):
    """A state or symbol outside the machine's declared sets."""


class MachineFormatError(SimError, ValueError):
    def __init__(self, message: str, line: int | None = None) -> None:
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


class NonFiniteInput(SimError, ValueError):
    """A NaN or infinite value reached an arithmetic stage."""


class ExhaustedSource(SimError):
    """A sample/reading provider ran dry before the loop terminated."""


class EmptySeries(SimError, ValueError):
    pass


class InvalidParams(SimError, ValueError):
    pass


class FrequencyOutOfBand(InvalidParams):
    def __init__(self, receptor: str, frequency_hz: float, band: tuple[float, float]) -> None:
        self.receptor = receptor
        self.frequency_hz = frequency_hz
        self.band = band
        super().__init__(
            f"{frequency_hz} Hz outside the {band[0]:g}-{band[1]:g} Hz band of {receptor}"
        )


class IndexOutOfRange(SimError, IndexError):
    pass


class ConfigParseError(SimError, ValueError):
    """Malformed or unrecognised configuration input."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None,
                 key: str | None = None) -> None:
        self.line = line
        self.column = column
        self.key = key
        loc = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + loc)


class ConfigValidationError(SimError, ValueError):
    """A configuration value violates its constraint."""

    def __init__(self, key: str, constraint: str) -> None:
        self.key = key
        self.constraint = constraint
        super().__init__(f"{key}: must satisfy {constraint}")
