"""Exception types raised by the guidance library and simulator."""
from __future__ import annotations


class InvalidArgumentError(ValueError):
    """An argument is outside the domain of the operation."""


class DegenerateDirectionError(ValueError):
    """A direction was requested from a zero-length vector."""


class GuidanceFault(RuntimeError):
    """A guidance evaluation produced a non-finite intermediate."""

    def __init__(self, stage: str, message: str = "") -> None:
        self.stage = stage
        super().__init__(f"guidance fault at stage '{stage}'" + (f": {message}" if message else ""))


class SimulationFault(RuntimeError):
    """The vehicle model left its valid domain."""

    def __init__(self, message: str, step: int | None = None) -> None:
        self.step = step
        prefix = f"step {step}: " if step is not None else ""
        super().__init__(prefix + message)
