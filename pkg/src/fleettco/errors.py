"""Exception types shared across the engine."""

from __future__ import annotations


class FleetTcoError(Exception):
    """Base class for all engine errors."""


class InvalidInputError(FleetTcoError):
    """An argument violates a precondition (non-finite, empty, out of range)."""


class SizeLimitError(InvalidInputError):
    """An exhaustive routine was handed an instance above its size cap."""


class DatasetError(FleetTcoError):
    """Dataset failed to load or validate.

    ``problems`` is a list of (field_path, message) pairs so callers can
    report exactly which fields are wrong.
    """

    def __init__(self, message: str, problems: list[tuple[str, str]] | None = None):
        self.problems = problems or []
        if self.problems:
            detail = "; ".join(f"{path}: {msg}" for path, msg in self.problems)
            message = f"{message} ({detail})"
        super().__init__(message)


class DatasetIncompleteError(DatasetError):
    """A required dataset entry (BOM row, price series, ...) is missing."""


class InfeasibleScheduleError(FleetTcoError):
    """No feasible station schedule exists; names the offending vehicles."""

    def __init__(self, message: str, vehicle_ids: list[str] | None = None):
        self.vehicle_ids = vehicle_ids or []
        if self.vehicle_ids:
            message = f"{message}: vehicles {', '.join(self.vehicle_ids)}"
        super().__init__(message)
