"""Shared exception types."""

from __future__ import annotations


class RunsenseError(Exception):
    """Base class for all runsense errors."""


class OsmParseError(RunsenseError):
    """Malformed OSM XML; carries line/column context when available."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class FormatError(RunsenseError):
    """Input file violates the documented wire format."""


class EmptyGraphError(RunsenseError):
    """A graph operation produced or received a graph with no routable segments."""


class NoSnapError(RunsenseError):
    """No street segment within the requested radius of a point."""


class ContractViolationError(RunsenseError):
    """Internal precondition broken, e.g. an excluded segment reaching scoring."""


class NoPathError(RunsenseError):
    """Goal unreachable from origin on the filtered graph."""


class NoRouteError(RunsenseError):
    """Round-trip generation produced no candidate within tolerance.

    ``closest_length_m`` holds the length of the nearest-miss candidate,
    or None when no heading produced a candidate at all.
    """

    def __init__(self, message: str, closest_length_m: float | None = None):
        super().__init__(message)
        self.closest_length_m = closest_length_m


class BatchError(RunsenseError):
    """Coverage batch produced zero successful route pairs."""


class ExcludedTagError(RunsenseError):
    """Tag does not meet the minimum occurrence threshold for importance."""
