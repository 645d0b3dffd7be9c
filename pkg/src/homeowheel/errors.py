"""Exception types shared across the package."""

from __future__ import annotations


class InvalidAxis(ValueError):
    """Rotation axis is not a unit 3-vector."""


class InvalidParameter(ValueError):
    """Argument outside the documented domain."""


class RateInfeasible(ValueError):
    """Requested timing cannot satisfy the servo rate limits."""


class ZeroDistance(ValueError):
    """Trace covers zero distance, so the per-distance metric is undefined."""


class ValidationFailure(Exception):
    """A state or trajectory failed constraint validation.

    Carries the violation records that caused the failure in ``violations``.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        summary = "; ".join(str(v) for v in self.violations)
        super().__init__(
            f"{len(self.violations)} constraint violation(s): {summary}"
        )


class TrajectoryParseError(Exception):
    """A trajectory file could not be parsed.

    ``line`` and ``column`` are set for lexical errors, ``location`` (a
    JSON-path-like string) for schema errors.
    """

    def __init__(self, message: str, line: int | None = None,
                 column: int | None = None, location: str | None = None):
        self.line = line
        self.column = column
        self.location = location
        where = ""
        if line is not None:
            where = f" at line {line}, column {column}"
        elif location is not None:
            where = f" at {location}"
        super().__init__(f"{message}{where}")
