"""Exception hierarchy shared across the package."""


class GridxpandError(Exception):
    """Base class for all package-specific errors."""


class CaseFormatError(GridxpandError):
    """A case or scenario document could not be parsed.

    Carries a human-readable location (JSON path or line/column) so the
    offending field can be found without a debugger.
    """

    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{message} (at {location})"
        super().__init__(message)


class CaseValidationError(GridxpandError):
    """A parsed case violates one or more structural rules."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"case validation failed: {lines}")


class UnknownEntityError(GridxpandError):
    """Lookup of a bus, line, generator or period id that does not exist."""


class ModelBuildError(GridxpandError):
    """The MILP builder was given inputs it cannot turn into a model."""


class ExtractionError(GridxpandError):
    """A solver solution failed a post-solve audit during plan extraction."""


class SolverError(GridxpandError):
    """A solver backend failed for reasons other than model status."""


class CyclingGuardError(SolverError):
    """The simplex pivot cap was exceeded (suspected cycling)."""
