"""Exception types shared across the package."""


class DegenerateGeometryError(ValueError):
    """Path geometry is unusable (duplicate consecutive waypoints, ...)."""


class PathOverrunError(ValueError):
    """A velocity profile travels past the end of its path."""


class ScenarioFormatError(ValueError):
    """Scenario document does not match the schema; message names the field."""


class ScenarioValidationError(ValueError):
    """Scenario document parsed but violates an invariant."""


class IntractableConfigError(ValueError):
    """Exhaustive enumeration was refused because the candidate count is too large."""
