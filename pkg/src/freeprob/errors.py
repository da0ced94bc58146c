"""Exception taxonomy shared by all modules.

Validation errors signal bad inputs (CLI exit code 2), resource-limit
errors signal work above the configured enumeration cap (exit code 3).
"""


class FreeProbError(Exception):
    pass


class ValidationError(FreeProbError, ValueError):
    pass


class ResourceLimitError(FreeProbError):
    pass


class IrrationalRootError(ValidationError):
    """A root required for exactness does not exist in the rationals."""


class RouteMismatchError(FreeProbError):
    """Two computation routes that must agree produced different values.

    Raised only on an internal inconsistency, never on bad user input.
    """
