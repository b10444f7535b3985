"""Exception hierarchy shared by every module."""


class ChshError(ValueError):
    """Base class for all errors raised by this package."""


class ArgumentError(ChshError):
    """An argument is out of its documented domain."""


class InfeasibleBudgetError(ChshError):
    """The randomness budget lies outside the feasible range for the scenario."""


class SizeError(ChshError):
    """The requested run count is too large for explicit enumeration."""


class BracketingError(ChshError):
    """A root finder was given an interval without a sign change."""
