"""Exception types shared across the package.

The CLI maps these onto distinct exit codes: resource/budget exhaustion is
separated from numerical-invalidity conditions so batch scripts can react.
"""


class CubicDynError(Exception):
    """Base class for all package errors."""


class BudgetExceededError(CubicDynError):
    """An exact computation outgrew its configured resource budget."""

    def __init__(self, message, budget=None):
        super().__init__(message)
        self.budget = budget


class ToleranceNotReachedError(CubicDynError):
    """A certified tolerance could not be met within the step budget.

    Carries the best value obtained and the error bound actually achieved.
    """

    def __init__(self, message, best_value, achieved_error):
        super().__init__(message)
        self.best_value = best_value
        self.achieved_error = achieved_error


class PrecisionExhaustedError(CubicDynError):
    """Truncated-series or ball arithmetic lost all significant terms."""


class DomainError(CubicDynError):
    """Input outside the region where the operation is defined/enforced."""


class PunctureEnumerationError(CubicDynError):
    """Punctures of a parametrized curve could not be enumerated exactly."""


class CommonComponentError(CubicDynError):
    """Two relation curves share a component (identically zero eliminant)."""


class GridInvalidError(CubicDynError):
    """A density grid failed its validity checks (e.g. clipped mass)."""


class PersistentRelationError(CubicDynError):
    """An orbit relation holds identically on the curve (zero numerator)."""
