"""Exception types shared across the package."""


class GraphFormatError(ValueError):
    """Malformed graph text input."""


class TooLargeError(ValueError):
    """Input exceeds a documented size cap for an exact routine."""


class BudgetExceededError(RuntimeError):
    """A search hit its node/time budget before reaching an answer.

    Raised instead of returning a possibly-wrong verdict; callers that
    tolerate unknowns (Monte Carlo trials) catch this and count the trial
    as exhausted.
    """

    def __init__(self, message, nodes=None):
        super().__init__(message)
        self.nodes = nodes


class HypothesisUnmetError(ValueError):
    """The premise of a conditional check does not hold for the given input."""
