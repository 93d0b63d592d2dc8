"""Exception hierarchy shared across the toolkit.

The CLI maps these to exit codes: ValidationError (and subclasses) -> 2,
NumericalError (and subclasses) -> 3.
"""


class BoosttabError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(BoosttabError):
    """Malformed input: bad shapes, domains, or option values."""


class ParseError(ValidationError):
    """A file failed to parse; the message names the offending line."""


class DegenerateDataError(ValidationError):
    """The training data admits no usable split."""


class NumericalError(BoosttabError):
    """A numerically meaningful failure, not a programming error."""


class InfiniteWeightError(NumericalError):
    """A step weight is unbounded: one side of a level carries zero mass.

    Raised by the analytic weight recursion when every configuration on the
    misclassified (or correctly classified) side of some level is empty, so
    the log-ratio defining that step's weight diverges.
    """

    def __init__(self, step: int, side: str):
        self.step = step
        self.side = side
        super().__init__(
            f"infinite weight at step {step}: zero total mass on the {side} side"
        )


class CoercivityError(NumericalError):
    """The risk may have no minimizer because some configuration is empty."""

    def __init__(self, leaf_index: int):
        self.leaf_index = leaf_index
        super().__init__(
            f"empty configuration at leaf {leaf_index}: possibly unbounded "
            "below direction exists, risk minimizer may not exist"
        )


class NonConvergenceError(NumericalError):
    """An iterative solve exhausted its budget (used by the CLI layer)."""
