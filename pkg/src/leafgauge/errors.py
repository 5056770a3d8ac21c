"""Exception hierarchy shared by all leafgauge modules.

The split mirrors the CLI exit-code contract: assumption violations are
mathematical (the input data fails a hypothesis), numeric failures are
algorithmic (a solver ran out of road), and fixture errors are I/O.
"""


class LeafgaugeError(Exception):
    """Base class for all errors raised by this package."""


class AssumptionError(LeafgaugeError):
    """A hypothesis on the input data (field or polynomial) is violated."""


class NumericError(LeafgaugeError):
    """A numerical procedure failed to converge or left its valid region."""


class RankDropError(NumericError):
    """The vector field norm fell below the nonvanishing threshold."""


class StepBudgetError(NumericError):
    """The ODE integrator exhausted its step budget."""


class ProjectionError(NumericError):
    """The leaf projection Newton iteration did not converge."""


class RootSearchError(NumericError):
    """No admissible root of the radial mismatch in the search bracket."""


class DegenerateRootError(NumericError):
    """The radial mismatch has a vanishing slope away from its root."""


class FixtureError(LeafgaugeError):
    """A fixture file is missing, unreadable, or malformed."""
