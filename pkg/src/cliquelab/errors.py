"""Exception types shared across the package."""


class CliquelabError(Exception):
    """Base class for all errors raised by this package."""


class CapExceeded(CliquelabError):
    """An operation refused to run because it would exceed a configured cap."""


class InfeasibleError(CliquelabError):
    """The instance admits no feasible solution."""


class BudgetExceeded(CliquelabError):
    """A solver ran out of wall-clock budget before reaching a verdict."""


class PatternSearchTimeout(BudgetExceeded):
    """Pattern search exceeded its time budget; absence was NOT established."""
