"""Exception types shared across pslab."""


class PslabError(Exception):
    """Base class for all library errors."""


class DomainError(PslabError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ArgumentError(PslabError, ValueError):
    """Arguments are individually valid but inconsistent (duplicates, ranges, regimes)."""


class CapacityError(PslabError, ValueError):
    """A requested range exceeds a configured capacity."""


class HypothesisError(PslabError):
    """A lemma hypothesis does not hold for the supplied data."""


class NumericError(PslabError, ArithmeticError):
    """An iterative numeric procedure failed to converge."""
