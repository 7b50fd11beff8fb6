"""Exception types shared across the package."""


class CitenetError(Exception):
    """Base class for all citenet errors."""


class DataError(CitenetError, ValueError):
    """Invalid or inconsistent input data (bad rows, unknown ids, broken invariants)."""


class UndefinedMetricError(CitenetError, ValueError):
    """A metric is mathematically undefined for the given input (zero denominator,
    zero variance). Callers report the exclusion instead of substituting a value."""
