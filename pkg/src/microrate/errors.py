"""Exception types shared across the package."""


class DomainError(ValueError):
    """An input violates a domain invariant (wrong sign, out of range)."""


class NoRootInUnitInterval(RuntimeError):
    """The bracket scan found no sign change in (0, 1).

    Unreachable for contracts with positive nominal interest; kept as a
    guard against degenerate inputs slipping past validation.
    """


class BracketFailure(RuntimeError):
    """The doubling search failed to bracket a root (guard, unreachable
    for valid contracts and paths)."""


class DegenerateSample(ValueError):
    """All samples are equal: skewness and kurtosis are undefined.

    The exception still carries the defined part of the summary
    (mean, std_dev=0, min, max) in ``stats``; skewness and kurtosis
    are NaN there.
    """

    def __init__(self, stats):
        super().__init__("zero sample variance: skewness and kurtosis undefined")
        self.stats = stats
