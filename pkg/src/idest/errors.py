"""Exception types shared across the package."""


class IdestError(Exception):
    """Base class for all errors raised by this library."""


class ConfigError(IdestError):
    """An estimator configuration violates one of its constraints."""


class SpecError(IdestError):
    """A manifold specification violates one of its constraints."""


class DataFormatError(IdestError):
    """An input file could not be parsed into a point cloud or suite."""


class DimensionMismatch(IdestError):
    """Query points and sample cloud live in different ambient dimensions."""


class KTooLarge(IdestError):
    """More neighbors requested than the sample can provide."""


class DegenerateNeighborhood(IdestError):
    """Neighbor distances carry no scale information (zero radius or all ties)."""


class EmptyBall(IdestError):
    """No sample points fall within the requested radius."""


class RankDeficient(IdestError):
    """The weighted design matrix has insufficient numerical rank."""


class AllPointsFailed(IdestError):
    """Every per-point estimate failed, so no aggregate can be formed."""


class ZeroVariance(IdestError):
    """All points are identical; a variance-based estimate is undefined."""


class MissingEntries(IdestError):
    """A benchmark run lacks the entries required for the requested statistic."""
