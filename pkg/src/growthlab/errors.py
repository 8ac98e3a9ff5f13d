"""Exception hierarchy shared across the library."""


class GrowthLabError(Exception):
    """Base class for all library errors."""


class ExcludedS(GrowthLabError):
    """The growth parameter s hits one of the excluded integers {-k, ..., -1}."""


class DimensionOne(GrowthLabError):
    """s < -1 requires N > 1 on the full space (half-lines are fine)."""


class SZero(GrowthLabError):
    """The exponential scale is undefined at s = 0; use the power scale instead."""


class OrderTooHigh(GrowthLabError):
    """Finite differences requested beyond order 4 without an analytic oracle."""


class NonIntegrable(GrowthLabError):
    """A weighted norm required to be finite is infinite."""


class OriginSingular(GrowthLabError):
    """Pure-power weight is non-integrable at the origin for the requested region."""


class DivergentRhs(GrowthLabError):
    """The right-hand side norm is infinite; the inequality is vacuous."""


class NoDecay(GrowthLabError):
    """A profile or field required to vanish at infinity is not flagged as decaying."""


class NoConvergence(GrowthLabError):
    """The spherical-mean limit fit did not stabilize over the sampled radii."""


class NotMeanZero(GrowthLabError):
    """The field has a nonzero radial symmetrization where a vanishing one is required."""


class InadmissiblePQ(GrowthLabError):
    """The (p, q) pair does not admit the requested sup-norm / decay statement."""


class EmptyEffective(GrowthLabError):
    """Every member of a field family was skipped; no constant can be estimated."""


class ConfigError(GrowthLabError):
    """Suite configuration failed to parse or validate."""
