"""Exception hierarchy shared across the toolkit."""


class CdtkitError(Exception):
    """Base class for all toolkit errors."""


class NonFinite(CdtkitError):
    """An input contains NaN or infinity."""


class AllZero(CdtkitError):
    """A signal has no positive mass and no floor to rescue it."""


class OutOfRange(CdtkitError):
    """A quantile argument fell outside [0, 1]."""


class OutOfDomain(CdtkitError):
    """An evaluation point fell outside a density's domain."""


class NonMonotone(CdtkitError):
    """A recovered transport map decreases beyond tolerance."""


class NonPositiveScale(CdtkitError):
    """A dilation factor must be strictly positive."""


class RangeMismatch(CdtkitError):
    """Map values fall outside the knot span of a composed map."""


class ReferenceMismatch(CdtkitError):
    """Two transformed signals do not share a reference and grid."""


class SingularScatter(CdtkitError):
    """The within-class scatter matrix is not invertible."""


class BadRank(CdtkitError):
    """Requested more embedding dimensions than available."""


class NotConverged(CdtkitError):
    """An iterative solver hit its iteration cap."""


class DimensionMismatch(CdtkitError):
    """Point sets of different feature dimension."""


class TooFewSamples(CdtkitError):
    """A class has fewer samples than the requested fold count."""


class DomainEscape(CdtkitError):
    """A sampled deformation pushed all mass outside the working grid."""


class EmptyInput(CdtkitError):
    """An operation received no data."""


class ParseError(CdtkitError):
    """A CSV row could not be parsed.

    Carries the 1-based line number of the offending row.
    """

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


class LabelMissing(CdtkitError):
    """A labeled dataset row lacks its class label."""
