"""Exception types shared across the package.

Split in two: UsageError covers bad invocations and malformed configuration
(CLI exit code 1), ComputationError covers everything that goes wrong inside
a solver (CLI exit code 2).
"""


class UsageError(Exception):
    """Malformed invocation or configuration input."""


class ComputationError(Exception):
    """Base class for solver-side failures."""


# geometry
class EmptyConfiguration(ComputationError):
    """Operation requires at least one interaction center."""


class DuplicatePoints(ComputationError):
    """Two centers coincide within the deduplication threshold."""

    def __init__(self, msg, indices=()):
        super().__init__(msg)
        self.indices = tuple(indices)


class TooLarge(ComputationError):
    """Configuration exceeds the factorial-work cutoff; raise n_max to override."""


# chardet
class ZeroSeparation(ComputationError):
    """Free Green function evaluated at zero separation."""


class SingularGamma(ComputationError):
    """Gamma matrix numerically singular (z at or near a resonance)."""


class PointOnCenter(ComputationError):
    """Kernel argument coincides with an interaction center."""


class CoincidentArguments(ComputationError):
    """Kernel arguments coincide (free Green function diverges)."""


# exppoly
class FullCancellation(ComputationError):
    """Every nonconstant exponential term cancelled; expansion is degenerate."""


class DegenerateSingleTerm(ComputationError):
    """Density undefined for a single-term exponential polynomial."""


class DiamMismatch(ComputationError):
    """Smallest chain parameter disagrees with 1/diameter; expansion or hull bug."""


class IndexOutOfRange(ComputationError, IndexError):
    """Chain index outside the multiset."""


# rootfind
class BoundaryZero(ComputationError):
    """A zero pinned on (or vanishingly close to) a contour after all retries."""


class NonConvergence(ComputationError):
    """Newton refinement failed from every fallback start."""


class RegionExceeded(ComputationError):
    """Counting requested beyond the searched region."""


class InsufficientRadius(ComputationError):
    """Numeric chain extraction needs a larger search radius or a finer h-grid."""


# experiments
class EmptySample(ComputationError):
    """Statistic of an empty sample requested."""
