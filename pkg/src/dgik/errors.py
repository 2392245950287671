"""Exception types shared across the package."""


class DgikError(Exception):
    """Base class for all package-specific errors."""


class EmbeddingDimensionExceeded(DgikError):
    """A distance matrix is not realizable in the requested dimension."""


class DegenerateAnchors(DgikError):
    """Anchor geometry is too degenerate to determine the alignment."""


class RankDeficientBase(DgikError):
    """A manifold operation was attempted at a rank-deficient point."""


class LeftManifold(DgikError):
    """A retraction step crossed a rank-deficient stratum."""


class LineSearchStalled(DgikError):
    """Backtracking found no sufficient decrease within the allowed trials."""


class DimensionMismatch(DgikError):
    """Configuration or point data does not match the robot model."""


class InconsistentPoints(DgikError):
    """Point coordinates are not consistent with the robot's link geometry."""


class RobotFileError(DgikError):
    """A robot or goal description file is malformed."""
