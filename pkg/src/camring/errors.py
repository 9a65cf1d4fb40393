"""Exception hierarchy for camring."""


class CamringError(Exception):
    """Base class for all camring errors."""


class ParallelImagePlanes(CamringError):
    """Two image planes are (numerically) parallel and cannot form a dual pair."""


class BehindCamera(CamringError):
    """Point lies on or behind the pinhole; perspective projection undefined."""


class NoSolution(CamringError):
    """No camera angle reproduces the requested reading for this point."""


class DegenerateArrangement(CamringError):
    """Polygon splitting produced non-finite vertices."""


class CellNotFound(CamringError):
    """No partition cell carries the requested signature."""


class RankDeficient(CamringError):
    """Stacked projection system has rank below two."""


class SingularFit(CamringError):
    """Curve-fit design matrix is rank-deficient."""
