"""Exception hierarchy shared by all modules."""


class GeometryError(Exception):
    """Base class for numerical-geometry failures (CLI exit code 3)."""


class RankDeficient(GeometryError):
    pass


class DimensionMismatch(GeometryError, ValueError):
    pass


class DegenerateInput(GeometryError):
    pass


class OriginNotInterior(GeometryError):
    pass


class UnsupportedRepresentation(GeometryError, TypeError):
    pass


class SingularTransform(GeometryError):
    pass


class NotUnitVector(GeometryError, ValueError):
    pass


class DependentVector(GeometryError):
    pass


class BadDims(GeometryError, ValueError):
    pass


class ZeroVector(GeometryError, ValueError):
    pass


class EmptyBox(GeometryError, ValueError):
    pass


class UnknownName(GeometryError, KeyError):
    pass
