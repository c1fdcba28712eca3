"""Exception taxonomy.

Every domain failure derives from :class:`GrassPentaError`; the CLI maps those
to exit code 1 and prints a JSON record built from :meth:`GrassPentaError.to_dict`.
"""


class GrassPentaError(Exception):
    """Base class for all domain errors raised by the library."""

    def __init__(self, message="", **context):
        super().__init__(message)
        self.context = context

    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self), **self.context}


class InvalidDims(GrassPentaError, ValueError):
    pass


class GenerationFailed(GrassPentaError):
    pass


class NotRegular(GrassPentaError):
    pass


class SingularFrame(GrassPentaError):
    pass


class NotCoprime(GrassPentaError, ValueError):
    pass


class ZeroInput(GrassPentaError, ValueError):
    pass


class NonGenericGauge(GrassPentaError):
    pass


class DegenerateSyzygy(GrassPentaError):
    pass


class NonGenericIntersection(GrassPentaError):
    pass


class SingularN(GrassPentaError):
    pass


class ZeroMu(GrassPentaError, ValueError):
    pass


class InterpolationIllConditioned(GrassPentaError):
    pass


class DegenerateDiagonals(GrassPentaError):
    pass


class SingularMatrix(GrassPentaError):
    pass
