"""Exception hierarchy.

Everything raised on purpose derives from :class:`TimelikeError`.  Input
problems (files, flags, malformed scenes) derive from :class:`InputError` so
the command line can map them to a usage exit status.
"""


class TimelikeError(Exception):
    pass


class InputError(TimelikeError):
    pass


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class ValidationError(InputError):
    pass


# geometry kernel
class CoordinateDomainError(TimelikeError, ValueError):
    pass


class DegenerateRayError(TimelikeError, ValueError):
    pass


class AmbiguousGeodesicError(TimelikeError, ValueError):
    pass


class ChartMismatchError(TimelikeError, ValueError):
    pass


class CollinearityError(TimelikeError, ValueError):
    pass


class CoCircularityError(TimelikeError, ValueError):
    pass


class DegenerateConfigurationError(TimelikeError, ValueError):
    pass


# bodies and order
class PreconditionError(TimelikeError, ValueError):
    pass


class EmptyFamilyError(PreconditionError):
    pass


class NoSeparatorError(PreconditionError):
    pass


class UnsupportedRepresentationError(TimelikeError):
    pass


class UnsupportedChartError(TimelikeError):
    pass


# metrics
class NotInFutureError(TimelikeError, ValueError):
    pass


class NotTimelikeDirectionError(TimelikeError, ValueError):
    pass


class DomainError(TimelikeError, ValueError):
    pass


class NullChordError(TimelikeError, ValueError):
    pass


class ProjectionDomainError(TimelikeError, ValueError):
    pass


class NotTimelikeSeparatedError(TimelikeError, ValueError):
    pass


class CurveEvaluationError(TimelikeError):
    pass


class RenderError(TimelikeError):
    pass
