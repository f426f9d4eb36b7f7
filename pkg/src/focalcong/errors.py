"""Exception types raised across the package."""


class FocalError(Exception):
    """Base class for every error raised by focalcong."""


class DivisionByNonUnit(FocalError, ZeroDivisionError):
    pass


class PivotNotUnit(FocalError):
    """Jet elimination found no unit pivot where the constant part predicted one.

    Signals a non-generic base point; callers resample.
    """


class WrongDegree(FocalError, ValueError):
    pass


class ChartSyntaxError(FocalError, SyntaxError):
    def __init__(self, message, line, col):
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class UnknownVariable(ChartSyntaxError):
    def __init__(self, name, line, col):
        super().__init__(f"unknown variable {name!r} (only u, v allowed)", line, col)
        self.name = name


class ZeroPointMap(FocalError, ValueError):
    pass


class DegenerateSpanAtBase(FocalError):
    pass


class DegenerateChart(FocalError):
    pass


class DegenerateCongruence(FocalError):
    def __init__(self, realization_dim):
        super().__init__(f"planes fill a variety of dimension {realization_dim} < 4")
        self.realization_dim = realization_dim


class NotAPoint(FocalError):
    pass


class NotALine(FocalError):
    pass


class ZeroPencil(FocalError):
    pass


class WholeLineFocal(FocalError):
    pass


class NonGenericChart(FocalError):
    pass


class InconsistentSample(FocalError):
    pass


class UnexpectedFocusDim(FocalError):
    pass


class CertificateFailed(FocalError):
    def __init__(self, name):
        super().__init__(f"certificate check failed: {name}")
        self.name = name


class GenerationFailed(FocalError):
    pass


class SingularTransform(FocalError, ValueError):
    pass
