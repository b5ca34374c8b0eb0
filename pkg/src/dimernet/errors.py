"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class DimerNetError(Exception):
    """Base class for every error raised by the package."""


class MixedBackendError(DimerNetError, TypeError):
    pass


class DivisionByZeroError(DimerNetError, ZeroDivisionError):
    pass


class ZeroPolynomialError(DimerNetError, ValueError):
    pass


class NonSquareError(DimerNetError, ValueError):
    pass


class InexactDivisionError(DimerNetError, ArithmeticError):
    pass


class FloatBackendUnsupported(DimerNetError):
    """Raised by operations that are only meaningful over exact arithmetic."""


class DegenerateAnglesError(DimerNetError, ValueError):
    pass


class NonTransversalCrossing(DimerNetError, ValueError):
    def __init__(self, message: str, edge=None, segment=None):
        super().__init__(message)
        self.edge = edge
        self.segment = segment


class ZeroScalarError(DimerNetError, ValueError):
    pass


class UnknownVertexError(DimerNetError, KeyError):
    pass


class NoPerfectMatching(DimerNetError):
    pass


class NoSolutionError(DimerNetError):
    pass


class ColorCountMismatch(DimerNetError, ValueError):
    pass


class NotUnicolored(DimerNetError, ValueError):
    pass


class IsLoopError(DimerNetError, ValueError):
    pass


class NotADirectedCycle(DimerNetError, ValueError):
    pass


class ZeroWeightOnCoverEdge(DimerNetError, ValueError):
    pass


class StraightAngleError(DimerNetError, ValueError):
    pass


class NonAxisParallelInExactMode(DimerNetError, ValueError):
    pass


class RelabelingImpossible(DimerNetError, ValueError):
    pass


class SingularPathSystem(DimerNetError, ArithmeticError):
    pass


class MethodMismatch(DimerNetError, AssertionError):
    pass


class PreconditionViolation(DimerNetError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(f"{code}: {msg}" for code, msg in self.violations))

    def codes(self) -> list:
        return [code for code, _ in self.violations]


class InstanceFormatError(DimerNetError, ValueError):
    pass
