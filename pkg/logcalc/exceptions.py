# -*- coding: utf-8 -*-
"""Exception hierarchy for logcalc

Every module raises leaves of its own intermediate class so callers can
catch per concern (``except ContourException``) or everything
(``except LogCalcException``).
"""


class LogCalcException(Exception):
    """Base exception for the package"""


# linalg ---------------------------------------------------------------------


class LinAlgException(LogCalcException):
    """Raised on problems in the dense matrix kernel"""


class InvalidMatrix(LinAlgException):
    """Raised when a value is not a finite square complex matrix"""


class SingularResolvent(LinAlgException):
    """Raised when ``lambda I - m`` is (numerically) singular"""


class BranchCutViolation(LinAlgException):
    """Raised when the principal logarithm would meet its branch cut"""


# contour --------------------------------------------------------------------


class ContourException(LogCalcException):
    """Raised on problems with integration paths and Dunford integrals"""


class InvalidContour(ContourException):
    """Raised on malformed circle parameters"""


class ShiftTooSmall(ContourException):
    """Raised when no circle of the family separates spectrum and origin"""


class SpectrumNotEnclosed(ContourException):
    """Raised when an eigenvalue lies on or outside the integration path"""


class NoConvergence(ContourException):
    """Raised when node doubling does not meet the requested tolerance"""


class ZeroArgument(ContourException):
    """Raised when taking the logarithm of zero"""


class UnknownFunction(LogCalcException):
    """Raised on unknown scalar function names or bad parameters"""


# evolution ------------------------------------------------------------------


class EvolutionException(LogCalcException):
    """Raised on problems with evolution families"""


class InvalidGenerator(EvolutionException):
    """Raised on inconsistent generator specifications"""


class OutOfHorizon(EvolutionException):
    """Raised when evaluating outside of ``[-T, T]``"""


# logrep ---------------------------------------------------------------------


class LogRepException(LogCalcException):
    """Raised on problems with the logarithm representation"""


class BadMargin(LogRepException):
    """Raised when the kappa margin does not exceed one"""


class StepTooSmall(LogRepException):
    """Raised when a difference step is dominated by rounding noise"""


class CommutationViolated(LogRepException):
    """Raised when a generator does not commute with its family"""


class SeriesDivergence(LogRepException):
    """Raised when the exponential series needs more than the allowed terms"""


class UnboundedLogarithm(LogRepException):
    """Raised when a(t, s) exceeds the bound given by its contour"""


# cauchy ---------------------------------------------------------------------


class CauchyException(LogCalcException):
    """Raised on problems with Cauchy problems and their solvers"""


class DimensionMismatch(CauchyException):
    """Raised when vector and generator dimensions differ"""


class HolderViolation(CauchyException):
    """Raised when a forcing violates its declared Hoelder bound"""


class QuadratureStall(CauchyException):
    """Raised when adaptive panel refinement exceeds the panel budget"""


class StepUnderflow(CauchyException):
    """Raised when the Runge-Kutta oracle cannot make progress"""


class InvalidGrid(CauchyException):
    """Raised on time grids unsuitable for difference quotients"""


class GridTooCoarse(InvalidGrid):
    """Raised when a time grid has too few points"""


# scenarios ------------------------------------------------------------------


class ScenarioException(LogCalcException):
    """Raised on problems with loading scenario files"""


class ParseError(ScenarioException):
    """Raised when a scenario file is not well-formed JSON/YAML"""

    def __init__(self, message, path=None, line=None):
        super().__init__(message)
        #: Path of the offending file
        self.path = path
        #: 1-based line number, if known
        self.line = line


class SchemaViolation(ScenarioException):
    """Raised when a scenario does not follow the scenario schema"""

    def __init__(self, message, field=None):
        super().__init__(message)
        #: Offending field (dotted path or key name)
        self.field = field


class RefResolutionException(ScenarioException):
    """Raised on problems with resolving JSON pointers"""
