"""Exception hierarchy.

Everything raised on purpose by the package derives from ``ComplexKitError``.
``NumericError`` marks failures of a computation (non-finite values, points
off the admissible set, singular inputs); the CLI maps those to exit code 3.
"""


class ComplexKitError(ValueError):
    pass


class NumericError(ComplexKitError):
    pass


# core geometry
class NonFiniteIntegrand(NumericError):
    pass


class DegenerateContour(NumericError):
    pass


class EmptyDomain(NumericError):
    pass


class NonFiniteStencil(NumericError):
    pass


# cauchy kernel
class PointOnBoundary(NumericError):
    pass


# dbar
class LatticeMismatch(NumericError):
    pass


class SingularityInsideCutoffTransition(NumericError):
    pass


# dirichlet
class RadiusOutOfRange(NumericError):
    pass


class LatticeTooSmall(NumericError):
    pass


class DegenerateSampleSet(NumericError):
    pass


class NonFiniteSample(NumericError):
    pass


class NegativeData(NumericError):
    pass


# invariant metrics
class UnsupportedBasePoint(NumericError):
    pass


class PointOutsideDomain(NumericError):
    pass


class MapLeavesTarget(NumericError):
    pass


class CandidateNotAdmissible(NumericError):
    pass


# automorphisms
class KindMismatch(ComplexKitError):
    pass


class SingularMatrix(NumericError):
    pass


class NotOnSphere(NumericError):
    pass


class CoincidentPoints(NumericError):
    pass


# polynomial algebra
class DegreeOverflow(NumericError):
    pass


# osgood
class AllMasksEmpty(NumericError):
    pass


class GeometryMismatch(NumericError):
    pass
