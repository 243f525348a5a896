"""Exception hierarchy. Every error raised by the package derives from BubbleError."""


class BubbleError(Exception):
    pass


# geometry
class DegenerateCoincident(BubbleError):
    pass


class DegenerateTriangle(BubbleError):
    pass


class NotTangent(BubbleError):
    pass


class NotIncident(BubbleError):
    pass


class RayDegeneracy(BubbleError):
    """Pole of a Mobius map sits on an arc endpoint."""


class DoubleRayDegeneracy(BubbleError):
    """Pole of a Mobius map sits in the open interior of an arc."""


# input / structure
class InvariantViolation(BubbleError):
    pass


class ParseError(BubbleError):
    pass


class MalformedEmbedding(InvariantViolation):
    pass


class SelfLoopRejected(InvariantViolation):
    pass


class MalformedCluster(InvariantViolation):
    pass


class AlreadyThreeConnected(BubbleError):
    pass


# numerics
class NumericalFailure(BubbleError):
    pass


class NotTriangulation(BubbleError):
    pass


class InputTooSmall(BubbleError):
    pass


class ConvergenceFailure(NumericalFailure):
    def __init__(self, iterations, residual):
        super().__init__(f"no convergence after {iterations} iterations (residual {residual:.3e})")
        self.iterations = iterations
        self.residual = residual


PackingFailure = ConvergenceFailure


class JunctionSelectionAmbiguous(NumericalFailure):
    pass


class GluingOverlap(NumericalFailure):
    pass


# diagram
class CoincidentSites(BubbleError):
    pass


class NoCommonPoint(BubbleError):
    pass


class OnBoundary(BubbleError):
    pass


# cluster
class NotPlateau(BubbleError):
    pass


class InconsistentPressures(BubbleError):
    def __init__(self, cycle, residual):
        super().__init__(f"pressure cycle through arc {cycle} inconsistent by {residual:.3e}")
        self.cycle = cycle
        self.residual = residual


class NotRealizable(BubbleError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason
