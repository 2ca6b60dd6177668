"""Exception types raised by the toolkit."""


class UrbanFluxError(ValueError):
    """Base class for all toolkit errors."""


class NegativeMass(UrbanFluxError):
    pass


class ZeroMass(UrbanFluxError):
    pass


class EmptyMeasure(UrbanFluxError):
    pass


class NonPositiveMass(UrbanFluxError):
    pass


class UnnormalizedMass(UrbanFluxError):
    pass


class DimensionMismatch(UrbanFluxError):
    pass


class RefinementTooLarge(UrbanFluxError):
    pass


class UnknownNode(UrbanFluxError):
    pass


class DegeneratePolyline(UrbanFluxError):
    pass


class UnclassifiableEdge(UrbanFluxError):
    pass


class CyclicFlux(UrbanFluxError):
    pass


class Infeasible(UrbanFluxError):
    pass


class TooManyAtoms(UrbanFluxError):
    pass


class TerminalVertex(UrbanFluxError):
    pass


class InfiniteEnergy(UrbanFluxError):
    pass


class AmbientCostMismatch(UrbanFluxError):
    pass
