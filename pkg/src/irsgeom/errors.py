"""Exception types shared across the package.

Verifiers return most outcomes as data; these are raised only when a
precondition of an operation fails or a question cannot be decided.
"""


class IrsGeomError(Exception):
    """Base class for all package errors."""


class MixedModels(IrsGeomError):
    """Points or elements from different model spaces were combined."""


class NotConvergent(IrsGeomError):
    """A sequence failed the truncated convergence-at-infinity test."""


class Inconclusive(IrsGeomError):
    """Finite evidence is compatible with more than one answer."""

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence


class NotLoxodromic(IrsGeomError):
    pass


class DegenerateStart(IrsGeomError):
    """The starting point of a north-south check is the excluded fixed point."""


class NoConnector(IrsGeomError):
    pass


class RadiusTooSmall(IrsGeomError):
    pass


class FixesAttractor(IrsGeomError):
    """The element fixes the attracting point of the loxodromic (hypothesis fails)."""


class HypothesisFail(IrsGeomError):
    pass


class NotFoundWithin(IrsGeomError):
    def __init__(self, bound):
        super().__init__(f"no certificate found for n <= {bound}")
        self.bound = bound


class Undecidable(IrsGeomError):
    pass


class UnsupportedKind(IrsGeomError):
    pass


class NoPairsFound(IrsGeomError):
    pass


class NotElliptic(IrsGeomError):
    pass


class NotNormal(IrsGeomError):
    pass


class PreconditionFail(IrsGeomError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class NotInvariant(IrsGeomError):
    """A measure moved under conjugation by ``generator``; ``trace`` names the class."""

    def __init__(self, generator, trace):
        super().__init__(f"not invariant under {generator!r}")
        self.generator = generator
        self.trace = trace
