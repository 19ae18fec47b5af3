"""Exception hierarchy for curve analysis."""


class FBError(Exception):
    """Base class for all errors raised by fbcount."""


class DegeneratePair(FBError):
    pass


class PointNotOnGeodesic(FBError):
    pass


class OnBoundary(FBError):
    pass


class TooFewSamples(FBError):
    pass


class GapTooLarge(FBError):
    pass


class NotClosed(FBError):
    pass


class EmptyInput(FBError):
    pass


class AtCusp(FBError):
    pass


class AtInflection(FBError):
    pass


class DoubleZero(FBError):
    pass


class Type2Cusp(FBError):
    pass


class VelocityNotZero(FBError):
    pass


class RefinementDiverged(FBError):
    pass


class SectorAmbiguous(FBError):
    pass


class GenericityError(FBError):
    """A classification precondition failed because the curve is not generic."""

    def __init__(self, code, message=""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code


class UnclassifiedEvent(FBError):
    pass


class PreconditionViolated(FBError):
    pass


class EventAtParameter(FBError):
    pass


class BendUnstable(FBError):
    pass


class ResolutionTooLow(FBError):
    pass


class SpecError(FBError):
    """Malformed curve spec file; ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field
        self.message = message
