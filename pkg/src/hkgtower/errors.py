"""Exception hierarchy shared by all modules."""


class HKGError(Exception):
    """Base class for all errors raised by this package."""


class InvalidField(HKGError):
    pass


class FieldMismatch(HKGError):
    pass


class DivByZero(HKGError):
    pass


class IllegalSubstitution(HKGError):
    pass


class NotNormalized(HKGError):
    pass


class WildRoot(HKGError):
    pass


class FractionalValuation(HKGError):
    pass


class RootNotInField(HKGError):
    pass


class WildExponent(HKGError):
    pass


class NoBreak(HKGError):
    pass


class NotAGroup(HKGError):
    pass


class NotAUniformizer(HKGError):
    pass


class InfiniteGaps(HKGError):
    pass


class NoTameElement(HKGError):
    pass


class DependentSpan(HKGError):
    pass


class CarrierMismatch(HKGError):
    pass


class DegreeOverflow(HKGError):
    pass


class BadOrder(HKGError):
    pass


class NotCyclic(HKGError):
    pass


class ShapeError(HKGError):
    pass


class SpecMismatch(HKGError):
    pass


class NotCoboundary(HKGError):
    pass
