"""Exception hierarchy shared by all sl2lab modules."""


class Sl2LabError(Exception):
    """Base class for all sl2lab errors."""


class ZeroInverse(Sl2LabError):
    pass


class SingularMatrix(Sl2LabError):
    pass


class BorelElement(Sl2LabError):
    pass


class BadEps(Sl2LabError):
    pass


class BadPrime(Sl2LabError):
    pass


class ZeroLambda(Sl2LabError):
    pass


class ParamTooSmall(Sl2LabError):
    pass


class NotFound(Sl2LabError):
    pass


class IdentityGenerator(Sl2LabError):
    pass


class DuplicateGenerators(Sl2LabError):
    pass


class NotConnected(Sl2LabError):
    pass


class BudgetExceeded(Sl2LabError):
    pass


class OverlappingBlocks(Sl2LabError):
    pass


class BadOrder(Sl2LabError):
    pass


class PoleMismatch(Sl2LabError):
    pass


class ShiftNotInSubgroup(Sl2LabError):
    pass


class DuplicateShifts(Sl2LabError):
    pass


class ZeroShift(Sl2LabError):
    pass


class EmptyIntersection(Sl2LabError):
    pass


class SymmetryRequired(Sl2LabError):
    pass


class HypothesisViolated(Sl2LabError):
    pass
