"""Exception types shared across the package."""


class CyclotomeError(Exception):
    """Base class for all errors raised by this package."""


class NotPrime(CyclotomeError):
    pass


class BudgetExceeded(CyclotomeError):
    pass


class ZeroElement(CyclotomeError):
    pass


class NotCoprime(CyclotomeError):
    pass


class BadResidue(CyclotomeError):
    pass


class DegenerateResidue(CyclotomeError):
    pass


class NotDivisor(CyclotomeError):
    pass


class EvenCharacteristic(CyclotomeError):
    pass


class IdentityViolation(CyclotomeError):
    """A Gauss-sum identity failed beyond tolerance; signals a construction bug."""

    def __init__(self, identity, j, deviation):
        self.identity = identity
        self.j = j
        self.deviation = deviation
        super().__init__(f"identity {identity} violated at j={j}: deviation {deviation:.3e}")


class NoSolution(CyclotomeError):
    pass


class CaseMismatch(CyclotomeError):
    pass


class ClosedFormMismatch(CyclotomeError):
    pass


class SchemeMismatch(CyclotomeError):
    pass


class EvenLift(CyclotomeError):
    pass


class BadIndexSet(CyclotomeError):
    pass


class SkewPreconditionFailed(CyclotomeError):
    pass


class NormalizationImpossible(CyclotomeError):
    pass


class ConditionViolated(CyclotomeError):
    """One of the numbered hypotheses of the 3-mod-8 construction failed."""

    def __init__(self, condition, message):
        self.condition = condition
        super().__init__(f"condition ({condition}) violated: {message}")


class PatternMismatch(CyclotomeError):
    pass
