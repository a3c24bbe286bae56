"""Exception hierarchy shared by all modules."""


class AdelicError(Exception):
    """Base class; carries an optional machine-readable witness."""

    def __init__(self, message: str = "", witness=None):
        super().__init__(message)
        self.witness = witness


class ReduciblePolynomial(AdelicError):
    pass


class NonMonic(AdelicError):
    pass


class DivisionByZero(AdelicError, ZeroDivisionError):
    pass


class FieldMismatch(AdelicError):
    pass


class ZeroInput(AdelicError, ValueError):
    pass


class IndexDivisor(AdelicError):
    pass


class PrecisionLoss(AdelicError):
    pass


class OutsideConvergenceDomain(AdelicError):
    pass


class ZeroSequenceError(AdelicError):
    pass


class BOutOfRange(AdelicError):
    pass


class RootOfUnityInput(AdelicError):
    pass


class NotNormalized(AdelicError):
    pass


class NotStable(AdelicError):
    pass


class AllCoefficientsIndistinguishableFromZero(AdelicError):
    pass


class InconsistentOverlap(AdelicError):
    pass


class StabilityError(AdelicError):
    pass


class UnsupportedExactForm(AdelicError):
    pass


class NonIntegerDegree(AdelicError):
    pass


class NonIntegerFixedPointCount(AdelicError):
    pass


class BudgetExceeded(AdelicError):
    pass


class SingularCurve(AdelicError):
    pass


class ManifestError(AdelicError):
    pass


class VerificationFailure(AdelicError):
    """An internal cross-check disagreed; the arithmetic, not the input, is at fault."""
