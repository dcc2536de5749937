"""Exception types raised by the workbench."""


class McKayError(Exception):
    """Base class for all workbench errors."""


class InvalidGroup(McKayError, ValueError):
    pass


class NotPrime(InvalidGroup):
    pass


class DeterminantNotOne(InvalidGroup):
    pass


class NotFree(InvalidGroup):
    pass


class IndexOutOfRange(McKayError, IndexError):
    pass


class SingularMatrix(McKayError, ArithmeticError):
    pass


class NonRationalResult(McKayError, ArithmeticError):
    pass


class ZeroDenominator(McKayError, ZeroDivisionError):
    pass


class InvalidTheta(McKayError, ValueError):
    pass


class NotGeneric(McKayError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PatternInfeasible(McKayError, ValueError):
    pass


class MaxIterExceeded(McKayError, RuntimeError):
    def __init__(self, message, residual=None, x=None):
        super().__init__(message)
        self.residual = residual
        self.x = x


class DivisionByZero(McKayError, ZeroDivisionError):
    pass
