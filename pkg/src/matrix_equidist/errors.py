"""Exception hierarchy shared by every module."""


class MatrixEquidistError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(MatrixEquidistError, ValueError):
    pass


class ModulusMismatch(MatrixEquidistError, ValueError):
    pass


class NotPrime(MatrixEquidistError, ValueError):
    pass


class Singular(MatrixEquidistError, ArithmeticError):
    """The matrix has determinant zero mod p."""


class NotAUnit(MatrixEquidistError, ArithmeticError):
    pass


class MembershipViolation(MatrixEquidistError, ValueError):
    """An input matrix is not a member of the group the operation requires."""


class IndexOverflow(MatrixEquidistError, OverflowError):
    """A count or index does not fit in 64 bits."""


class DeskScaleExceeded(MatrixEquidistError, ValueError):
    """An exhaustive scan would exceed the configured size guard."""


class CombinatorialBlowup(MatrixEquidistError, ValueError):
    """Too many frequency vectors for the ETK sum."""


class ConditionViolated(MatrixEquidistError, ValueError):
    pass
