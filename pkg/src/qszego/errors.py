"""Exception hierarchy shared by every module of the package."""


class SzegoError(Exception):
    """Base class for all package errors."""


class ZeroDivision(SzegoError, ZeroDivisionError):
    """Inversion of a quaternion whose norm is at or below the singular threshold."""


class LengthMismatch(SzegoError, ValueError):
    pass


class SizeMismatch(SzegoError, ValueError):
    pass


class NotOnBoundary(SzegoError, ValueError):
    pass


class NotSymplectic(SzegoError, ValueError):
    pass


class NotUnit(SzegoError, ValueError):
    pass


class NonpositiveScale(SzegoError, ValueError):
    pass


class DomainMargin(SzegoError, ValueError):
    """A finite-difference stencil leaves the function's domain."""


class Singular(SzegoError, ArithmeticError):
    """Kernel argument too close to the singularity at zero."""


class RangeError(SzegoError, ValueError):
    pass


class PoleError(SzegoError, ArithmeticError):
    """Gamma/Pochhammer evaluated at a pole."""


class NumericalFailure(SzegoError, ArithmeticError):
    """Base for quadrature failures (CLI exit code 3)."""


class TailTooFat(NumericalFailure):
    pass


class NonFinite(NumericalFailure):
    pass
