"""Exception hierarchy shared by all nearspace modules."""


class NearspaceError(Exception):
    pass


class NotPrime(NearspaceError, ValueError):
    pass


class TooLarge(NearspaceError, ValueError):
    pass


class DivisionByZero(NearspaceError, ZeroDivisionError):
    pass


class InvalidDicksonPair(NearspaceError, ValueError):
    pass


class AxiomValidationFailed(NearspaceError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class DimensionMismatch(NearspaceError, ValueError):
    pass


class NotAMember(NearspaceError, ValueError):
    pass


class InternalInconsistency(NearspaceError, AssertionError):
    pass


class CapExceeded(NearspaceError):
    """Raised when a closure would grow past its element cap.

    ``dim`` carries the canonical dimension of the generated subgroup so the
    caller can see why the cap was hit (the final size is ``order ** dim``).
    """

    def __init__(self, message, dim=None):
        super().__init__(message)
        self.dim = dim
