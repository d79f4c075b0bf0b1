"""Exception hierarchy shared by all lmoment modules."""


class LmomentError(Exception):
    """Base class for all toolkit errors."""


class UsageError(LmomentError):
    """Bad arguments / unrecognized command (CLI exit code 1)."""


class DataError(LmomentError):
    """Bad or insufficient input data (CLI exit code 2)."""


class NumericalError(LmomentError):
    """A numerical certificate could not be met (CLI exit code 3)."""


# --- modulus / character errors ---

class CompositeModulus(UsageError):
    pass


class ModulusTooSmall(UsageError):
    pass


class NotCoprime(UsageError):
    pass


class PrincipalCharacter(UsageError):
    pass


class OddCharacter(UsageError):
    pass


# --- eigenvalue data errors ---

class FormatError(DataError):
    pass


class BoundViolation(DataError):
    pass


class GapError(DataError):
    pass


class InsufficientData(DataError):
    pass


# --- numerics ---

class PoleError(NumericalError):
    pass


class QuadratureFailure(NumericalError):
    pass


class NonConvergence(NumericalError):
    pass
