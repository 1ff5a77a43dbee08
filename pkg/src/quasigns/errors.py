"""Exception hierarchy."""


class QuasiGnsError(Exception):
    pass


class InvalidParameterError(QuasiGnsError, ValueError):
    pass


class DomainError(QuasiGnsError, ValueError):
    pass


class FormNotPositiveError(QuasiGnsError):
    pass


class SamplingError(QuasiGnsError):
    pass


class InvalidIdentityError(QuasiGnsError):
    pass


class NotInvariantError(QuasiGnsError):
    pass


class DegenerateFormError(QuasiGnsError):
    pass


class InconsistentInputError(QuasiGnsError):
    pass


class UnsupportedError(QuasiGnsError):
    pass


class ShapeError(QuasiGnsError, ValueError):
    pass


class NumericalError(QuasiGnsError):
    pass


class WindowError(QuasiGnsError):
    """Requested power lies outside the cyclic truncation's validity window."""


class InvalidWeightError(InvalidParameterError):
    pass


class InvalidKernelError(InvalidParameterError):
    pass
