"""Finite-truncation workbench for GNS-type representations of positive
C*-valued maps on non-unital quasi *-algebras."""

from .errors import (
    DegenerateFormError,
    DomainError,
    FormNotPositiveError,
    InconsistentInputError,
    InvalidIdentityError,
    InvalidKernelError,
    InvalidParameterError,
    InvalidWeightError,
    NotInvariantError,
    NumericalError,
    QuasiGnsError,
    SamplingError,
    ShapeError,
    UnsupportedError,
    WindowError,
)

__version__ = "0.1.0"

__all__ = [
    "DegenerateFormError",
    "DomainError",
    "FormNotPositiveError",
    "InconsistentInputError",
    "InvalidIdentityError",
    "InvalidKernelError",
    "InvalidParameterError",
    "InvalidWeightError",
    "NotInvariantError",
    "NumericalError",
    "QuasiGnsError",
    "SamplingError",
    "ShapeError",
    "UnsupportedError",
    "WindowError",
]
