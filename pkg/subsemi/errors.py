from __future__ import annotations

from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover
    from .clifford import ValidationReport


class SubsemiError(ValueError):
    """Base class for every domain error raised by subsemi."""


class ConfigError(SubsemiError):
    pass


class AdmissibilityError(SubsemiError):
    def __init__(self, n: int, m: int, rho: int):
        super().__init__(f"No Clifford module with m={m} generators on R^{n}: need m < rho({n}) = {rho}")
        self.n = n
        self.m = m
        self.rho = rho


class DimensionMismatchError(SubsemiError):
    pass


class SignatureError(SubsemiError):
    pass


class InvalidGeneratorsError(SubsemiError):
    def __init__(self, report: "ValidationReport"):
        failed = ", ".join(report.failed_names) or "unknown"
        super().__init__(f"Generator set failed validation: {failed}")
        self.report = report


class ZeroCenterVelocityError(SubsemiError):
    def __init__(self, message: str = "Vertical vector u is zero; A = eta j(u) vanishes and has no classification"):
        super().__init__(message)


class SizeLimitExceededError(SubsemiError):
    pass


class NotSkewSymmetricError(SubsemiError):
    pass


class IndexOutOfRangeError(SubsemiError, IndexError):
    pass


class InvalidRangeError(SubsemiError):
    pass


class NonUniformGridError(SubsemiError):
    pass


class SpectralError(SubsemiError):
    """Raised when the eigenvalues of A cannot be grouped into pairs and quartets."""
