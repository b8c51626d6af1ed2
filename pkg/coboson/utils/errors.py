"""
Error Types - Failure categories shared by services, CLI and API
"""
from typing import Any, Dict, Optional


class CobosonError(Exception):
    """Base class for every toolkit failure"""

    exit_code: int = 1
    status_code: int = 500

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, "details": self.details}


class DomainError(CobosonError, ValueError):
    """Parameter outside the domain of a formula"""

    exit_code = 2
    status_code = 400


class InfeasibleFillingError(DomainError):
    """χ_N vanishes so the N-pair state does not exist"""


class UndefinedRatioError(DomainError):
    """Denominator χ_N of a normalization ratio is zero"""


class CoverageError(DomainError):
    """Sampling grid does not cover the orbitals"""


class CapacityError(CobosonError):
    """Requested size exceeds a configured hard limit"""

    exit_code = 4
    status_code = 422


class ConvergenceError(CobosonError):
    """Iterative solver, bracket or fit failed to converge"""

    exit_code = 3


class ResolutionError(ConvergenceError):
    """Grid refinement did not settle the spectrum"""


class AccuracyError(CobosonError):
    """Cancellation exceeds the extended-precision budget"""

    exit_code = 3


class BasisValidationError(CobosonError):
    """Analytic orbitals disagree with the numerical Schmidt modes"""

    exit_code = 3
