"""
Custom Exception Classes

Defines all custom exceptions used throughout the toolkit.
Organized by error category so callers can map numerical faults,
infeasibility and configuration/IO problems to distinct handling.
"""

from pathlib import Path


class MaMaxMinError(Exception):
    """Base exception for all toolkit errors."""


class SingularMatrixError(MaMaxMinError):
    """Raised when a linear solve meets a pivot below the singularity threshold."""

    def __init__(self, operation: str, pivot: float, threshold: float) -> None:
        self.operation = operation
        self.pivot = pivot
        self.threshold = threshold
        super().__init__(
            f"Singular matrix in '{operation}': pivot {pivot:.3e} "
            f"below threshold {threshold:.3e}"
        )


class RankDeficientError(SingularMatrixError):
    """Raised when the channel Gram matrix of a ZF receiver is singular."""


class DegenerateCombinerError(MaMaxMinError):
    """Raised when a combining vector has zero norm."""

    def __init__(self, user_index: int) -> None:
        self.user_index = user_index
        super().__init__(f"Combining vector for user {user_index} has zero norm")


class InfeasiblePowerError(MaMaxMinError):
    """Raised when no admissible power vector equalizes all SINRs at eta."""

    def __init__(self, eta: float, reason: str) -> None:
        self.eta = eta
        self.reason = reason
        super().__init__(f"Target SINR {eta:.6g} infeasible: {reason}")


class RegionTooSmallError(MaMaxMinError):
    """Raised when a fixed array layout does not fit in the movement region."""

    def __init__(self, num_antennas: int, span_m: float, region_side_m: float) -> None:
        self.num_antennas = num_antennas
        self.span_m = span_m
        self.region_side_m = region_side_m
        super().__init__(
            f"Array of {num_antennas} antennas spans {span_m:.4g} m, "
            f"exceeding region side {region_side_m:.4g} m"
        )


class ConfigurationError(MaMaxMinError):
    """Raised when configuration is invalid."""

    def __init__(self, config_name: str, reason: str) -> None:
        self.config_name = config_name
        self.reason = reason
        super().__init__(f"Configuration error in '{config_name}': {reason}")


class ResultsWriteError(MaMaxMinError):
    """Raised when result serialization to disk fails."""

    def __init__(self, path: Path | str, reason: str) -> None:
        self.path = str(path)
        self.reason = reason
        super().__init__(f"Failed to write results to '{self.path}': {reason}")
