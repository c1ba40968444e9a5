"""
Custom exceptions for the hierarchical graph toolkit.
Provides specific error types for different failure scenarios.
"""

from typing import Any, Dict, Optional


class HierarchyToolkitError(Exception):
    """Base exception for all toolkit errors."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.details = details or {}
        super().__init__(self.message)

    def __str__(self) -> str:
        if self.details:
            return f"{self.message} | Details: {self.details}"
        return self.message


class ConfigurationError(HierarchyToolkitError):
    """Raised when there's a configuration issue."""
    pass


class InvalidParametersError(HierarchyToolkitError):
    """Raised when model or command parameters are out of range."""
    pass


class SizeCapExceededError(HierarchyToolkitError):
    """Raised when an instance would exceed the configured vertex cap."""
    pass


class GraphFormatError(HierarchyToolkitError):
    """Raised when an edge stream cannot be parsed."""
    pass


class NonSimpleGraphError(GraphFormatError):
    """Raised on self-loops or repeated edges in imported data."""
    pass


class DisconnectedGraphError(HierarchyToolkitError):
    """Raised when an operation needs a connected graph."""
    pass


class ArithmeticOverflowError(HierarchyToolkitError):
    """Raised in checked mode when a rational leaves the 128-bit range."""
    pass


class UndefinedMeasureError(HierarchyToolkitError):
    """
    Raised when a statistic has a zero denominator, e.g. Pearson
    assortativity of an edge set whose endpoints all share one degree.
    """
    pass


class InsufficientDegreeClassesError(HierarchyToolkitError):
    """Raised when a power-law fit has too few degree classes."""
    pass


class SolverError(HierarchyToolkitError):
    """Raised when a hitting-time solve cannot be carried out."""
    pass


class SimulationError(HierarchyToolkitError):
    """Raised when Monte-Carlo parameters are unusable."""
    pass


class ExportError(HierarchyToolkitError):
    """Raised when writing or reading an artifact fails."""
    pass
