# Core module - logging and exceptions
from core.logger import setup_logger, get_logger
from core.exceptions import (
    HierarchyToolkitError,
    ConfigurationError,
    InvalidParametersError,
    SizeCapExceededError,
    GraphFormatError,
    NonSimpleGraphError,
    DisconnectedGraphError,
    ArithmeticOverflowError,
    UndefinedMeasureError,
    InsufficientDegreeClassesError,
    SolverError,
    SimulationError,
    ExportError,
)

__all__ = [
    "setup_logger",
    "get_logger",
    "HierarchyToolkitError",
    "ConfigurationError",
    "InvalidParametersError",
    "SizeCapExceededError",
    "GraphFormatError",
    "NonSimpleGraphError",
    "DisconnectedGraphError",
    "ArithmeticOverflowError",
    "UndefinedMeasureError",
    "InsufficientDegreeClassesError",
    "SolverError",
    "SimulationError",
    "ExportError",
]
