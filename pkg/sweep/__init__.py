# Sweep module - parameter grids and figure data
from sweep.spec import Quantity, SweepCell, SweepSpec, figure_preset
from sweep.runner import CSV_COLUMNS, SweepResult, closed_value, evaluate_cell, format_number, run_sweep

__all__ = [
    "Quantity",
    "SweepCell",
    "SweepSpec",
    "figure_preset",
    "CSV_COLUMNS",
    "SweepResult",
    "closed_value",
    "evaluate_cell",
    "format_number",
    "run_sweep",
]
