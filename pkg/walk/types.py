"""
Trap specification and result containers for the trapping problem.
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional

import numpy as np

from core.exceptions import DisconnectedGraphError, InvalidParametersError
from empirical.measures import is_connected
from model.graph import GraphInstance


class HittingMethod(str, Enum):
    """How a hitting-time summary was obtained."""
    LINEAR_SOLVE = "linear_solve"
    CLOSED_FORM = "closed_form"
    MONTE_CARLO = "monte_carlo"
    LEVEL_COLLAPSED = "level_collapsed"


@dataclass(frozen=True)
class TrapSpec:
    """A graph with one absorbing vertex (the hub unless stated)."""
    graph: GraphInstance
    trap: int

    @classmethod
    def create(cls, graph: GraphInstance, trap: Optional[int] = None) -> "TrapSpec":
        """
        Validate the trap and the graph.

        Raises:
            InvalidParametersError: trap is not a vertex
            DisconnectedGraphError: some vertex can never reach the trap
        """
        trap = graph.hub if trap is None else int(trap)
        if not 0 <= trap < graph.n:
            raise InvalidParametersError(
                f"Trap {trap} is not a vertex", details={"n": graph.n}
            )
        if not is_connected(graph):
            raise DisconnectedGraphError("Trapping needs a connected graph")
        return cls(graph=graph, trap=trap)

    @property
    def at_hub(self) -> bool:
        return self.trap == self.graph.hub

    def non_trap(self) -> np.ndarray:
        return np.flatnonzero(np.arange(self.graph.n) != self.trap)


def _fraction_dict(value: Optional[Fraction]) -> Optional[Dict[str, Any]]:
    if value is None:
        return None
    return {"exact": f"{value.numerator}/{value.denominator}", "float": float(value)}


@dataclass
class HittingSummary:
    """
    Expected hitting times to the trap.

    Attributes:
        method: How the values were obtained
        mean: Average over non-trap vertices (or over trials)
        per_level: Level -> average hitting time (trap excluded)
        level_counts: Level -> non-trap vertices (or trials) contributing
        per_vertex: Per-vertex values, trap = 0 (solvers only)
        mean_exact / per_level_exact: Rational values when available
        trials, stderr, truncated, flagged: Monte-Carlo bookkeeping
        iterations: Fixed-point sweeps (iterative solve only)
    """
    method: HittingMethod
    mean: float
    per_level: Dict[int, float]
    level_counts: Dict[int, int]
    per_vertex: Optional[np.ndarray] = None
    mean_exact: Optional[Fraction] = None
    per_level_exact: Optional[Dict[int, Fraction]] = None
    trials: Optional[int] = None
    stderr: Optional[float] = None
    per_level_stderr: Dict[int, float] = field(default_factory=dict)
    truncated: int = 0
    flagged: bool = False
    iterations: Optional[int] = None

    @property
    def truncation_rate(self) -> float:
        return self.truncated / self.trials if self.trials else 0.0

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "method": self.method.value,
            "mean": self.mean,
            "mean_exact": _fraction_dict(self.mean_exact),
            "per_level": {str(k): v for k, v in sorted(self.per_level.items())},
            "per_level_exact": (
                {str(k): _fraction_dict(v) for k, v in sorted(self.per_level_exact.items())}
                if self.per_level_exact else None
            ),
            "level_counts": {str(k): v for k, v in sorted(self.level_counts.items())},
            "trials": self.trials,
            "stderr": self.stderr,
            "truncated": self.truncated,
            "truncation_rate": self.truncation_rate,
            "flagged": self.flagged,
            "iterations": self.iterations,
        }

    CSV_COLUMNS = ("method", "level", "count", "hitting_time", "exact", "stderr")

    def csv_rows(self) -> List[Dict[str, Any]]:
        """One row per level plus an ``all`` row for the mean."""
        rows = []
        for level in sorted(self.per_level):
            exact = (self.per_level_exact or {}).get(level)
            rows.append({
                "method": self.method.value,
                "level": level,
                "count": self.level_counts.get(level),
                "hitting_time": self.per_level[level],
                "exact": str(exact) if exact is not None else "",
                "stderr": self.per_level_stderr.get(level, ""),
            })
        rows.append({
            "method": self.method.value,
            "level": "all",
            "count": sum(self.level_counts.values()),
            "hitting_time": self.mean,
            "exact": str(self.mean_exact) if self.mean_exact is not None else "",
            "stderr": self.stderr if self.stderr is not None else "",
        })
        return rows


@dataclass
class HittingDistribution:
    """
    First-passage probabilities P(H = l) for l = 1..horizon.

    ``probabilities[l - 1]`` holds P(H = l).
    """
    source: Optional[int]
    level: Optional[int]
    horizon: int
    probabilities: np.ndarray

    @property
    def absorbed_mass(self) -> float:
        return float(self.probabilities.sum())

    @property
    def tail_mass(self) -> float:
        return max(0.0, 1.0 - self.absorbed_mass)

    @property
    def truncated_mean(self) -> float:
        steps = np.arange(1, self.horizon + 1)
        return float(np.dot(steps, self.probabilities))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source": self.source,
            "level": self.level,
            "horizon": self.horizon,
            "probabilities": self.probabilities.tolist(),
            "tail_mass": self.tail_mass,
            "truncated_mean": self.truncated_mean,
        }

    CSV_COLUMNS = ("step", "probability", "cumulative")

    def csv_rows(self) -> List[Dict[str, Any]]:
        cumulative = np.cumsum(self.probabilities)
        return [
            {"step": l + 1, "probability": float(p), "cumulative": float(c)}
            for l, (p, c) in enumerate(zip(self.probabilities, cumulative))
        ]
