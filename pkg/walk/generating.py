"""
First-passage distributions and their generating function.

For a bottom vertex of G(t;m) with the trap at the hub the walk returns
to the bottom layer every two steps unless absorbed, so

    P_t(x) = x / ((t + 1) - t x^2),

with P(H = 2k + 1) = (1/(t+1)) (t/(t+1))^k and mean P_t'(1) = 2t + 1.
A vertex at level 1..t first steps to the bottom layer, giving x P_t(x).
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Union

import numpy as np

from analytic.closed_forms import hitting_closed_forms
from analytic.exact import ExactScalar
from core.exceptions import InvalidParametersError
from core.logger import get_logger
from walk.solvers import transition_matrix
from walk.types import HittingDistribution, HittingMethod, HittingSummary, TrapSpec

logger = get_logger(__name__)

Number = Union[int, float, Fraction]


def hitting_distribution(
    spec: TrapSpec,
    source: Optional[int] = None,
    horizon: int = 64,
    level: Optional[int] = None,
) -> HittingDistribution:
    """
    Propagate the walk with the trap row and column removed.

    The start is the indicator of ``source``, or the uniform mix over the
    non-trap vertices of ``level``. P(H = l) is the mass that moves into
    the trap at step l.

    Args:
        spec: Graph and trap
        source: Start vertex
        horizon: Number of steps S
        level: Start uniformly over a level instead of one vertex

    Returns:
        HittingDistribution with P(H = l), l = 1..S
    """
    if horizon < 1:
        raise InvalidParametersError("Horizon must be >= 1", details={"horizon": horizon})
    if (source is None) == (level is None):
        raise InvalidParametersError("Give exactly one of source or level")

    g = spec.graph
    others = spec.non_trap()
    position = np.full(g.n, -1, dtype=np.int64)
    position[others] = np.arange(others.size)

    P = transition_matrix(spec)
    Q_T = P[others][:, others].T.tocsr()
    into_trap = np.asarray(P[others][:, [spec.trap]].todense()).ravel()

    x = np.zeros(others.size)
    if source is not None:
        if source == spec.trap or not 0 <= source < g.n:
            raise InvalidParametersError("Source must be a non-trap vertex", details={"source": source})
        x[position[source]] = 1.0
    else:
        members = np.flatnonzero((g.level == level) & (np.arange(g.n) != spec.trap))
        if members.size == 0:
            raise InvalidParametersError(f"No non-trap vertex at level {level}")
        x[position[members]] = 1.0 / members.size

    probabilities = np.empty(horizon)
    for step in range(horizon):
        probabilities[step] = float(np.dot(x, into_trap))
        x = Q_T @ x
    return HittingDistribution(source=source, level=level, horizon=horizon, probabilities=probabilities)


@dataclass(frozen=True)
class GeneratingFunction:
    """P_t(x) = x / ((t+1) - t x^2) for a bottom start; shifted by x for levels 1..t."""
    t: int
    shift: int = 0

    def evaluate(self, x: Number) -> Number:
        x = Fraction(x) if not isinstance(x, float) else x
        return x ** (1 + self.shift) / ((self.t + 1) - self.t * x * x)

    def derivative(self, x: Number) -> Number:
        """d/dx of x^s P_t(x)."""
        x = Fraction(x) if not isinstance(x, float) else x
        t = self.t
        denom = (t + 1) - t * x * x
        base = x / denom
        base_prime = ((t + 1) + t * x * x) / denom**2
        if self.shift == 0:
            return base_prime
        return x**self.shift * base_prime + self.shift * x ** (self.shift - 1) * base

    def coefficients(self, count: int) -> List[Fraction]:
        """Exact P(H = l) for l = 1..count."""
        t = self.t
        coeffs = []
        for l in range(1, count + 1):
            j = l - self.shift
            if j >= 1 and j % 2 == 1:
                coeffs.append(Fraction(1, t + 1) * Fraction(t, t + 1) ** ((j - 1) // 2))
            else:
                coeffs.append(Fraction(0))
        return coeffs

    @property
    def normalization(self) -> Fraction:
        return Fraction(self.evaluate(Fraction(1)))

    @property
    def mean(self) -> Fraction:
        return Fraction(self.derivative(Fraction(1)))


def generating_function_moments(m: int, t: int, level: Optional[int] = None) -> GeneratingFunction:
    """
    Generating function of the first-passage time to the hub of G(t;m).

    Args:
        m: Branching count
        t: Generation index
        level: Start level, bottom (t+1) by default
    """
    if m < 2 or t < 0:
        raise InvalidParametersError("Expected m >= 2 and t >= 0", details={"m": m, "t": t})
    level = t + 1 if level is None else level
    if not 1 <= level <= t + 1:
        raise InvalidParametersError(f"Level {level} outside [1, {t + 1}]")
    return GeneratingFunction(t=t, shift=0 if level == t + 1 else 1)


def mean_hitting_closed(m: int, t: int) -> ExactScalar:
    """Average hitting time to the hub over all non-hub vertices of G(t;m)."""
    return hitting_closed_forms(m, t).mean


def closed_form_summary(m: int, t: int) -> HittingSummary:
    """Closed-form hitting times as a HittingSummary."""
    forms = hitting_closed_forms(m, t)
    per_level_exact = {L: Fraction(2 * t + 2) for L in range(1, t + 1)}
    per_level_exact[t + 1] = Fraction(2 * t + 1)
    return HittingSummary(
        method=HittingMethod.CLOSED_FORM,
        mean=forms.mean.float,
        per_level={L: float(v) for L, v in per_level_exact.items()},
        level_counts={L: m**L for L in range(1, t + 2)},
        mean_exact=forms.mean.value,
        per_level_exact=per_level_exact,
    )
