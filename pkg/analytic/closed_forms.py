"""
Closed-form evaluators for the hierarchical scale-free families.

Every evaluator works in exact rational arithmetic and wraps its result
in ExactScalar. Formulas for the clustering of the wheel variants and for
the expected degree sums of the deleted variant are evaluated exactly as
published, including where they disagree with measurement; those gaps are
surfaced by the discrepancy report, never corrected here.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

from analytic.exact import ExactScalar, as_fraction, check_range
from core.exceptions import InvalidParametersError
from model.graph import DegreeClass
from model.params import Variant

Probability = Union[float, Fraction, str]


def _check_mt(m: int, t: int) -> None:
    if m < 2 or t < 0:
        raise InvalidParametersError("Expected m >= 2 and t >= 0", details={"m": m, "t": t})


def _probability(p: Probability) -> Fraction:
    q = as_fraction(p)
    if not 0 <= q <= 1:
        raise InvalidParametersError("Probability outside [0, 1]", details={"p": str(p)})
    return q


def _geometric(m: int, t: int) -> int:
    """Sum of m^i for i in [0, t]."""
    return (m ** (t + 1) - 1) // (m - 1)


# =============================================================================
# SIZE AND DEGREES
# =============================================================================

def counts(m: int, t: int) -> Tuple[ExactScalar, ExactScalar]:
    """Vertex and edge counts: (m^{t+2}-1)/(m-1) and (t+1) m^{t+1}."""
    _check_mt(m, t)
    return (
        ExactScalar.of((m ** (t + 2) - 1) // (m - 1)),
        ExactScalar.of((t + 1) * m ** (t + 1)),
    )


def counts_by_recurrence(m: int, t: int) -> Tuple[int, int]:
    """
    Unroll the growth recurrence V(s) = m V(s-1) + 1,
    E(s) = m E(s-1) + m^{s+1} from the seed star (m+1, m).
    """
    _check_mt(m, t)
    v, e = m + 1, m
    for s in range(1, t + 1):
        v = m * v + 1
        e = m * e + m ** (s + 1)
    return v, e


def average_degree(m: int, t: int) -> ExactScalar:
    """2|E|/|V| = 2(t+1) m^{t+1} (m-1) / (m^{t+2} - 1)."""
    v, e = counts(m, t)
    return ExactScalar.of(Fraction(2 * e.numerator, v.numerator))


def average_degree_growth(m: int, t: int) -> Dict[str, Optional[ExactScalar]]:
    """
    Growth ratios of the average degree.

    ``per_t`` is <k>/t (undefined at t=0); ``per_generation`` is
    <k>/(t+1), which tends to 2(m-1)/m.
    """
    k = average_degree(m, t).value
    return {
        "per_t": ExactScalar.of(k / t) if t > 0 else None,
        "per_generation": ExactScalar.of(k / (t + 1)),
        "limit_per_generation": ExactScalar.of(Fraction(2 * (m - 1), m)),
    }


def degree_table(m: int, t: int) -> List[DegreeClass]:
    """Rows (level, degree, count) for levels 0..t+1."""
    _check_mt(m, t)
    rows = [DegreeClass(level=L, degree=m ** (t + 1 - L), count=m**L) for L in range(t + 1)]
    rows.append(DegreeClass(level=t + 1, degree=t + 1, count=m ** (t + 1)))
    return rows


def degree_histogram_exact(m: int, t: int) -> Dict[int, int]:
    """degree -> vertex count, merging levels that share a degree."""
    hist: Dict[int, int] = {}
    for row in degree_table(m, t):
        hist[row.degree] = hist.get(row.degree, 0) + row.count
    return hist


def cumulative_distribution(m: int, t: int, k: float) -> float:
    """
    Asymptotic cumulative degree distribution: 1/k for k > t+1,
    1/k + 1/2 otherwise. Only meaningful for large t; use
    exact_cumulative_distribution for pointwise values.
    """
    _check_mt(m, t)
    if k < 1:
        raise InvalidParametersError("Degree must be >= 1", details={"k": k})
    return 1.0 / k if k > t + 1 else 1.0 / k + 0.5


def exact_cumulative_distribution(m: int, t: int, k: int) -> ExactScalar:
    """Fraction of vertices with degree >= k, counted from the degree table."""
    v, _ = counts(m, t)
    at_least = sum(c for deg, c in degree_histogram_exact(m, t).items() if deg >= k)
    return ExactScalar.of(Fraction(at_least, v.numerator))


def gamma_exponents() -> Tuple[int, int]:
    """(gamma_alpha, gamma): cumulative exponent 1 and density exponent 2."""
    return 1, 2


# =============================================================================
# DISTANCES AND CLUSTERING
# =============================================================================

def diameter_closed_form(
    variant: Variant, m: int, t: int, p: Optional[Probability] = None
) -> int:
    """
    4 throughout the growth regime t >= 1. At t = 0 the seed's own
    diameter: 2 for the star, 1 for the triangle and K4 wheels, 2 for
    larger wheels; the deleted seed keeps the wheel value only at p = 0.
    """
    _check_mt(m, t)
    variant = Variant(variant)
    if t >= 1:
        return 4
    if variant is Variant.BASE:
        return 2
    wheel = 1 if m <= 3 else 2
    if variant is Variant.WHEEL_SEED:
        return wheel
    if p is None:
        raise InvalidParametersError("Deleted variant needs p")
    return wheel if _probability(p) == 0 else 2


def _clustering_hierarchy_term(m: int, t: int) -> Fraction:
    return sum(
        (Fraction(2 * m ** (t - i), m ** (i + 1) - 1) for i in range(t + 1)),
        Fraction(0),
    )


def clustering_c1(m: int, t: int) -> ExactScalar:
    """Average clustering of the wheel-seeded family as published."""
    v, _ = counts(m, t)
    bottom = Fraction(2 * (t + 1) * m ** (t + 1), (t + 3) * (t + 2))
    return ExactScalar.of((_clustering_hierarchy_term(m, t) + bottom) / v.numerator)


def clustering_c2_expected(m: int, t: int, p: Probability) -> ExactScalar:
    """Expected average clustering of the deleted family as published."""
    v, _ = counts(m, t)
    p = _probability(p)
    q = 1 - p
    bottom = (q**2 * Fraction(2 * (t + 1), (t + 3) * (t + 2)) + Fraction(2, t + 2) * p * q) * m ** (t + 1)
    return ExactScalar.of((q * _clustering_hierarchy_term(m, t) + bottom) / v.numerator)


# =============================================================================
# DEGREE CORRELATIONS
# =============================================================================

@dataclass(frozen=True)
class EdgeDegreeSums:
    """
    Edge-degree sums feeding the Pearson assortativity.

    Attributes:
        edges: |E|
        product_sum: sum over edges of k_i k_j
        degree_sum: sum over edges of (k_i + k_j)
        square_sum: sum over edges of (k_i^2 + k_j^2)
    """
    edges: Fraction
    product_sum: Fraction
    degree_sum: Fraction
    square_sum: Fraction

    def pearson(self) -> Optional[Fraction]:
        """Assortativity from the sums; None when the denominator vanishes."""
        mean_end = self.degree_sum / (2 * self.edges)
        numerator = self.product_sum / self.edges - mean_end**2
        denominator = self.square_sum / (2 * self.edges) - mean_end**2
        if denominator == 0:
            return None
        return numerator / denominator

    def to_dict(self) -> Dict[str, Any]:
        r = self.pearson()
        return {
            "edges": ExactScalar.of(self.edges).to_dict(),
            "product_sum": ExactScalar.of(self.product_sum).to_dict(),
            "degree_sum": ExactScalar.of(self.degree_sum).to_dict(),
            "square_sum": ExactScalar.of(self.square_sum).to_dict(),
            "r": ExactScalar.of(r).to_dict() if r is not None else None,
        }


def base_edge_degree_sums(m: int, t: int) -> EdgeDegreeSums:
    """
    Exact sums over the edges of G(t;m). Level L contributes m^{t+1}
    edges joining a degree m^{t+1-L} ancestor to a degree t+1 bottom.
    """
    _check_mt(m, t)
    M = m ** (t + 1)
    ancestor = [m ** (t + 1 - L) for L in range(t + 1)]
    b = t + 1
    return EdgeDegreeSums(
        edges=Fraction(check_range((t + 1) * M)),
        product_sum=Fraction(check_range(M * b * sum(ancestor))),
        degree_sum=Fraction(check_range(M * (sum(ancestor) + (t + 1) * b))),
        square_sum=Fraction(check_range(M * (sum(k * k for k in ancestor) + (t + 1) * b * b))),
    )


def assortativity_r(m: int, t: int) -> ExactScalar:
    """Closed-form assortativity of G(t;m); -1 at t = 0, tending to 0."""
    _check_mt(m, t)
    mean_end = Fraction(t + 1, 2) + Fraction(m ** (t + 2) - m, (2 * m - 2) * (t + 1))
    numerator = Fraction(m ** (t + 2) - m, m - 1) - mean_end**2
    denominator = (
        Fraction((t + 1) ** 2, 2)
        + Fraction(check_range(m ** (2 * t + 4) - m**2), (2 * m**2 - 2) * (t + 1))
        - mean_end**2
    )
    return ExactScalar.of(numerator / denominator)


@dataclass(frozen=True)
class G2Expectations:
    """Published expected degree sums of the deleted family and the r2 they imply."""
    sums: EdgeDegreeSums
    r2: Optional[Fraction]

    def to_dict(self) -> Dict[str, Any]:
        return {
            **self.sums.to_dict(),
            "r2": ExactScalar.of(self.r2).to_dict() if self.r2 is not None else None,
        }


def g2_expected_sums(m: int, t: int, p: Probability) -> G2Expectations:
    """
    Evaluate the published expectations of |E2|, sum k_i k_j,
    sum (k_i + k_j) and sum (k_i^2 + k_j^2), then combine them through
    the Pearson formula into r2.
    """
    _check_mt(m, t)
    p = _probability(p)
    q = 1 - p
    M = m ** (t + 1)
    geo = _geometric(m, t)                  # sum m^i
    geo_shift = m * geo                     # sum m^{i+1}

    edges = M * (t + 2 - p)
    product_sum = (
        M * (t + 1) * (p**2 * (t + 1) + 2 * p * q * (t + 2))
        + M * (t + 1) * q**2 * (t + 3)
        + q**4 * (t + 3) ** 2 * M
        + 4 * p * q**2 * (p * (t + 2) ** 2 + q * (t + 2) * (t + 3)) * M
    )
    degree_sum = (
        M * (t + 1)
        + q**2 * (t + 3) * geo
        + geo * (p**2 * (t + 1) + 2 * p * q * (t + 2))
        + 4 * p * q**2 * (p * (2 * t + 4) + q * (2 * t + 5)) * M
        + q**4 * (2 * t + 6) * M
    )
    square_sum = (
        M * geo_shift
        + q**2 * (t + 3) ** 2 * geo
        + geo * (p**2 * (t + 1) ** 2 + 2 * p * q * (t + 2) ** 2)
        + 2 * q**2 * (4 * p**2 * (t + 2) ** 2 + q**2 * (t + 3) ** 2) * M
        + 4 * p * q**3 * ((t + 2) ** 2 + (t + 3) ** 2) * M
    )
    sums = EdgeDegreeSums(
        edges=Fraction(check_range(edges)),
        product_sum=Fraction(check_range(product_sum)),
        degree_sum=Fraction(check_range(degree_sum)),
        square_sum=Fraction(check_range(square_sum)),
    )
    return G2Expectations(sums=sums, r2=sums.pearson())


# =============================================================================
# TRAPPING
# =============================================================================

@dataclass(frozen=True)
class HittingClosedForms:
    """
    Hitting times with the trap at the hub.

    Attributes:
        bottom: 2t+1, from any bottom vertex
        intermediate: 2t+2, from levels 1..t (None at t = 0)
        mean: average over all non-trap vertices
        log_ratio: mean / ln|V|
        log_ratio_limit: 2 / ln m
    """
    bottom: ExactScalar
    intermediate: Optional[ExactScalar]
    mean: ExactScalar
    log_ratio: float
    log_ratio_limit: float

    @property
    def in_bracket(self) -> bool:
        """Mean strictly between the bottom and intermediate values."""
        if self.intermediate is None:
            return False
        return self.bottom.value < self.mean.value < self.intermediate.value

    @property
    def log_ratio_gap(self) -> float:
        """Relative distance of mean/ln|V| from 2/ln m."""
        return abs(self.log_ratio - self.log_ratio_limit) / self.log_ratio_limit

    def to_dict(self) -> Dict[str, Any]:
        return {
            "bottom": self.bottom.to_dict(),
            "intermediate": self.intermediate.to_dict() if self.intermediate else None,
            "mean": self.mean.to_dict(),
            "offset_from_2t": self.mean.float - (self.bottom.numerator - 1),
            "log_ratio": self.log_ratio,
            "log_ratio_limit": self.log_ratio_limit,
            "in_bracket": self.in_bracket,
        }


def hitting_closed_forms(m: int, t: int) -> HittingClosedForms:
    """Per-level and mean hitting times of G(t;m) with the trap at the hub."""
    v, _ = counts(m, t)
    intermediate_count = sum(m**L for L in range(1, t + 1))
    bottom_count = m ** (t + 1)
    mean = Fraction((2 * t + 2) * intermediate_count + (2 * t + 1) * bottom_count, v.numerator - 1)
    # log of a huge integer without float overflow
    log_v = math.log(v.numerator)
    return HittingClosedForms(
        bottom=ExactScalar.of(2 * t + 1),
        intermediate=ExactScalar.of(2 * t + 2) if t >= 1 else None,
        mean=ExactScalar.of(mean),
        log_ratio=float(mean) / log_v,
        log_ratio_limit=2.0 / math.log(m),
    )
