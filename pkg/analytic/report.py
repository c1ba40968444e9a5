"""
ClosedFormReport: every closed-form quantity for one (variant, m, t, p).
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from analytic.closed_forms import (
    G2Expectations,
    HittingClosedForms,
    assortativity_r,
    average_degree,
    average_degree_growth,
    clustering_c1,
    clustering_c2_expected,
    counts,
    degree_table,
    diameter_closed_form,
    g2_expected_sums,
    gamma_exponents,
    hitting_closed_forms,
)
from analytic.exact import ExactScalar
from core.logger import get_logger
from model.builders import rim_edge_count
from model.graph import DegreeClass
from model.params import Variant

logger = get_logger(__name__)


@dataclass
class ClosedFormReport:
    """
    Closed-form values for one parameter point.

    Attributes:
        variant, m, t, p: The parameter point (p only for the deleted family)
        vertices: Exact vertex count (shared by all three families)
        edges: Edge count of this variant; the wheel adds its rim edges and
            the deleted family reports the expected count over seeds
        average_degree: 2|E|/|V| for this variant
        diameter: Closed-form diameter for this variant
        gamma_alpha, gamma: Power-law exponents
        clustering: 0 for Base, the published wheel formula for the wheel
            family, the published expectation for the deleted family
        assortativity: Closed-form r(t;m) of the star-seeded graph
        g2: Published expectations for the deleted family
        hitting: Trapping closed forms (star-seeded family only)
    """
    variant: Variant
    m: int
    t: int
    p: Optional[float]
    vertices: ExactScalar
    edges: ExactScalar
    average_degree: ExactScalar
    average_degree_growth: Dict[str, Optional[ExactScalar]]
    degree_table: List[DegreeClass]
    diameter: int
    gamma_alpha: int
    gamma: int
    clustering: ExactScalar
    assortativity: ExactScalar
    g2: Optional[G2Expectations] = None
    hitting: Optional[HittingClosedForms] = None
    notes: List[str] = field(default_factory=list)

    def header(self) -> str:
        """One-line summary for console output."""
        return (
            f"{self.variant.value} m={self.m} t={self.t}"
            + (f" p={self.p:g}" if self.p is not None else "")
            + f" | |V|={self.vertices} |E|={self.edges} D={self.diameter}"
            f" <k>={self.average_degree.float:.6g} r={self.assortativity.float:.6g}"
        )

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "variant": self.variant.value,
            "m": self.m,
            "t": self.t,
            "p": self.p,
            "vertices": self.vertices.to_dict(),
            "edges": self.edges.to_dict(),
            "average_degree": self.average_degree.to_dict(),
            "average_degree_growth": {
                k: v.to_dict() if v is not None else None
                for k, v in self.average_degree_growth.items()
            },
            "degree_table": [row.to_dict() for row in self.degree_table],
            "diameter": self.diameter,
            "gamma_alpha": self.gamma_alpha,
            "gamma": self.gamma,
            "clustering": self.clustering.to_dict(),
            "assortativity": self.assortativity.to_dict(),
            "g2": self.g2.to_dict() if self.g2 else None,
            "hitting": self.hitting.to_dict() if self.hitting else None,
            "notes": self.notes,
        }


def closed_form_report(
    variant: Variant, m: int, t: int, p: Optional[float] = None
) -> ClosedFormReport:
    """
    Evaluate every closed form for one parameter point.

    Args:
        variant: Graph family
        m: Branching count
        t: Generation index
        p: Deletion probability (deleted family only)

    Returns:
        ClosedFormReport
    """
    variant = Variant(variant)
    v, e = counts(m, t)
    gamma_alpha, gamma = gamma_exponents()
    notes: List[str] = []

    g2 = g2_expected_sums(m, t, p) if variant is Variant.WHEEL_DELETED else None
    if variant is Variant.BASE:
        clustering = ExactScalar.of(0)
        average = average_degree(m, t)
    elif variant is Variant.WHEEL_SEED:
        clustering = clustering_c1(m, t)
        e = ExactScalar.of(e.numerator + rim_edge_count(m, t))
        average = ExactScalar.of(Fraction(2 * e.numerator, v.numerator))
        notes.append("wheel clustering follows the published formula; compare with the measured value")
    else:
        clustering = clustering_c2_expected(m, t, p)
        e = ExactScalar.of(g2.sums.edges)
        average = ExactScalar.of(2 * g2.sums.edges / v.numerator)
        notes.append("deleted-family clustering is a published expectation over seeds")

    report = ClosedFormReport(
        variant=variant,
        m=m,
        t=t,
        p=p if variant is Variant.WHEEL_DELETED else None,
        vertices=v,
        edges=e,
        average_degree=average,
        average_degree_growth=average_degree_growth(m, t),
        degree_table=degree_table(m, t),
        diameter=diameter_closed_form(variant, m, t, p),
        gamma_alpha=gamma_alpha,
        gamma=gamma,
        clustering=clustering,
        assortativity=assortativity_r(m, t),
        g2=g2,
        hitting=hitting_closed_forms(m, t) if variant is Variant.BASE else None,
        notes=notes,
    )
    logger.debug(f"Closed forms evaluated for {variant.value} m={m} t={t} p={p}")
    return report
