"""
Closed form against measurement for one instance.

The ``agreement`` block lists quantities whose closed form is exact for
the instance at hand; the ``discrepancy`` block lists published formulas
known to be asymptotic, expected-value only, or inconsistent with direct
counting, with the size of the gap.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional

from analytic.closed_forms import (
    clustering_c1,
    cumulative_distribution,
    degree_histogram_exact,
    exact_cumulative_distribution,
)
from analytic.report import ClosedFormReport, closed_form_report
from core.logger import get_logger
from empirical.measures import DiameterMode, MeasuredReport, measure
from model.graph import GraphInstance
from model.params import Variant

logger = get_logger(__name__)

EXACT_TOLERANCE = 1e-9


@dataclass
class Agreement:
    """One closed-form value next to its measured counterpart."""
    quantity: str
    closed_form: float
    measured: Optional[float]
    exact: Optional[str] = None
    tolerance: float = EXACT_TOLERANCE

    @property
    def abs_diff(self) -> Optional[float]:
        if self.measured is None:
            return None
        return abs(self.closed_form - self.measured)

    @property
    def agrees(self) -> bool:
        return self.abs_diff is not None and self.abs_diff <= self.tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "quantity": self.quantity,
            "closed_form": self.closed_form,
            "exact": self.exact,
            "measured": self.measured,
            "abs_diff": self.abs_diff,
            "agrees": self.agrees,
        }


@dataclass
class Discrepancy:
    """A reported-only gap between a published formula and a reference value."""
    name: str
    closed_form: Optional[float]
    reference: Optional[float]
    note: str
    interval: Optional[List[float]] = None

    @property
    def gap(self) -> Optional[float]:
        if self.closed_form is None or self.reference is None:
            return None
        return self.closed_form - self.reference

    @property
    def flagged(self) -> bool:
        if self.interval is not None and self.closed_form is not None:
            return not self.interval[0] <= self.closed_form <= self.interval[1]
        return self.gap is not None and abs(self.gap) > EXACT_TOLERANCE

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "closed_form": self.closed_form,
            "reference": self.reference,
            "gap": self.gap,
            "interval": self.interval,
            "flagged": self.flagged,
            "note": self.note,
        }


@dataclass
class AnalysisReport:
    """Combined closed-form and measured report for one instance."""
    closed_forms: ClosedFormReport
    measured: MeasuredReport
    agreement: List[Agreement] = field(default_factory=list)
    discrepancy: List[Discrepancy] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "closed_forms": self.closed_forms.to_dict(),
            "measured": self.measured.to_dict(),
            "agreement": [a.to_dict() for a in self.agreement],
            "discrepancy": [d.to_dict() for d in self.discrepancy],
        }

    CSV_COLUMNS = ("section", "quantity", "closed_form", "measured", "abs_diff", "flag")

    def csv_rows(self) -> List[Dict[str, Any]]:
        rows = [
            {
                "section": "agreement",
                "quantity": a.quantity,
                "closed_form": a.closed_form,
                "measured": a.measured,
                "abs_diff": a.abs_diff,
                "flag": not a.agrees,
            }
            for a in self.agreement
        ]
        rows += [
            {
                "section": "discrepancy",
                "quantity": d.name,
                "closed_form": d.closed_form,
                "measured": d.reference,
                "abs_diff": abs(d.gap) if d.gap is not None else None,
                "flag": d.flagged,
            }
            for d in self.discrepancy
        ]
        return rows


def _fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def shared_discrepancies(m: int, t: int) -> List[Discrepancy]:
    """Average-degree constant and pointwise cumulative distribution gaps."""
    items = []
    if t >= 1:
        k = closed_form_report(Variant.BASE, m, t).average_degree.float
        items.append(Discrepancy(
            name="average_degree_per_t",
            closed_form=2.0,
            reference=k / t,
            note="published growth constant 2 against the exact <k>/t",
        ))
    worst: Optional[Discrepancy] = None
    for degree in sorted(degree_histogram_exact(m, t)):
        asymptotic = cumulative_distribution(m, t, degree)
        exact = exact_cumulative_distribution(m, t, degree).float
        if worst is None or abs(asymptotic - exact) > abs(worst.gap or 0.0):
            worst = Discrepancy(
                name=f"cumulative_distribution_k{degree}",
                closed_form=asymptotic,
                reference=exact,
                note="asymptotic cumulative distribution against exact counts (largest gap)",
            )
    if worst is not None:
        items.append(worst)
    return items


def analyze(
    g: GraphInstance,
    include_diameter: bool = True,
    diameter_mode: DiameterMode = DiameterMode.EXACT,
) -> AnalysisReport:
    """
    Evaluate closed forms and measurements for one instance and line
    them up.

    Args:
        g: Graph instance
        include_diameter: Run the BFS diameter
        diameter_mode: Exact, bounded or sampled BFS

    Returns:
        AnalysisReport
    """
    p = g.params
    closed = closed_form_report(p.variant, p.m, p.t, p.p)
    measured = measure(g, diameter_mode=diameter_mode, include_diameter=include_diameter)
    report = AnalysisReport(closed_forms=closed, measured=measured)

    report.agreement.append(Agreement("vertices", closed.vertices.float, float(measured.n), str(closed.vertices)))
    if measured.diameter is not None:
        report.agreement.append(Agreement("diameter", float(closed.diameter), float(measured.diameter.value)))

    if p.variant is Variant.BASE:
        report.agreement.append(Agreement("edges", closed.edges.float, float(measured.edges), str(closed.edges)))
        report.agreement.append(Agreement("clustering", 0.0, measured.clustering.average, "0"))
        measured_r = float(measured.assortativity) if measured.assortativity is not None else None
        report.agreement.append(Agreement(
            "assortativity", closed.assortativity.float, measured_r,
            _fraction_text(closed.assortativity.value),
        ))
        histogram_ok = measured.histogram.counts == degree_histogram_exact(p.m, p.t)
        report.agreement.append(Agreement("degree_table", 1.0, 1.0 if histogram_ok else 0.0))
    elif p.variant is Variant.WHEEL_SEED:
        report.agreement.append(Agreement("edges", closed.edges.float, float(measured.edges), str(closed.edges)))
        report.discrepancy.append(Discrepancy(
            name="clustering_wheel",
            closed_form=clustering_c1(p.m, p.t).float,
            reference=measured.clustering.average,
            note="published wheel clustering against triangle counting",
        ))
    else:
        g2 = closed.g2
        report.discrepancy.append(Discrepancy(
            name="edges_expected",
            closed_form=float(g2.sums.edges),
            reference=float(measured.edges),
            note="expected edge count against one seeded sample",
        ))
        report.discrepancy.append(Discrepancy(
            name="clustering_expected",
            closed_form=closed.clustering.float,
            reference=measured.clustering.average,
            note="expected clustering against one seeded sample",
        ))
        if g2.r2 is not None and measured.assortativity is not None:
            report.discrepancy.append(Discrepancy(
                name="assortativity_r2",
                closed_form=float(g2.r2),
                reference=float(measured.assortativity),
                note="published r2 against the sample's Pearson value",
            ))

    report.discrepancy.extend(shared_discrepancies(p.m, p.t))
    flagged = [a.quantity for a in report.agreement if not a.agrees]
    if flagged:
        logger.warning(f"Closed form and measurement disagree on {flagged} for {p.label}")
    return report
