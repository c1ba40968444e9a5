# Analytic module - exact closed forms
from analytic.exact import ExactScalar, as_fraction, check_range
from analytic.closed_forms import (
    EdgeDegreeSums,
    G2Expectations,
    HittingClosedForms,
    assortativity_r,
    average_degree,
    average_degree_growth,
    base_edge_degree_sums,
    clustering_c1,
    clustering_c2_expected,
    counts,
    counts_by_recurrence,
    cumulative_distribution,
    degree_histogram_exact,
    degree_table,
    diameter_closed_form,
    exact_cumulative_distribution,
    g2_expected_sums,
    gamma_exponents,
    hitting_closed_forms,
)
from analytic.report import ClosedFormReport, closed_form_report

__all__ = [
    "ExactScalar",
    "as_fraction",
    "check_range",
    "EdgeDegreeSums",
    "G2Expectations",
    "HittingClosedForms",
    "assortativity_r",
    "average_degree",
    "average_degree_growth",
    "base_edge_degree_sums",
    "clustering_c1",
    "clustering_c2_expected",
    "counts",
    "counts_by_recurrence",
    "cumulative_distribution",
    "degree_histogram_exact",
    "degree_table",
    "diameter_closed_form",
    "exact_cumulative_distribution",
    "g2_expected_sums",
    "gamma_exponents",
    "hitting_closed_forms",
    "ClosedFormReport",
    "closed_form_report",
]
