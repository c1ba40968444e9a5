# Evaluation module - closed form vs measurement, acceptance suite
from evaluation.comparison import (
    Agreement,
    AnalysisReport,
    Discrepancy,
    analyze,
    shared_discrepancies,
)
from evaluation.acceptance import (
    AcceptanceSuite,
    AcceptanceSummary,
    CriterionResult,
    VerifyLevel,
    run_acceptance,
)

__all__ = [
    "Agreement",
    "AnalysisReport",
    "Discrepancy",
    "analyze",
    "shared_discrepancies",
    "AcceptanceSuite",
    "AcceptanceSummary",
    "CriterionResult",
    "VerifyLevel",
    "run_acceptance",
]
