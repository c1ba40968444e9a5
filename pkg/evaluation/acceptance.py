"""
Acceptance suite behind ``verify``.

Twelve criteria check the closed forms against built instances. Asserted
criteria decide the exit status; reported-only comparisons are collected
as Discrepancy entries and written to the discrepancy report.
"""

import json
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np
from tqdm import tqdm

from analytic.closed_forms import (
    assortativity_r,
    clustering_c1,
    clustering_c2_expected,
    counts,
    counts_by_recurrence,
    degree_histogram_exact,
    g2_expected_sums,
    hitting_closed_forms,
)
from core.exceptions import ExportError, HierarchyToolkitError
from core.logger import get_logger
from empirical.measures import (
    DiameterMode,
    assortativity_pearson,
    average_local_clustering,
    degree_histogram,
    diameter_bfs,
    edge_degree_sums,
    powerlaw_slope,
)
from evaluation.comparison import Discrepancy, shared_discrepancies
from model.builders import build_base, build_deleted, build_wheel
from model.graph import GraphInstance
from model.reference import build_literal, degree_level_profile
from walk.generating import mean_hitting_closed
from walk.simulate import simulate_walks
from walk.solvers import exact_hitting_solve, level_collapsed_solve
from walk.types import TrapSpec

logger = get_logger(__name__)

MC_SEED = 20240601
FLOAT_TOLERANCE = 1e-9


class VerifyLevel(str, Enum):
    """Suite depth."""
    FAST = "fast"
    FULL = "full"


@dataclass
class CriterionResult:
    """Outcome of one acceptance criterion."""
    number: int
    name: str
    asserted: bool
    checks: int = 0
    failures: List[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures

    @property
    def status(self) -> str:
        if not self.asserted:
            return "REPORT"
        return "PASS" if self.passed else "FAIL"

    def check(self, condition: bool, message: str) -> None:
        self.checks += 1
        if not condition:
            self.failures.append(message)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "number": self.number,
            "name": self.name,
            "asserted": self.asserted,
            "status": self.status,
            "checks": self.checks,
            "failures": self.failures,
            "elapsed": round(self.elapsed, 3),
        }


@dataclass
class AcceptanceSummary:
    """All criterion results plus the reported-only discrepancies."""
    level: VerifyLevel
    results: List[CriterionResult]
    discrepancies: List[Discrepancy]
    timestamp: str = field(default_factory=lambda: datetime.now().isoformat())

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results if r.asserted)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "level": self.level.value,
            "passed": self.passed,
            "timestamp": self.timestamp,
            "criteria": [r.to_dict() for r in self.results],
            "discrepancies": [d.to_dict() for d in self.discrepancies],
        }

    def write_report(self, path: Path) -> Path:
        """Write the discrepancy report as JSON."""
        path = Path(path)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(self.to_dict(), indent=2), encoding="utf-8")
        except OSError as e:
            raise ExportError(f"Cannot write {path}", details={"error": str(e)}) from e
        logger.info(f"Discrepancy report written to {path}")
        return path


def _profile(g: GraphInstance) -> Dict[Tuple[int, int], int]:
    return dict(Counter(zip(g.level.tolist(), g.degrees.tolist())))


def _histogram_diff(measured: Dict[int, int], expected: Dict[int, int]) -> Dict[int, Tuple[int, int]]:
    keys = sorted(set(measured) | set(expected))
    return {k: (measured.get(k, 0), expected.get(k, 0)) for k in keys if measured.get(k, 0) != expected.get(k, 0)}


class AcceptanceSuite:
    """
    Runs the acceptance criteria at a given depth.

    Example:
        >>> suite = AcceptanceSuite(VerifyLevel.FAST)
        >>> summary = suite.run()
        >>> summary.passed
        True
    """

    def __init__(self, level: VerifyLevel = VerifyLevel.FAST, show_progress: bool = True):
        self.level = VerifyLevel(level)
        self.show_progress = show_progress
        self.discrepancies: List[Discrepancy] = []
        self._base_cache: Dict[Tuple[int, int], GraphInstance] = {}

        full = self.level is VerifyLevel.FULL
        self.count_max_vertices = 1_000_000 if full else 100_000
        self.structure_t = range(1, 7) if full else range(1, 5)
        # larger instances get the bounded diameter only
        self.all_sources_max_vertices = 1500 if full else 400
        self.hitting_t = range(1, 7) if full else range(1, 5)

    # -------------------------------------------------------------------------

    def _base(self, m: int, t: int) -> GraphInstance:
        key = (m, t)
        if key not in self._base_cache:
            self._base_cache[key] = build_base(m, t)
        return self._base_cache[key]

    def _count_grid(self) -> List[Tuple[int, int]]:
        return [
            (m, t)
            for m in (2, 3, 4, 5)
            for t in range(0, 9)
            if counts(m, t)[0].numerator <= self.count_max_vertices
        ]

    def criteria(self) -> List[Tuple[int, str, bool, Callable[[CriterionResult], None]]]:
        return [
            (1, "vertex and edge counts", True, self.check_counts),
            (2, "degree table", True, self.check_degree_table),
            (3, "diameter", True, self.check_diameter),
            (4, "clustering of the star-seeded family", True, self.check_base_clustering),
            (5, "assortativity", True, self.check_assortativity),
            (6, "hitting times", True, self.check_hitting_times),
            (7, "Monte-Carlo walks", True, self.check_monte_carlo),
            (8, "hitting time against log size", True, self.check_log_trend),
            (9, "power-law slope", True, self.check_powerlaw),
            (10, "deleted-family expectations", True, self.check_deleted_expectations),
            (11, "wheel clustering formula", True, self.check_wheel_clustering),
            (12, "assortativity trend", True, self.check_assortativity_trend),
        ]

    def run(self, only: Optional[List[int]] = None) -> AcceptanceSummary:
        """
        Run the suite.

        Args:
            only: Restrict to these criterion numbers

        Returns:
            AcceptanceSummary
        """
        self.discrepancies = []
        results = []
        selected = [c for c in self.criteria() if only is None or c[0] in only]
        for number, name, asserted, fn in tqdm(selected, desc="verify", disable=not self.show_progress):
            result = CriterionResult(number=number, name=name, asserted=asserted)
            start = time.perf_counter()
            try:
                fn(result)
            except HierarchyToolkitError as e:
                result.failures.append(f"raised {type(e).__name__}: {e}")
            result.elapsed = time.perf_counter() - start
            logger.info(f"Criterion {number} ({name}): {result.status} in {result.elapsed:.2f}s")
            results.append(result)
        return AcceptanceSummary(level=self.level, results=results, discrepancies=list(self.discrepancies))

    # -------------------------------------------------------------------------
    # Criteria
    # -------------------------------------------------------------------------

    def check_counts(self, result: CriterionResult) -> None:
        for m, t in self._count_grid():
            v, e = counts(m, t)
            g = self._base(m, t)
            if (g.n, g.num_edges) != (v.numerator, e.numerator):
                diff = _histogram_diff(degree_histogram(g).counts, degree_histogram_exact(m, t))
                result.check(False, (
                    f"G({t};{m}): built |V|={g.n} |E|={g.num_edges}, "
                    f"expected |V|={v} |E|={e}; degree diff (built, expected): {diff}"
                ))
            else:
                result.check(True, "")
            result.check(
                counts_by_recurrence(m, t) == (v.numerator, e.numerator),
                f"G({t};{m}): recurrence {counts_by_recurrence(m, t)} != closed form ({v}, {e})",
            )

        for m in (2, 3):
            for t in range(0, 4):
                literal = build_literal(m, t)
                g = self._base(m, t)
                result.check(
                    degree_level_profile(literal) == _profile(g)
                    and literal.number_of_edges() == g.num_edges,
                    f"G({t};{m}): level-major build differs from the literal construction",
                )
            for t in range(0, 3):
                literal = build_literal(m, t, wheel=True)
                g = build_wheel(m, t)
                result.check(
                    degree_level_profile(literal) == _profile(g)
                    and literal.number_of_edges() == g.num_edges,
                    f"G1({t};{m}): level-major build differs from the literal construction",
                )

    def check_degree_table(self, result: CriterionResult) -> None:
        for m, t in self._count_grid():
            measured = degree_histogram(self._base(m, t)).counts
            expected = degree_histogram_exact(m, t)
            result.check(
                measured == expected,
                f"G({t};{m}): degree diff (built, expected): {_histogram_diff(measured, expected)}",
            )

    def _diameter_instances(self):
        for m in (2, 3, 4):
            for t in self.structure_t:
                yield f"G({t};{m})", self._base(m, t)
                yield f"G1({t};{m})", build_wheel(m, t)
                for p in (0.0, 0.5, 1.0):
                    for seed in (0, 1, 2):
                        yield f"G2({t};{m},p={p},seed={seed})", build_deleted(m, t, p, seed)

    def check_diameter(self, result: CriterionResult) -> None:
        for label, g in self._diameter_instances():
            d = diameter_bfs(g, mode=DiameterMode.BOUNDED).value
            result.check(d == 4, f"{label}: diameter {d}, expected 4")
            if g.n <= self.all_sources_max_vertices:
                all_sources = diameter_bfs(g, mode=DiameterMode.EXACT).value
                result.check(all_sources == d, f"{label}: all-source diameter {all_sources}, bounded {d}")
        for m in (2, 3, 4):
            d = diameter_bfs(self._base(m, 0)).value
            result.check(d == 2, f"G(0;{m}): diameter {d}, expected 2")

    def check_base_clustering(self, result: CriterionResult) -> None:
        for m in (2, 3, 4):
            for t in [0, *self.structure_t]:
                clustering = average_local_clustering(self._base(m, t))
                result.check(
                    clustering.average == 0.0 and clustering.triangles == 0,
                    f"G({t};{m}): clustering {clustering.average}, triangles {clustering.triangles}",
                )

    def check_assortativity(self, result: CriterionResult) -> None:
        for m in (2, 3, 4):
            for t in range(1, 7):
                closed = assortativity_r(m, t).value
                measured = assortativity_pearson(self._base(m, t), exact=True)
                result.check(
                    measured == closed and abs(float(measured) - float(closed)) <= FLOAT_TOLERANCE,
                    f"r({t};{m}): closed {closed} vs Pearson {measured}",
                )
        result.check(assortativity_r(2, 1).value == Fraction(-1, 3), "r(1;2) != -1/3")
        for m in (2, 3, 4):
            result.check(assortativity_r(m, 0).value == -1, f"r(0;{m}) != -1")

    def check_hitting_times(self, result: CriterionResult) -> None:
        for m in (2, 3, 4):
            for t in self.hitting_t:
                g = self._base(m, t)
                spec = TrapSpec.create(g)
                solved = exact_hitting_solve(spec)
                h = solved.per_vertex
                bottom = h[g.level == t + 1]
                middle = h[(g.level >= 1) & (g.level <= t)]
                result.check(
                    bool(np.all(np.abs(bottom - (2 * t + 1)) <= FLOAT_TOLERANCE)),
                    f"G({t};{m}): bottom hitting times off 2t+1 by {np.max(np.abs(bottom - (2 * t + 1))):.3g}",
                )
                result.check(
                    bool(np.all(np.abs(middle - (2 * t + 2)) <= FLOAT_TOLERANCE)),
                    f"G({t};{m}): intermediate hitting times off 2t+2 by {np.max(np.abs(middle - (2 * t + 2))):.3g}",
                )
                closed = mean_hitting_closed(m, t)
                result.check(
                    abs(solved.mean - closed.float) <= FLOAT_TOLERANCE,
                    f"G({t};{m}): solved mean {solved.mean} vs closed {closed}",
                )
                collapsed = level_collapsed_solve(spec)
                result.check(
                    collapsed.mean_exact == closed.value,
                    f"G({t};{m}): level-collapsed mean {collapsed.mean_exact} vs closed {closed}",
                )
        result.check(mean_hitting_closed(2, 1).value == Fraction(10, 3), "mean(2,1) != 10/3")
        result.check(mean_hitting_closed(2, 2).value == Fraction(38, 7), "mean(2,2) != 38/7")

    def check_monte_carlo(self, result: CriterionResult) -> None:
        for m, t in ((2, 1), (3, 2)):
            spec = TrapSpec.create(self._base(m, t))
            summary = simulate_walks(spec, trials=100_000, seed=MC_SEED)
            exact = mean_hitting_closed(m, t).float
            result.check(
                abs(summary.mean - exact) <= 3 * summary.stderr,
                f"G({t};{m}): sample mean {summary.mean:.6g} +/- {summary.stderr:.3g} vs exact {exact:.6g}",
            )
            result.check(
                summary.truncation_rate < 1e-6,
                f"G({t};{m}): truncation rate {summary.truncation_rate:.3g}",
            )

    def check_log_trend(self, result: CriterionResult) -> None:
        for m in (2, 3, 4):
            for t in range(1, 21):
                forms = hitting_closed_forms(m, t)
                result.check(forms.in_bracket, f"mean({m},{t})={forms.mean} outside (2t+1, 2t+2)")
            gap_30 = hitting_closed_forms(m, 30).log_ratio_gap
            result.check(gap_30 < 0.05, f"m={m}, t=30: mean/ln|V| is {gap_30:.2%} from 2/ln m")
            gap_20 = hitting_closed_forms(m, 20).log_ratio_gap
            if m in (3, 4):
                result.check(gap_20 < 0.05, f"m={m}, t=20: mean/ln|V| is {gap_20:.2%} from 2/ln m")
            else:
                forms = hitting_closed_forms(m, 20)
                self.discrepancies.append(Discrepancy(
                    name=f"log_ratio_m{m}_t20",
                    closed_form=forms.log_ratio,
                    reference=forms.log_ratio_limit,
                    note=f"relative gap {gap_20:.2%}; under 5% only from larger t",
                ))

    def check_powerlaw(self, result: CriterionResult) -> None:
        slope = powerlaw_slope(self._base(2, 12))
        result.check(abs(slope + 1) <= 0.15, f"G(12;2): slope {slope:.4f} outside -1 +/- 0.15")
        slope = powerlaw_slope(self._base(3, 8))
        result.check(-1.2 <= slope <= -0.8, f"G(8;3): slope {slope:.4f} outside [-1.2, -0.8]")

    def _sample_interval(self, values: np.ndarray, z: float = 1.96) -> Tuple[float, List[float]]:
        mean = float(values.mean())
        half = z * float(values.std(ddof=1)) / math.sqrt(values.size)
        return mean, [mean - half, mean + half]

    def check_deleted_expectations(self, result: CriterionResult) -> None:
        m, t, p = 3, 3, 0.5
        samples = [build_deleted(m, t, p, seed) for seed in range(200)]
        edge_counts = np.array([g.num_edges for g in samples], dtype=np.float64)
        mean = edge_counts.mean()
        stderr = edge_counts.std(ddof=1) / math.sqrt(edge_counts.size)
        expected = float(g2_expected_sums(m, t, p).sums.edges)
        result.check(expected == 364.5, f"expected |E2| {expected} != 364.5")
        result.check(
            abs(mean - expected) <= 4 * stderr,
            f"|E2| sample mean {mean:.4f} +/- {stderr:.4f} vs {expected}",
        )

        for mm in (3, 4):
            for tt in (0, 1, 2):
                M = mm ** (tt + 1)
                result.check(
                    g2_expected_sums(mm, tt, 0).sums.edges == M * (tt + 2),
                    f"E|E2| at p=0 != |E1| for m={mm}, t={tt}",
                )
                result.check(
                    g2_expected_sums(mm, tt, 1).sums.edges == M * (tt + 1),
                    f"E|E2| at p=1 != |E| for m={mm}, t={tt}",
                )
                result.check(
                    build_deleted(mm, tt, 0.0, 5).same_graph(build_wheel(mm, tt)),
                    f"G2({tt};{mm},p=0) differs from G1",
                )
                result.check(
                    np.array_equal(build_deleted(mm, tt, 1.0, 5).edges(), build_base(mm, tt).edges()),
                    f"G2({tt};{mm},p=1) differs from G",
                )

        # Reported only: the remaining published expectations against the samples
        g2 = g2_expected_sums(m, t, p)
        sums = [edge_degree_sums(g) for g in samples]
        for name, published, values in (
            ("product_sum", g2.sums.product_sum, [s.product_sum for s in sums]),
            ("degree_sum", g2.sums.degree_sum, [s.degree_sum for s in sums]),
            ("square_sum", g2.sums.square_sum, [s.square_sum for s in sums]),
        ):
            sample_mean, interval = self._sample_interval(np.array([float(v) for v in values]))
            self.discrepancies.append(Discrepancy(
                name=f"g2_{name}_m{m}_t{t}_p{p}",
                closed_form=float(published),
                reference=sample_mean,
                interval=interval,
                note="published expectation against the 95% interval of 200 seeded samples",
            ))
        clustering = np.array([average_local_clustering(g).average for g in samples])
        sample_mean, interval = self._sample_interval(clustering)
        self.discrepancies.append(Discrepancy(
            name=f"g2_clustering_m{m}_t{t}_p{p}",
            closed_form=clustering_c2_expected(m, t, p).float,
            reference=sample_mean,
            interval=interval,
            note="published expected clustering against 200 seeded samples",
        ))
        if g2.r2 is not None:
            r_samples = np.array([float(s.pearson()) for s in sums if s.pearson() is not None])
            sample_mean, interval = self._sample_interval(r_samples)
            self.discrepancies.append(Discrepancy(
                name=f"g2_r2_m{m}_t{t}_p{p}",
                closed_form=float(g2.r2),
                reference=sample_mean,
                interval=interval,
                note="published r2 against sampled Pearson values",
            ))
        for tt in (1, 2, 3):
            wheel = build_wheel(2, tt)
            self.discrepancies.append(Discrepancy(
                name=f"g2_edges_p0_m2_t{tt}",
                closed_form=float(g2_expected_sums(2, tt, 0).sums.edges),
                reference=float(wheel.num_edges),
                note="single-edge rim for m=2 carries 2^t rim edges, not m^(t+1)",
            ))

    def check_wheel_clustering(self, result: CriterionResult) -> None:
        result.check(clustering_c1(3, 0).value == Fraction(1, 2), f"C1(3,0)={clustering_c1(3, 0)} != 1/2")
        result.check(clustering_c1(2, 0).value == Fraction(8, 9), f"C1(2,0)={clustering_c1(2, 0)} != 8/9")
        grid = [Fraction(k, 100) for k in range(101)]
        for m in range(2, 9):
            for t in range(0, 7):
                c1 = clustering_c1(m, t).value
                values = [clustering_c2_expected(m, t, p).value for p in grid]
                result.check(values[0] == c1, f"C2({m},{t},0) != C1")
                result.check(values[-1] == 0, f"C2({m},{t},1) != 0")
                if t >= 1:
                    result.check(
                        all(a >= b for a, b in zip(values, values[1:])),
                        f"C2({m},{t},p) not monotone in p",
                    )
        # Reported only: published wheel clustering against triangle counting
        for m in (2, 3, 4):
            for t in (0, 1, 2, 3):
                measured = average_local_clustering(build_wheel(m, t)).average
                self.discrepancies.append(Discrepancy(
                    name=f"c1_m{m}_t{t}",
                    closed_form=clustering_c1(m, t).float,
                    reference=measured,
                    note="published wheel clustering against triangle counting",
                ))

    def check_assortativity_trend(self, result: CriterionResult) -> None:
        for m in (2, 4, 6, 8):
            magnitudes = {t: abs(assortativity_r(m, t).value) for t in range(1, 13)}
            for t in range(5, 12):
                result.check(
                    magnitudes[t + 1] < magnitudes[t],
                    f"|r({t + 1};{m})| = {float(magnitudes[t + 1]):.6g} not below |r({t};{m})|",
                )
            if magnitudes[5] >= magnitudes[4]:
                self.discrepancies.append(Discrepancy(
                    name=f"r_step_t4_t5_m{m}",
                    closed_form=float(magnitudes[5]),
                    reference=float(magnitudes[4]),
                    note="|r| still grows from t=4 to t=5",
                ))
            for p in (0.1, 0.3, 0.5, 0.7, 0.9):
                r2 = [g2_expected_sums(m, t, p).r2 for t in range(1, 13)]
                negative = [t + 1 for t, v in enumerate(r2) if v is not None and v < 0]
                if negative:
                    self.discrepancies.append(Discrepancy(
                        name=f"r2_sign_m{m}_p{p}",
                        closed_form=float(min(v for v in r2 if v is not None)),
                        reference=0.0,
                        note=f"published r2 negative at t={negative}",
                    ))
        for m, t in ((2, 1), (2, 12)):
            self.discrepancies.extend(shared_discrepancies(m, t))


def run_acceptance(
    level: VerifyLevel = VerifyLevel.FAST,
    report_path: Optional[Path] = None,
    show_progress: bool = True,
) -> AcceptanceSummary:
    """
    Convenience function to run the suite and optionally write the report.

    Args:
        level: FAST or FULL
        report_path: Where to write the discrepancy report
        show_progress: Show a progress bar

    Returns:
        AcceptanceSummary
    """
    summary = AcceptanceSuite(level, show_progress=show_progress).run()
    if report_path is not None:
        summary.write_report(report_path)
    return summary
