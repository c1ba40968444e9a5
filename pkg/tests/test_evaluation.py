"""
Tests for closed-form/measurement comparison and the acceptance suite.
"""

import json
import time
from unittest.mock import patch

import pytest

from core.exceptions import InsufficientDegreeClassesError
from empirical.measures import DiameterMode, diameter_bfs
from evaluation.acceptance import (
    AcceptanceSuite,
    AcceptanceSummary,
    CriterionResult,
    VerifyLevel,
    run_acceptance,
)
from evaluation.comparison import Agreement, Discrepancy, analyze, shared_discrepancies
from model.builders import build_base, build_deleted, build_wheel
from model.graph import GraphInstance


class TestAgreement:
    """Tests for Agreement."""

    def test_agrees_within_tolerance(self):
        assert Agreement("r", -1 / 3, -1 / 3 + 1e-12).agrees

    def test_disagrees(self):
        agreement = Agreement("diameter", 4.0, 5.0)

        assert not agreement.agrees
        assert agreement.abs_diff == 1.0

    def test_missing_measurement(self):
        assert Agreement("r", 0.5, None).abs_diff is None


class TestDiscrepancy:
    """Tests for Discrepancy."""

    def test_gap(self):
        assert Discrepancy("c1", 0.5, 1.0, note="").gap == pytest.approx(-0.5)

    def test_interval_controls_flag(self):
        inside = Discrepancy("x", 1.0, 1.1, note="", interval=[0.9, 1.2])
        outside = Discrepancy("x", 2.0, 1.1, note="", interval=[0.9, 1.2])

        assert not inside.flagged
        assert outside.flagged


class TestAnalyze:
    """Tests for the combined analysis report."""

    def _agreement(self, report, quantity):
        return next(a for a in report.agreement if a.quantity == quantity)

    def test_base_assortativity(self):
        report = analyze(build_base(2, 1))
        r = self._agreement(report, "assortativity")

        assert r.exact == "-1/3"
        assert r.measured == pytest.approx(-1 / 3)
        assert r.abs_diff == pytest.approx(0.0, abs=1e-15)

    def test_base_diameter(self):
        report = analyze(build_base(2, 3))
        d = self._agreement(report, "diameter")

        assert d.closed_form == 4.0
        assert d.measured == 4.0

    def test_base_all_agree(self):
        report = analyze(build_base(3, 2))

        assert all(a.agrees for a in report.agreement)

    def test_wheel_clustering_flagged(self):
        report = analyze(build_wheel(3, 0))
        c1 = next(d for d in report.discrepancy if d.name == "clustering_wheel")

        assert c1.closed_form == pytest.approx(0.5)
        assert c1.reference == pytest.approx(1.0)
        assert c1.flagged

    def test_wheel_edges_agree(self):
        report = analyze(build_wheel(3, 1))

        assert self._agreement(report, "edges").measured == 27.0

    def test_deleted_blocks(self):
        report = analyze(build_deleted(3, 2, 0.5, seed=7), include_diameter=False)
        names = {d.name for d in report.discrepancy}

        assert {"edges_expected", "clustering_expected"} <= names
        assert report.measured.diameter is None

    def test_disagreement_logged(self):
        g = build_base(2, 2)
        tampered = GraphInstance.from_edges(g.params, g.n, g.edges()[1:], g.level)

        with patch("evaluation.comparison.logger") as mock_logger:
            report = analyze(tampered, include_diameter=False)

        assert not self._agreement(report, "edges").agrees
        mock_logger.warning.assert_called_once()

    def test_csv_rows(self):
        rows = analyze(build_base(2, 1)).csv_rows()

        assert {r["section"] for r in rows} == {"agreement", "discrepancy"}

    def test_to_dict_is_json(self):
        json.dumps(analyze(build_deleted(2, 2, 0.3, seed=1)).to_dict())

    def test_shared_discrepancies(self):
        items = shared_discrepancies(2, 1)

        assert items[0].name == "average_degree_per_t"
        assert items[1].name.startswith("cumulative_distribution_k")


class TestCriterionResult:
    """Tests for criterion bookkeeping."""

    def test_check_counts_failures(self):
        result = CriterionResult(number=1, name="x", asserted=True)
        result.check(True, "fine")
        result.check(False, "broken")

        assert result.checks == 2
        assert result.failures == ["broken"]
        assert result.status == "FAIL"

    def test_report_only_status(self):
        assert CriterionResult(number=11, name="x", asserted=False).status == "REPORT"


class TestAcceptanceSuite:
    """Tests for the acceptance suite."""

    def setup_method(self):
        self.suite = AcceptanceSuite(VerifyLevel.FAST, show_progress=False)

    @pytest.mark.parametrize("number", [1, 2, 3, 4, 5, 6, 8, 11, 12])
    def test_criterion_passes(self, number):
        summary = self.suite.run(only=[number])

        assert summary.passed, summary.results[0].failures
        assert summary.results[0].checks > 0

    def test_tampered_builder_fails_counts(self):
        real_build_base = build_base

        def tampered(m, t, max_vertices=None):
            g = real_build_base(m, t, max_vertices)
            return GraphInstance.from_edges(g.params, g.n, g.edges()[:-1], g.level)

        with patch("evaluation.acceptance.build_base", side_effect=tampered):
            summary = self.suite.run(only=[1])

        result = summary.results[0]
        assert not summary.passed
        assert any("degree diff" in f for f in result.failures)

    def test_raising_criterion_is_caught(self):
        with patch("evaluation.acceptance.powerlaw_slope", side_effect=InsufficientDegreeClassesError("none")):
            summary = self.suite.run(only=[9])

        assert not summary.passed
        assert "InsufficientDegreeClassesError" in summary.results[0].failures[0]

    def test_reported_discrepancies_never_fail(self):
        summary = self.suite.run(only=[11])

        assert summary.passed
        assert any(d.name == "c1_m3_t0" and d.flagged for d in summary.discrepancies)

    def test_write_report(self, tmp_path):
        summary = self.suite.run(only=[12])
        path = summary.write_report(tmp_path / "reports" / "discrepancy.json")
        data = json.loads(path.read_text())

        assert data["level"] == "fast"
        assert data["criteria"][0]["number"] == 12
        assert isinstance(data["discrepancies"], list)

    def test_all_source_diameter_only_below_cap(self):
        with patch("evaluation.acceptance.diameter_bfs", wraps=diameter_bfs) as mock_diameter:
            summary = self.suite.run(only=[3])

        assert summary.passed, summary.results[0].failures
        exact_sizes = [
            c.args[0].n for c in mock_diameter.call_args_list
            if c.kwargs.get("mode") is DiameterMode.EXACT
        ]
        assert exact_sizes
        assert max(exact_sizes) <= self.suite.all_sources_max_vertices

    @pytest.mark.slow
    def test_full_diameter_criterion_is_quick(self):
        suite = AcceptanceSuite(VerifyLevel.FULL, show_progress=False)
        start = time.perf_counter()
        summary = suite.run(only=[3])

        assert summary.passed, summary.results[0].failures
        assert time.perf_counter() - start < 120

    def test_full_grids_are_larger(self):
        full = AcceptanceSuite(VerifyLevel.FULL, show_progress=False)

        assert len(full._count_grid()) > len(self.suite._count_grid())
        assert max(full.structure_t) == 6

    def test_run_acceptance_writes_report(self, tmp_path):
        with patch.object(AcceptanceSuite, "criteria", return_value=[]):
            summary = run_acceptance(VerifyLevel.FAST, tmp_path / "r.json", show_progress=False)

        assert isinstance(summary, AcceptanceSummary)
        assert summary.passed
        assert (tmp_path / "r.json").exists()
