"""
Tests for the trapping problem: solvers, distributions and simulation.
"""

from fractions import Fraction
from unittest.mock import patch

import numpy as np
import pytest

from analytic.closed_forms import hitting_closed_forms
from core.exceptions import (
    DisconnectedGraphError,
    InvalidParametersError,
    SimulationError,
    SolverError,
)
from model.builders import build_base, build_deleted, build_wheel
from model.graph import GraphInstance
from walk.generating import (
    closed_form_summary,
    generating_function_moments,
    hitting_distribution,
    mean_hitting_closed,
)
from walk.simulate import default_max_steps, simulate_walks
from walk.solvers import exact_hitting_solve, level_collapsed_solve, solve_rational, transition_matrix
from walk.types import HittingMethod, HittingSummary, TrapSpec


class TestTrapSpec:
    """Tests for trap validation."""

    def test_defaults_to_hub(self):
        spec = TrapSpec.create(build_base(2, 1))

        assert spec.trap == 0
        assert spec.at_hub
        assert spec.non_trap().tolist() == [1, 2, 3, 4, 5, 6]

    def test_bad_trap(self):
        with pytest.raises(InvalidParametersError):
            TrapSpec.create(build_base(2, 1), trap=7)

    def test_disconnected(self):
        g = build_base(2, 1)
        broken = GraphInstance.from_edges(g.params, g.n, g.edges()[2:], g.level)

        with pytest.raises(DisconnectedGraphError):
            TrapSpec.create(broken)


class TestExactSolve:
    """Tests for the first-step linear system."""

    def test_transition_rows_sum_to_one(self):
        P = transition_matrix(TrapSpec.create(build_wheel(3, 2)))

        assert np.allclose(np.asarray(P.sum(axis=1)).ravel(), 1.0)

    def test_g_1_2(self):
        summary = exact_hitting_solve(TrapSpec.create(build_base(2, 1)))

        assert summary.per_level[2] == pytest.approx(3.0)
        assert summary.per_level[1] == pytest.approx(4.0)
        assert summary.mean == pytest.approx(10 / 3)
        assert summary.method is HittingMethod.LINEAR_SOLVE

    def test_star(self):
        assert exact_hitting_solve(TrapSpec.create(build_base(5, 0))).mean == pytest.approx(1.0)

    @pytest.mark.parametrize("m", [2, 3, 4])
    @pytest.mark.parametrize("t", [1, 2, 3, 4])
    def test_matches_closed_forms(self, m, t):
        summary = exact_hitting_solve(TrapSpec.create(build_base(m, t)))
        forms = hitting_closed_forms(m, t)

        assert summary.per_level[t + 1] == pytest.approx(2 * t + 1, abs=1e-9)
        for level in range(1, t + 1):
            assert summary.per_level[level] == pytest.approx(2 * t + 2, abs=1e-9)
        assert summary.mean == pytest.approx(forms.mean.float, abs=1e-9)

    def test_vertexwise_values(self):
        summary = exact_hitting_solve(TrapSpec.create(build_base(3, 2)))
        h = summary.per_vertex

        assert h[0] == 0.0
        assert np.allclose(h[1:4], 6.0)
        assert np.allclose(h[13:], 5.0)

    def test_sparse_matches_dense(self):
        spec = TrapSpec.create(build_deleted(2, 3, 0.5, seed=2))
        dense = exact_hitting_solve(spec)
        direct = exact_hitting_solve(spec, dense_max_vertices=2)

        assert direct.iterations is None
        assert np.allclose(dense.per_vertex, direct.per_vertex, atol=1e-12)

    def test_iterative_matches_dense(self):
        spec = TrapSpec.create(build_deleted(2, 3, 0.5, seed=2))
        dense = exact_hitting_solve(spec)
        iterative = exact_hitting_solve(spec, dense_max_vertices=2, sparse_max_vertices=2)

        assert iterative.iterations is not None
        assert np.allclose(dense.per_vertex, iterative.per_vertex, atol=1e-11)

    def test_iterative_gives_up(self):
        spec = TrapSpec.create(build_base(2, 3))

        with pytest.raises(SolverError):
            exact_hitting_solve(spec, dense_max_vertices=2, sparse_max_vertices=2, max_sweeps=3)

    def test_trap_away_from_hub(self):
        g = build_base(2, 2)
        bottom = int(g.vertices_at_level(3)[0])
        summary = exact_hitting_solve(TrapSpec.create(g, trap=bottom))

        assert summary.per_vertex[bottom] == 0.0
        assert summary.mean > 0


class TestLevelCollapsed:
    """Tests for the per-level rational solve."""

    def test_solve_rational(self):
        values = solve_rational(
            [[Fraction(1), Fraction(-1)], [Fraction(-1, 2), Fraction(1)]],
            [Fraction(1), Fraction(1)],
        )

        assert values == [Fraction(4), Fraction(3)]

    def test_singular(self):
        with pytest.raises(SolverError):
            solve_rational([[Fraction(0)]], [Fraction(1)])

    @pytest.mark.parametrize("m,t,mean", [(2, 1, Fraction(10, 3)), (2, 2, Fraction(38, 7))])
    def test_spot_values(self, m, t, mean):
        assert level_collapsed_solve(TrapSpec.create(build_base(m, t))).mean_exact == mean

    @pytest.mark.parametrize("m,t", [(3, 3), (4, 2)])
    def test_matches_full_solve(self, m, t):
        spec = TrapSpec.create(build_base(m, t))
        collapsed = level_collapsed_solve(spec)
        full = exact_hitting_solve(spec)

        for level, value in collapsed.per_level.items():
            assert full.per_level[level] == pytest.approx(value, abs=1e-9)

    @pytest.mark.parametrize("m,t", [(4, 6), (3, 8)])
    def test_matches_large_full_solve(self, m, t):
        spec = TrapSpec.create(build_base(m, t))
        collapsed = level_collapsed_solve(spec)
        full = exact_hitting_solve(spec)

        assert spec.graph.n > 2000
        assert full.mean == pytest.approx(collapsed.mean, abs=1e-12)
        for level, value in collapsed.per_level.items():
            assert full.per_level[level] == pytest.approx(value, abs=1e-12)

    def test_rejects_wheel(self):
        with pytest.raises(SolverError):
            level_collapsed_solve(TrapSpec.create(build_wheel(3, 1)))

    def test_rejects_other_trap(self):
        with pytest.raises(SolverError):
            level_collapsed_solve(TrapSpec.create(build_base(2, 1), trap=3))


class TestHittingDistribution:
    """Tests for first-passage probabilities."""

    def setup_method(self):
        self.spec = TrapSpec.create(build_base(2, 1))
        self.bottom = int(self.spec.graph.vertices_at_level(2)[0])

    def test_bottom_start(self):
        dist = hitting_distribution(self.spec, source=self.bottom, horizon=9)

        assert dist.probabilities[:5] == pytest.approx([0.5, 0.0, 0.25, 0.0, 0.125])
        assert dist.probabilities[8] == pytest.approx(2.0**-5)

    def test_truncated_mean(self):
        dist = hitting_distribution(self.spec, source=self.bottom, horizon=128)

        assert dist.truncated_mean == pytest.approx(3.0, abs=1e-12)
        assert dist.tail_mass < 1e-12

    def test_short_horizon_leaves_tail(self):
        dist = hitting_distribution(self.spec, source=self.bottom, horizon=64)

        assert dist.tail_mass > 0
        assert abs(dist.truncated_mean - 3.0) < 1e-6

    def test_level_start(self):
        dist = hitting_distribution(self.spec, level=1, horizon=6)

        assert dist.probabilities[:4] == pytest.approx([0.0, 0.5, 0.0, 0.25])

    def test_tail_mass_shrinks_with_horizon(self):
        spec = TrapSpec.create(build_base(2, 2))
        bottom = int(spec.graph.vertices_at_level(3)[0])
        tails = [hitting_distribution(spec, source=bottom, horizon=h).tail_mass for h in (8, 16, 32, 64)]

        assert all(later <= earlier for earlier, later in zip(tails, tails[1:]))
        assert tails[-1] < tails[0]

    def test_needs_one_start(self):
        with pytest.raises(InvalidParametersError):
            hitting_distribution(self.spec)
        with pytest.raises(InvalidParametersError):
            hitting_distribution(self.spec, source=1, level=1)

    def test_trap_source_rejected(self):
        with pytest.raises(InvalidParametersError):
            hitting_distribution(self.spec, source=0)

    def test_csv_rows(self):
        rows = hitting_distribution(self.spec, source=self.bottom, horizon=3).csv_rows()

        assert [r["step"] for r in rows] == [1, 2, 3]
        assert rows[-1]["cumulative"] == pytest.approx(0.75)


class TestGeneratingFunction:
    """Tests for the closed-form generating function."""

    def test_normalised(self):
        for t in range(0, 6):
            assert generating_function_moments(3, t).normalization == 1

    @pytest.mark.parametrize("t", [0, 1, 2, 5])
    def test_bottom_mean(self, t):
        assert generating_function_moments(2, t).mean == 2 * t + 1

    def test_intermediate_mean(self):
        assert generating_function_moments(2, 3, level=2).mean == 8

    def test_coefficients_match_propagation(self):
        spec = TrapSpec.create(build_base(2, 1))
        bottom = int(spec.graph.vertices_at_level(2)[0])
        dist = hitting_distribution(spec, source=bottom, horizon=15)
        coefficients = generating_function_moments(2, 1).coefficients(15)

        assert dist.probabilities == pytest.approx([float(c) for c in coefficients], abs=1e-15)

    def test_shifted_coefficients(self):
        spec = TrapSpec.create(build_base(3, 2))
        dist = hitting_distribution(spec, level=1, horizon=12)
        coefficients = generating_function_moments(3, 2, level=1).coefficients(12)

        assert dist.probabilities == pytest.approx([float(c) for c in coefficients], abs=1e-15)

    def test_bad_level(self):
        with pytest.raises(InvalidParametersError):
            generating_function_moments(2, 2, level=0)

    def test_mean_hitting_closed(self):
        assert mean_hitting_closed(2, 1).value == Fraction(10, 3)
        assert mean_hitting_closed(2, 2).value == Fraction(38, 7)

    def test_closed_form_summary(self):
        summary = closed_form_summary(2, 2)

        assert summary.per_level == {1: 6.0, 2: 6.0, 3: 5.0}
        assert summary.level_counts == {1: 2, 2: 4, 3: 8}
        assert summary.mean_exact == Fraction(38, 7)


class TestSimulation:
    """Tests for Monte-Carlo walks."""

    def test_default_max_steps(self):
        assert default_max_steps(3) == 800

    def test_mean_within_three_stderr(self):
        summary = simulate_walks(TrapSpec.create(build_base(2, 1)), trials=100_000, seed=1)

        assert abs(summary.mean - 10 / 3) < 3 * summary.stderr
        assert summary.truncated == 0
        assert not summary.flagged

    def test_reproducible(self):
        spec = TrapSpec.create(build_base(3, 2))
        a = simulate_walks(spec, trials=5000, seed=7, batch_size=1000)
        b = simulate_walks(spec, trials=5000, seed=7, batch_size=1000)

        assert a.mean == b.mean
        assert a.per_level == b.per_level

    def test_threads_match_serial(self):
        spec = TrapSpec.create(build_base(3, 2))
        serial = simulate_walks(spec, trials=6000, seed=3, batch_size=1000, workers=1)
        threaded = simulate_walks(spec, trials=6000, seed=3, batch_size=1000, workers=3)

        assert serial.mean == threaded.mean

    def test_fixed_source(self):
        spec = TrapSpec.create(build_base(2, 1))
        bottom = int(spec.graph.vertices_at_level(2)[0])
        summary = simulate_walks(spec, trials=20_000, seed=5, source=bottom)

        assert abs(summary.mean - 3.0) < 4 * summary.stderr

    def test_stderr_shrinks_with_trials(self):
        spec = TrapSpec.create(build_base(2, 2))
        errors = [simulate_walks(spec, trials=n, seed=11).stderr for n in (1_000, 10_000, 100_000)]

        for coarse, fine in zip(errors, errors[1:]):
            assert 2.5 < coarse / fine < 4.0

    @pytest.mark.parametrize("graph", [build_wheel(3, 2), build_deleted(3, 2, 0.5, seed=7)])
    def test_agrees_with_linear_solve(self, graph):
        spec = TrapSpec.create(graph)
        exact = exact_hitting_solve(spec)
        summary = simulate_walks(spec, trials=50_000, seed=13)

        assert abs(summary.mean - exact.mean) < 3 * summary.stderr

    def test_fixed_bottom_source(self):
        spec = TrapSpec.create(build_base(3, 3))
        bottom = int(spec.graph.vertices_at_level(4)[0])
        summary = simulate_walks(spec, trials=40_000, seed=9, source=bottom)

        assert exact_hitting_solve(spec).per_vertex[bottom] == pytest.approx(7.0)
        assert abs(summary.mean - 7.0) < 4 * summary.stderr

    def test_truncation_flagged(self):
        spec = TrapSpec.create(build_base(2, 3))

        with patch("walk.simulate.logger") as mock_logger:
            summary = simulate_walks(spec, trials=2000, seed=0, max_steps=2)

        assert summary.truncated > 0
        assert summary.flagged
        mock_logger.warning.assert_called_once()

    @pytest.mark.parametrize("kwargs", [
        {"trials": 0},
        {"trials": 10, "max_steps": 0},
        {"trials": 10, "source": 0},
    ])
    def test_bad_input(self, kwargs):
        with pytest.raises(SimulationError):
            simulate_walks(TrapSpec.create(build_base(2, 1)), **kwargs)


class TestHittingSummary:
    """Tests for the summary container."""

    def test_csv_rows_end_with_mean(self):
        rows = closed_form_summary(2, 1).csv_rows()

        assert [r["level"] for r in rows] == [1, 2, "all"]
        assert rows[-1]["exact"] == "10/3"
        assert rows[-1]["count"] == 6
        assert set(rows[0]) == set(HittingSummary.CSV_COLUMNS)

    def test_to_dict(self):
        data = level_collapsed_solve(TrapSpec.create(build_base(2, 2))).to_dict()

        assert data["method"] == "level_collapsed"
        assert data["mean_exact"]["exact"] == "38/7"
        assert data["truncation_rate"] == 0.0
