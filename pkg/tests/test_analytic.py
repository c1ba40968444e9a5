"""
Tests for the closed-form evaluators.
"""

from fractions import Fraction
from unittest.mock import patch

import pytest

from analytic.closed_forms import (
    assortativity_r,
    average_degree,
    average_degree_growth,
    base_edge_degree_sums,
    clustering_c1,
    clustering_c2_expected,
    counts,
    counts_by_recurrence,
    cumulative_distribution,
    degree_table,
    diameter_closed_form,
    exact_cumulative_distribution,
    g2_expected_sums,
    gamma_exponents,
    hitting_closed_forms,
)
from analytic.exact import ExactScalar, as_fraction, check_range
from analytic.report import closed_form_report
from core.exceptions import ArithmeticOverflowError, InvalidParametersError
from model.builders import build_wheel
from model.graph import DegreeClass
from model.params import Variant


class TestExactScalar:
    """Tests for rational helpers."""

    def test_float_goes_through_decimal(self):
        assert as_fraction(0.1) == Fraction(1, 10)

    def test_to_dict(self):
        data = ExactScalar.of(Fraction(10, 3)).to_dict()

        assert data["exact"] == "10/3"
        assert data["float"] == pytest.approx(10 / 3)

    def test_checked_mode_raises(self):
        with pytest.raises(ArithmeticOverflowError):
            check_range(2**130, mode="checked128")

    def test_arbitrary_mode_passes(self):
        assert check_range(2**130, mode="arbitrary") == 2**130

    def test_checked_mode_from_settings(self):
        with patch("analytic.exact.get_settings") as mock_settings:
            mock_settings.return_value.ARITHMETIC_MODE = "checked128"
            with pytest.raises(ArithmeticOverflowError):
                assortativity_r(2, 70)


class TestCounts:
    """Tests for size and degree formulas."""

    @pytest.mark.parametrize("m,t,expected", [(2, 0, (3, 2)), (2, 2, (15, 24)), (3, 1, (13, 18))])
    def test_counts(self, m, t, expected):
        v, e = counts(m, t)

        assert (v.numerator, e.numerator) == expected

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_recurrence_agrees(self, m):
        for t in range(0, 9):
            v, e = counts(m, t)
            assert counts_by_recurrence(m, t) == (v.numerator, e.numerator)

    def test_average_degree(self):
        assert average_degree(2, 1).value == Fraction(16, 7)
        assert average_degree(2, 0).value == Fraction(4, 3)

    def test_average_degree_limit(self):
        growth = average_degree_growth(3, 50)

        assert growth["per_generation"].float == pytest.approx(
            growth["limit_per_generation"].float, rel=0.02
        )

    def test_per_t_undefined_at_zero(self):
        assert average_degree_growth(2, 0)["per_t"] is None

    @pytest.mark.parametrize("m,t,rows", [
        (2, 1, [(0, 4, 1), (1, 2, 2), (2, 2, 4)]),
        (3, 0, [(0, 3, 1), (1, 1, 3)]),
        (2, 2, [(0, 8, 1), (1, 4, 2), (2, 2, 4), (3, 3, 8)]),
    ])
    def test_degree_table(self, m, t, rows):
        assert degree_table(m, t) == [DegreeClass(*row) for row in rows]

    @pytest.mark.parametrize("m,t", [(2, 5), (3, 4), (5, 2)])
    def test_handshake(self, m, t):
        table = degree_table(m, t)
        v, e = counts(m, t)

        assert sum(r.count for r in table) == v.numerator
        assert sum(r.degree * r.count for r in table) == 2 * e.numerator

    def test_invalid(self):
        with pytest.raises(InvalidParametersError):
            counts(1, 3)


class TestCumulativeDistribution:
    """Tests for the asymptotic and exact cumulative distributions."""

    def test_low_branch(self):
        assert cumulative_distribution(3, 4, 1) == 1.5

    def test_asymptotic_against_exact(self):
        assert cumulative_distribution(2, 1, 4) == 0.25
        assert exact_cumulative_distribution(2, 1, 4).value == Fraction(1, 7)

    def test_hub_branch(self):
        assert cumulative_distribution(2, 12, 2**13) == pytest.approx(2.0**-13)

    def test_degree_below_one(self):
        with pytest.raises(InvalidParametersError):
            cumulative_distribution(2, 1, 0.5)

    def test_exponents(self):
        assert gamma_exponents() == (1, 2)


class TestDiameterClosedForm:
    """Tests for the diameter formula and its seed cases."""

    @pytest.mark.parametrize("variant", list(Variant))
    def test_growth_regime(self, variant):
        p = 0.5 if variant is Variant.WHEEL_DELETED else None

        assert diameter_closed_form(variant, 3, 2, p) == 4

    @pytest.mark.parametrize("variant,m,p,expected", [
        (Variant.BASE, 2, None, 2),
        (Variant.WHEEL_SEED, 2, None, 1),
        (Variant.WHEEL_SEED, 3, None, 1),
        (Variant.WHEEL_SEED, 5, None, 2),
        (Variant.WHEEL_DELETED, 3, 0.0, 1),
        (Variant.WHEEL_DELETED, 3, 0.2, 2),
    ])
    def test_seed(self, variant, m, p, expected):
        assert diameter_closed_form(variant, m, 0, p) == expected


class TestClustering:
    """Tests for the published clustering expressions."""

    def test_c1_hand_values(self):
        assert clustering_c1(3, 0).value == Fraction(1, 2)
        assert clustering_c1(2, 0).value == Fraction(8, 9)

    @pytest.mark.parametrize("m,t", [(2, 0), (3, 2), (4, 5)])
    def test_c2_at_zero_is_c1(self, m, t):
        assert clustering_c2_expected(m, t, 0).value == clustering_c1(m, t).value

    @pytest.mark.parametrize("m,t", [(2, 0), (3, 2), (4, 5)])
    def test_c2_at_one_vanishes(self, m, t):
        assert clustering_c2_expected(m, t, 1).value == 0

    def test_c2_decreases_with_p(self):
        values = [clustering_c2_expected(3, 4, p).value for p in (0, 0.1, 0.3, 0.5, 0.7, 0.9, 1)]

        assert values == sorted(values, reverse=True)

    def test_bad_probability(self):
        with pytest.raises(InvalidParametersError):
            clustering_c2_expected(2, 1, 1.2)


class TestAssortativity:
    """Tests for the assortativity closed form and degree sums."""

    @pytest.mark.parametrize("m", [2, 3, 7])
    def test_star(self, m):
        assert assortativity_r(m, 0).value == -1

    def test_g_1_2(self):
        assert assortativity_r(2, 1).value == Fraction(-1, 3)

    @pytest.mark.parametrize("m", [2, 3, 4])
    @pytest.mark.parametrize("t", [1, 2, 3, 4, 5, 6])
    def test_printed_form_matches_edge_sums(self, m, t):
        assert assortativity_r(m, t).value == base_edge_degree_sums(m, t).pearson()

    def test_magnitude_shrinks(self):
        values = [abs(assortativity_r(4, t).float) for t in range(5, 13)]

        assert values == sorted(values, reverse=True)


class TestG2Expectations:
    """Tests for the deleted-family expected sums."""

    @pytest.mark.parametrize("m,t", [(3, 1), (4, 3)])
    def test_edges_at_extremes(self, m, t):
        assert g2_expected_sums(m, t, 0).sums.edges == m ** (t + 1) * (t + 2)
        assert g2_expected_sums(m, t, 1).sums.edges == m ** (t + 1) * (t + 1)

    def test_edges_half(self):
        assert g2_expected_sums(3, 3, 0.5).sums.edges == Fraction(729, 2)

    def test_r2_reported(self):
        result = g2_expected_sums(2, 3, 0.5)

        assert result.r2 == result.sums.pearson()
        assert "r2" in result.to_dict()


class TestHittingClosedForms:
    """Tests for the trapping closed forms."""

    def test_star(self):
        forms = hitting_closed_forms(2, 0)

        assert forms.bottom.value == 1
        assert forms.intermediate is None
        assert forms.mean.value == 1

    @pytest.mark.parametrize("m,t,expected", [(2, 1, (3, 4, Fraction(10, 3))), (2, 2, (5, 6, Fraction(38, 7)))])
    def test_values(self, m, t, expected):
        forms = hitting_closed_forms(m, t)

        assert (forms.bottom.value, forms.intermediate.value, forms.mean.value) == expected
        assert forms.in_bracket

    def test_to_dict_offset(self):
        data = hitting_closed_forms(2, 1).to_dict()

        assert data["offset_from_2t"] == pytest.approx(10 / 3 - 2)

    def test_log_ratio_trend(self):
        forms = hitting_closed_forms(3, 30)

        assert forms.log_ratio_gap < hitting_closed_forms(3, 10).log_ratio_gap


class TestClosedFormReport:
    """Tests for the combined closed-form report."""

    def test_base(self):
        report = closed_form_report(Variant.BASE, 2, 1)

        assert report.vertices.numerator == 7
        assert report.clustering.value == 0
        assert report.hitting is not None
        assert report.g2 is None

    def test_wheel(self):
        report = closed_form_report(Variant.WHEEL_SEED, 3, 0)

        assert report.clustering.value == Fraction(1, 2)
        assert report.hitting is None

    @pytest.mark.parametrize("m,t", [(2, 2), (3, 1), (4, 2)])
    def test_sizes_follow_variant(self, m, t):
        base = closed_form_report(Variant.BASE, m, t)
        wheel = closed_form_report(Variant.WHEEL_SEED, m, t)
        built = build_wheel(m, t)

        assert wheel.vertices == base.vertices
        assert wheel.edges.numerator == built.num_edges
        assert wheel.edges.numerator > base.edges.numerator
        assert wheel.average_degree.value == Fraction(2 * built.num_edges, built.n)

    def test_deleted(self):
        report = closed_form_report(Variant.WHEEL_DELETED, 2, 1, 0.5)

        assert report.g2 is not None
        assert report.to_dict()["p"] == 0.5

    def test_header_mentions_counts(self):
        header = closed_form_report(Variant.BASE, 2, 1).header()

        assert "7" in header and "8" in header
