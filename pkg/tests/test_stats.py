"""Statistics against scipy references (test-side dependency only)."""

import random

import pytest
import scipy.stats

from argex.stats import (
    chi_square_sf,
    chi_square_vs_chance,
    normal_sf,
    rank_data,
    wilcoxon_rank_sum,
)


class TestNormalSf:
    @pytest.mark.parametrize("z", [-8.0, -3.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.96, 3.0, 8.0, 37.0])
    def test_matches_scipy(self, z):
        assert normal_sf(z) == pytest.approx(scipy.stats.norm.sf(z), rel=1e-12, abs=1e-300)

    def test_hand_values(self):
        assert normal_sf(0.0) == 0.5
        assert normal_sf(1.959963984540054) == pytest.approx(0.025, abs=1e-12)


class TestChiSquareSf:
    def test_twenty_point_grid_within_1e10(self):
        grid = [0.01 * 1.9 ** i for i in range(20)]  # 0.01 .. ~3500, log-spaced
        assert len(grid) == 20
        for x in grid:
            reference = scipy.stats.chi2.sf(x, df=1)
            assert abs(chi_square_sf(x) - reference) <= 1e-10, x

    def test_zero(self):
        assert chi_square_sf(0.0) == 1.0

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            chi_square_sf(-0.1)


class TestChiSquareVsChance:
    def test_62_of_100(self):
        result = chi_square_vs_chance(62, 100)
        assert result.statistic == pytest.approx(5.76, abs=1e-12)
        assert result.p_value == pytest.approx(0.0164, abs=5e-5)
        assert result.p_value == pytest.approx(scipy.stats.chi2.sf(5.76, 1), rel=1e-12)

    def test_72_of_100(self):
        result = chi_square_vs_chance(72, 100)
        assert result.statistic == pytest.approx(19.36, abs=1e-12)
        assert result.p_value == pytest.approx(scipy.stats.chi2.sf(19.36, 1), rel=1e-12)

    def test_yates_correction(self):
        result = chi_square_vs_chance(62, 100)
        assert result.yates_statistic == pytest.approx(5.29, abs=1e-12)
        assert result.yates_p_value == pytest.approx(scipy.stats.chi2.sf(5.29, 1), rel=1e-12)

    def test_yates_cannot_cross_zero(self):
        # |wins - n/2| < 0.5 would go negative without the max(0, .) clamp
        result = chi_square_vs_chance(5, 10)
        assert result.yates_statistic == 0.0
        assert result.yates_p_value == 1.0

    def test_chance_level(self):
        result = chi_square_vs_chance(50, 100)
        assert result.statistic == 0.0
        assert result.p_value == 1.0

    @pytest.mark.parametrize("wins,n", [(-1, 10), (11, 10), (0, 0)])
    def test_bounds_validated(self, wins, n):
        with pytest.raises(ValueError):
            chi_square_vs_chance(wins, n)

    @pytest.mark.parametrize("wins,n", [(0, 1), (1, 1), (3, 7), (49, 50), (333, 1000)])
    def test_matches_scipy_chisquare(self, wins, n):
        result = chi_square_vs_chance(wins, n)
        reference = scipy.stats.chisquare([wins, n - wins])
        assert result.statistic == pytest.approx(reference.statistic, rel=1e-12, abs=1e-12)
        assert result.p_value == pytest.approx(reference.pvalue, rel=1e-9, abs=1e-300)


class TestRankData:
    def test_midranks(self):
        assert rank_data([10.0, 20.0, 20.0, 30.0]) == [1.0, 2.5, 2.5, 4.0]

    def test_rank_conservation_identity(self):
        rng = random.Random(17)
        for _ in range(50):
            n = rng.randint(1, 60)
            values = [float(rng.randint(0, 5)) for _ in range(n)]
            ranks = rank_data(values)
            assert sum(ranks) == n * (n + 1) / 2  # exact: midranks are halves

    def test_matches_scipy_rankdata(self):
        rng = random.Random(23)
        for _ in range(20):
            values = [rng.choice([0.5, 1.0, 2.5, 7.0]) for _ in range(rng.randint(1, 30))]
            assert rank_data(values) == list(scipy.stats.rankdata(values))


class TestWilcoxonRankSum:
    def test_separated_samples(self):
        result = wilcoxon_rank_sum([1.0, 2.0, 3.0], [4.0, 5.0])
        assert result.statistic == 6.0
        assert not result.degenerate

    def test_identical_samples_degenerate(self):
        result = wilcoxon_rank_sum([1.0, 1.0], [1.0, 1.0])
        assert result.degenerate
        assert result.p_value == 1.0

    def test_mirror_pair_ties_p_one(self):
        result = wilcoxon_rank_sum([1.0, 2.0], [1.0, 2.0])
        assert result.p_value == 1.0

    def test_empty_samples(self):
        with pytest.raises(ValueError):
            wilcoxon_rank_sum([], [1.0])

    def test_hundred_randomized_tied_samples_match_scipy(self):
        rng = random.Random(4242)
        checked = 0
        while checked < 100:
            n1, n2 = rng.randint(2, 40), rng.randint(2, 40)
            if rng.random() < 0.5:
                pool = [float(rng.randint(0, 6)) for _ in range(200)]  # heavy ties
            else:
                pool = [rng.uniform(0, 1) for _ in range(200)]
            a = [rng.choice(pool) for _ in range(n1)]
            b = [rng.choice(pool) for _ in range(n2)]
            mine = wilcoxon_rank_sum(a, b)
            if mine.degenerate:
                assert len(set(a) | set(b)) == 1
                continue
            reference = scipy.stats.mannwhitneyu(
                a, b, use_continuity=True, alternative="two-sided", method="asymptotic"
            )
            # scipy reports U for the first sample; convert to the rank sum
            expected_w = reference.statistic + len(a) * (len(a) + 1) / 2
            assert mine.statistic == pytest.approx(expected_w, abs=1e-9)
            assert mine.p_value == pytest.approx(reference.pvalue, rel=1e-9, abs=1e-12)
            checked += 1

    def test_statistic_is_first_sample_rank_sum(self):
        rng = random.Random(9)
        for _ in range(20):
            a = [float(rng.randint(0, 4)) for _ in range(rng.randint(2, 15))]
            b = [float(rng.randint(0, 4)) for _ in range(rng.randint(2, 15))]
            result = wilcoxon_rank_sum(a, b)
            assert result.statistic == sum(rank_data(a + b)[: len(a)])
