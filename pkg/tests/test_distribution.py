import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fairdist.core import LimitError, MeasureId, Stratum, stratum_from_ratios
from fairdist.distribution import (
    Pmf,
    bin_histogram,
    fairness_bin_index,
    group_statistic_pmf,
    joint_heatmap,
    merge_pmfs,
    perf_bin_index,
    perfect_fairness_prob,
    stratum_pmf_bruteforce,
    stratum_pmf_fast,
    sweep_curve,
    undefined_prob,
)
from fairdist.enumeration import enumerate_all, stratum_count, total_count
from fairdist.measures import measure_value, perf_value

from helpers import bucket_by_stratum, oracle_pmf

AE = MeasureId.ACCURACY_EQUALITY
SP = MeasureId.STATISTICAL_PARITY
EO = MeasureId.EQUAL_OPPORTUNITY
PE = MeasureId.PREDICTIVE_EQUALITY
PPP = MeasureId.POSITIVE_PREDICTIVE_PARITY
NPP = MeasureId.NEGATIVE_PREDICTIVE_PARITY

F = Fraction


def pmfs_equal(a: Pmf, b: Pmf) -> bool:
    return a.entries == b.entries and a.undefined_count == b.undefined_count and a.total == b.total


class TestGroupStatisticPmf:
    def test_equal_opportunity_2_1(self):
        pmf = group_statistic_pmf(EO, 2, 1)
        assert pmf.entries == {F(0): 2, F(1, 2): 2, F(1): 2}
        assert (pmf.undefined_count, pmf.total) == (0, 6)

    def test_equal_opportunity_no_positives(self):
        pmf = group_statistic_pmf(EO, 0, 3)
        assert pmf.entries == {}
        assert (pmf.undefined_count, pmf.total) == (4, 4)

    def test_positive_predictive_parity_1_1(self):
        pmf = group_statistic_pmf(PPP, 1, 1)
        assert pmf.entries == {F(0): 1, F(1, 2): 1, F(1): 1}
        assert (pmf.undefined_count, pmf.total) == (1, 4)

    def test_negative_cell_rejected(self):
        with pytest.raises(ValueError):
            group_statistic_pmf(EO, -1, 2)

    @settings(max_examples=60, deadline=None)
    @given(measure=st.sampled_from(list(MeasureId)), pos=st.integers(0, 7), neg=st.integers(0, 7))
    def test_matches_direct_tuple_walk(self, measure, pos, neg):
        from helpers import oracle_stat

        entries: dict[Fraction, int] = {}
        undefined = 0
        for tp in range(pos + 1):
            for fp in range(neg + 1):
                v = oracle_stat(measure.value, tp, pos - tp, fp, neg - fp)
                if v is None:
                    undefined += 1
                else:
                    entries[v] = entries.get(v, 0) + 1
        pmf = group_statistic_pmf(measure, pos, neg)
        assert pmf.entries == entries
        assert pmf.undefined_count == undefined
        assert pmf.total == (pos + 1) * (neg + 1)


class TestStratumPmf:
    def test_accuracy_equality_2_1_1(self):
        pmf = stratum_pmf_fast(AE, Stratum(2, 1, 1))
        assert pmf.entries == {F(-1): 2, F(0): 4, F(1): 2}
        assert (pmf.undefined_count, pmf.total) == (0, 8)

    def test_statistical_parity_2_1_1(self):
        pmf = stratum_pmf_fast(SP, Stratum(2, 1, 1))
        assert pmf.entries == {F(-1): 2, F(0): 4, F(1): 2}

    def test_equal_opportunity_4_2_2(self):
        pmf = stratum_pmf_fast(EO, Stratum(4, 2, 2))
        assert pmf.entries == {F(-1): 4, F(0): 8, F(1): 4}
        assert (pmf.undefined_count, pmf.total) == (18, 34)

    @pytest.mark.parametrize("n", [2, 4, 6])
    def test_fast_equals_bruteforce(self, n):
        for p in range(n + 1):
            for n_p in range(n + 1):
                s = Stratum(n, p, n_p)
                for m in MeasureId:
                    assert pmfs_equal(stratum_pmf_fast(m, s), stratum_pmf_bruteforce(m, s)), (m, s)

    @pytest.mark.parametrize("n", [3, 5])
    def test_fast_equals_independent_oracle(self, n):
        buckets = bucket_by_stratum(n)
        for (p, n_p), flats in buckets.items():
            for m in MeasureId:
                entries, undefined, total = oracle_pmf(m.value, flats)
                pmf = stratum_pmf_fast(m, Stratum(n, p, n_p))
                assert pmf.entries == entries
                assert pmf.undefined_count == undefined
                assert pmf.total == total

    def test_bruteforce_parallel_matches_serial(self):
        s = Stratum(6, 3, 3)
        for m in (AE, PPP):
            assert pmfs_equal(stratum_pmf_bruteforce(m, s, workers=3), stratum_pmf_bruteforce(m, s))

    @pytest.mark.parametrize("n", [4, 6])
    def test_conservation(self, n):
        for p in range(n + 1):
            for n_p in range(n + 1):
                s = Stratum(n, p, n_p)
                for m in MeasureId:
                    pmf = stratum_pmf_fast(m, s).check()
                    assert pmf.total == stratum_count(s)

    @pytest.mark.parametrize("n", [4, 6, 8, 10])
    def test_ae_sp_identity(self, n):
        for p in range(n + 1):
            for n_p in range(n + 1):
                s = Stratum(n, p, n_p)
                assert pmfs_equal(stratum_pmf_fast(AE, s), stratum_pmf_fast(SP, s))

    @pytest.mark.parametrize("n", [4, 6, 8, 10])
    def test_class_swap_duality(self, n):
        for p in range(n + 1):
            for n_p in range(n + 1):
                here = Stratum(n, p, n_p)
                mirrored = Stratum(n, n - p, n_p)
                assert pmfs_equal(stratum_pmf_fast(PE, here), stratum_pmf_fast(EO, mirrored))
                assert pmfs_equal(stratum_pmf_fast(NPP, here), stratum_pmf_fast(PPP, mirrored))

    @pytest.mark.parametrize("n", [4, 6, 8])
    def test_group_mirror_identity(self, n):
        for p in range(n + 1):
            for n_p in range(n + 1):
                for m in MeasureId:
                    here = stratum_pmf_fast(m, Stratum(n, p, n_p))
                    there = stratum_pmf_fast(m, Stratum(n, p, n - n_p))
                    assert there.entries == {-v: c for v, c in here.entries.items()}
                    assert there.undefined_count == here.undefined_count

    def test_merge_pmfs(self):
        a = Pmf({F(0): 2}, 1, 3)
        b = Pmf({F(0): 1, F(1): 1}, 0, 2)
        merged = merge_pmfs([a, b])
        assert merged.entries == {F(0): 3, F(1): 1}
        assert (merged.undefined_count, merged.total) == (1, 5)


class TestProbabilities:
    def test_perfect_fairness_example(self):
        pmf = stratum_pmf_fast(AE, Stratum(2, 1, 1))
        assert perfect_fairness_prob(pmf) == F(1, 2)

    def test_perfect_fairness_with_undefined_mass(self):
        pmf = stratum_pmf_fast(EO, Stratum(4, 2, 2))
        assert perfect_fairness_prob(pmf) == F(4, 17)
        assert perfect_fairness_prob(pmf, defined_only=True) == F(1, 2)

    def test_perfect_fairness_absent(self):
        assert perfect_fairness_prob(Pmf({F(1): 3}, 0, 3)) == 0

    def test_empty_pmf_rejected(self):
        with pytest.raises(ValueError):
            perfect_fairness_prob(Pmf({}, 0, 0))
        with pytest.raises(ValueError):
            undefined_prob(Pmf({}, 0, 0))

    def test_defined_only_requires_defined_mass(self):
        with pytest.raises(ValueError):
            perfect_fairness_prob(Pmf({}, 5, 5), defined_only=True)

    def test_undefined_prob_example(self):
        assert undefined_prob(stratum_pmf_fast(EO, Stratum(4, 2, 2))) == F(9, 17)

    @pytest.mark.parametrize("n", [4, 6, 8])
    def test_ae_never_undefined_with_both_groups(self, n):
        for p in range(n + 1):
            for n_p in range(1, n):
                for m in (AE, SP):
                    assert undefined_prob(stratum_pmf_fast(m, Stratum(n, p, n_p))) == 0

    def test_empty_group_everything_undefined(self):
        for m in MeasureId:
            assert undefined_prob(stratum_pmf_fast(m, Stratum(4, 2, 0))) == 1


class TestBinning:
    def test_three_bins(self):
        pmf = Pmf({F(-1): 2, F(0): 4, F(1): 2}, 0, 8)
        assert bin_histogram(pmf, 3).counts == [2, 4, 2]

    def test_zero_lands_in_central_bin(self):
        hist = bin_histogram(Pmf({F(0): 9}, 0, 9), 41)
        assert hist.counts[20] == 9
        assert sum(hist.counts) == 9

    def test_right_edge_clamped(self):
        assert bin_histogram(Pmf({F(1): 5}, 0, 5), 3).counts == [0, 0, 5]

    def test_even_bins_rejected(self):
        with pytest.raises(ValueError):
            bin_histogram(Pmf({F(0): 1}, 0, 1), 40)

    def test_undefined_carried_through(self):
        hist = bin_histogram(Pmf({F(0): 1}, 7, 8), 3)
        assert hist.undefined_count == 7

    def test_interior_edge_goes_up(self):
        # bins of width 2/5: -3/5 is the edge between bins 0 and 1
        assert fairness_bin_index(F(-3, 5), 5) == 1
        assert fairness_bin_index(F(-1), 5) == 0
        assert fairness_bin_index(F(1), 5) == 4

    def test_bin_edges(self):
        assert bin_histogram(Pmf({F(0): 1}, 0, 1), 3).bin_edges == [F(-1), F(-1, 3), F(1, 3), F(1)]

    def test_perf_bins_exact_and_sqrt(self):
        assert perf_bin_index(F(1, 2), 10) == 5  # exact edge goes up
        assert perf_bin_index(F(1), 10) == 9
        # sqrt(1/4) = 1/2 sits on the 5-bin edge: ties resolve downward
        assert perf_bin_index(F(1, 4), 10, take_sqrt=True) == 4
        assert perf_bin_index(F(0), 10, take_sqrt=True) == 0
        assert perf_bin_index(F(1), 10, take_sqrt=True) == 9


class TestSweep:
    def test_low_ir_boosts_equal_opportunity_perfect_fairness(self):
        grid = [F(1, 28), F(1, 2)]
        curve = sweep_curve(EO, 56, "ir", grid, F(1, 2), "perfect-fairness")
        values = dict(curve.points)
        assert values[F(1, 28)] > values[F(1, 2)]

    def test_accuracy_equality_has_no_undefined_inside(self):
        curve = sweep_curve(AE, 8, "gr", [F(1, 4), F(1, 2), F(3, 4)], F(1, 2), "undefined")
        assert [v for _, v in curve.points] == [0, 0, 0]

    def test_unique_values_match_bruteforce_keys(self):
        curve = sweep_curve(EO, 4, "ir", [F(1, 2)], F(1, 2), "unique-values")
        brute = stratum_pmf_bruteforce(EO, Stratum(4, 2, 2))
        assert curve.points[0][1] == len(brute.entries)

    def test_inexact_grid_point_rejected(self):
        with pytest.raises(Exception, match="IR 1/3"):
            sweep_curve(EO, 10, "ir", [F(1, 2), F(1, 3)], F(1, 2), "perfect-fairness")

    def test_unknown_statistic_rejected(self):
        with pytest.raises(ValueError, match="unknown statistic"):
            sweep_curve(EO, 4, "ir", [F(1, 2)], F(1, 2), "mean")

    def test_workers_do_not_change_results(self):
        grid = [F(1, 8), F(1, 4), F(1, 2)]
        serial = sweep_curve(EO, 8, "ir", grid, F(1, 2), "perfect-fairness", workers=1)
        parallel = sweep_curve(EO, 8, "ir", grid, F(1, 2), "perfect-fairness", workers=3)
        assert serial.points == parallel.points


def oracle_heatmap(measure, perf, n, f_bins, p_bins):
    """Independent accumulation via exact measure values and bin rules."""
    cells = [[0] * p_bins for _ in range(f_bins)]
    fair_undef = perf_undef = 0
    for pair in enumerate_all(n):
        perf_v = perf_value(perf, pair)
        if perf_v is None:
            perf_undef += 1
            continue
        fair_v = measure_value(measure, pair)
        if fair_v is None:
            fair_undef += 1
            continue
        f_idx = fairness_bin_index(fair_v, f_bins)
        p_idx = perf_bin_index(perf_v, p_bins, take_sqrt=(perf == "g-mean"))
        cells[f_idx][p_idx] += 1
    return cells, fair_undef, perf_undef


class TestJointHeatmap:
    def test_single_example_gmean_all_undefined(self):
        heat = joint_heatmap(AE, "g-mean", 1, 3, 3)
        assert heat.perf_undefined == 8
        assert heat.fairness_undefined == 0
        assert sum(sum(row) for row in heat.cells) == 0

    def test_known_pair_lands_in_central_fairness_top_accuracy(self):
        # {p:{1,0,0,0}, up:{0,0,0,1}}: fairness 0 -> central bin, accuracy 1 -> last bin
        heat = joint_heatmap(AE, "accuracy", 2, 3, 3)
        assert heat.cells[1][2] >= 1

    @pytest.mark.parametrize("measure", [AE, EO, PPP])
    @pytest.mark.parametrize("perf", ["accuracy", "g-mean"])
    def test_matches_oracle_small(self, measure, perf):
        n, f_bins, p_bins = 4, 5, 4
        heat = joint_heatmap(measure, perf, n, f_bins, p_bins)
        cells, fair_undef, perf_undef = oracle_heatmap(measure, perf, n, f_bins, p_bins)
        assert heat.cells == cells
        assert heat.fairness_undefined == fair_undef
        assert heat.perf_undefined == perf_undef

    def test_conservation(self):
        heat = joint_heatmap(EO, "g-mean", 3, 3, 3)
        accounted = sum(sum(row) for row in heat.cells) + heat.fairness_undefined + heat.perf_undefined
        assert accounted == heat.total == total_count(3)

    def test_stratified_restriction(self):
        s = Stratum(4, 2, 2)
        heat = joint_heatmap(EO, "accuracy", 4, 3, 3, stratum=s)
        assert heat.total == stratum_count(s)
        assert heat.fairness_undefined == stratum_pmf_fast(EO, s).undefined_count

    def test_workers_do_not_change_results(self):
        one = joint_heatmap(EO, "accuracy", 5, 5, 5, workers=1)
        many = joint_heatmap(EO, "accuracy", 5, 5, 5, workers=4)
        assert one.cells == many.cells
        assert (one.fairness_undefined, one.perf_undefined) == (many.fairness_undefined, many.perf_undefined)

    def test_enumeration_budget_enforced(self):
        with pytest.raises(LimitError, match="n=32"):
            joint_heatmap(AE, "accuracy", 500, 3, 3)

    def test_even_fairness_bins_rejected(self):
        with pytest.raises(ValueError):
            joint_heatmap(AE, "accuracy", 2, 4, 3)


class TestIntegerStatPath:
    def test_matches_group_statistic_everywhere(self):
        from fairdist.distribution import _stat_ints
        from fairdist.core import GroupCounts
        from fairdist.measures import group_statistic

        for total in range(7):
            for tp in range(total + 1):
                for fn in range(total - tp + 1):
                    for fp in range(total - tp - fn + 1):
                        tn = total - tp - fn - fp
                        g = GroupCounts(tp, fn, fp, tn)
                        for m in MeasureId:
                            num, den = _stat_ints(m.value, tp, fn, fp, tn)
                            expected = group_statistic(m, g)
                            if den == 0:
                                assert expected is None
                            else:
                                assert expected == Fraction(num, den)
