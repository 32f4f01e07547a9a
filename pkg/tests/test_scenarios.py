"""Scenario suite geometry, random baselines, and the length study."""

import numpy as np
import pytest

from pate.scenarios import (
    PATE_F1_ORDERINGS,
    PATE_ORDERINGS,
    SUITE_ANOMALY,
    SUITE_LENGTH,
    check_orderings,
    evaluate_suite,
    length_study,
    random_scores,
    scenario,
    scenario_names,
)


class TestScenarioGeometry:
    def test_names(self):
        names = scenario_names()
        assert len(names) == 20
        assert "S3" in names and "p7" in names

    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError, match="unknown scenario"):
            scenario("S11")

    def test_exact_detection_scenario(self):
        sc = scenario("S3")
        assert sc.prediction == sc.anomaly

    def test_early_false_alarm_has_no_overlap(self):
        sc = scenario("S1")
        assert sc.prediction.end < sc.anomaly.start

    def test_delayed_only_scenario_sits_in_post_buffer(self):
        sc = scenario("S5")
        assert sc.prediction.start == sc.anomaly.end + 1
        assert sc.prediction.end <= sc.anomaly.end + sc.d_max

    def test_labels_and_scores_are_binary_and_consistent(self):
        for name in scenario_names():
            sc = scenario(name)
            assert len(sc.labels) == SUITE_LENGTH
            assert set(np.unique(sc.scores.values)) <= {0.0, 1.0}
            on = np.flatnonzero(sc.labels.values) + 1
            assert on[0] == SUITE_ANOMALY.start and on[-1] == SUITE_ANOMALY.end

    def test_p_suite_mirrors_s_suite(self):
        assert scenario("p4").prediction == scenario("S4").prediction


class TestSuiteScores:
    def test_pate_orderings_hold(self):
        results = evaluate_suite("S")
        assert results["S3"] == pytest.approx(1.0, abs=1e-12)
        assert all(ok for _, _, ok in check_orderings(results, PATE_ORDERINGS))

    def test_pate_f1_orderings_hold(self):
        results = evaluate_suite("p")
        assert results["p3"] == pytest.approx(1.0, abs=1e-12)
        assert results["p1"] == 0.0
        assert all(ok for _, _, ok in check_orderings(results, PATE_F1_ORDERINGS))

    def test_perturbation_breaks_orderings(self):
        perturbed = evaluate_suite("S", perturb=0.5)
        assert not all(ok for _, _, ok in check_orderings(perturbed, PATE_ORDERINGS))


class TestRandomScores:
    def test_deterministic_for_seed(self):
        a = random_scores(500, seed=42).values
        b = random_scores(500, seed=42).values
        np.testing.assert_array_equal(a, b)

    def test_mean_near_half(self):
        values = random_scores(100_000, seed=0).values
        assert abs(values.mean() - 0.5) < 0.01

    def test_different_seeds_differ_almost_everywhere(self):
        a = random_scores(10_000, seed=1).values
        b = random_scores(10_000, seed=2).values
        assert np.count_nonzero(a != b) >= 9_900

    def test_range(self):
        values = random_scores(10_000, seed=3).values
        assert values.min() >= 0.0 and values.max() < 1.0


class TestLengthStudy:
    def test_single_point_anomaly_profile(self):
        table = length_study([1], d=3)
        np.testing.assert_allclose(table[1], [1 - 1 / 3, 1 - 2 / 3, 0.0])

    def test_weight_zero_at_buffer_end(self):
        for L in (1, 2, 7):
            table = length_study([L], d=4)
            assert table[L][-1] == pytest.approx(0.0)

    def test_shorter_anomaly_earns_more(self):
        table = length_study([1, 5], d=6)
        assert np.all(table[1][:-1] > table[5][:-1])

    def test_monotone_in_offset_and_length(self):
        table = length_study([1, 2, 4, 9], d=8)
        for profile in table.values():
            assert np.all(np.diff(profile) < 0)
        lengths = sorted(table)
        for a, b in zip(lengths, lengths[1:]):
            assert np.all(table[a] >= table[b])
