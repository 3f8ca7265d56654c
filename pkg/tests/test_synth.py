import io

import numpy as np
import pytest

from overlap_boost import (
    Hyperblock,
    LinearScorer,
    OverlapInterval,
    PureRegion,
    evaluate_overlap,
    find_misclassified,
    generate_synthetic,
    pure_area_evidence,
)
from overlap_boost.overlap import compute_overlap_interval
from overlap_boost.scorers import score_dataset


def unit_box(k=2):
    return Hyperblock(np.zeros(k), np.ones(k), tuple(f"a{i}" for i in range(k)))


class TestGeneration:
    def test_seed_determinism_bitwise(self):
        hb = unit_box()
        a = generate_synthetic(hb, "uniform_hb", 10, seed=42)
        b = generate_synthetic(hb, "uniform_hb", 10, seed=42)
        assert np.array_equal(a.cases.view(np.uint64), b.cases.view(np.uint64))
        c = generate_synthetic(hb, "uniform_hb", 10, seed=43)
        assert not np.array_equal(a.cases, c.cases)

    def test_degenerate_box_replicates_point(self):
        hb = Hyperblock(np.array([0.3, 0.7]), np.array([0.3, 0.7]), ("a", "b"))
        batch = generate_synthetic(hb, "uniform_hb", 5, seed=0)
        assert batch.degenerate
        assert np.array_equal(batch.cases, np.tile([0.3, 0.7], (5, 1)))

    def test_uniform_fills_box_within_one_percent(self):
        hb = Hyperblock(np.array([0.2, -1.0]), np.array([0.6, 3.0]), ("a", "b"))
        batch = generate_synthetic(hb, "uniform_hb", 10_000, seed=1)
        assert batch.cases.min(axis=0) == pytest.approx(hb.lo, abs=0.01 * (hb.hi - hb.lo).max())
        assert batch.cases.max(axis=0) == pytest.approx(hb.hi, abs=0.01 * (hb.hi - hb.lo).max())
        assert hb.contains(batch.cases).all()

    def test_gaussian_clipped_inside(self):
        hb = Hyperblock(np.array([0.0, 0.0]), np.array([1.0, 2.0]), ("a", "b"))
        batch = generate_synthetic(hb, "gaussian_center", 2000, seed=2)
        assert hb.contains(batch.cases).all()
        center = (hb.lo + hb.hi) / 2
        assert batch.cases.mean(axis=0) == pytest.approx(center, abs=0.05)

    def test_marginal_pure_draws_member_values(self):
        members = np.array([[0.1, 5.0], [0.2, 6.0], [0.3, 7.0]])
        region = PureRegion(members, ("a", "b"))
        batch = generate_synthetic(region, "marginal_pure", 50, seed=3)
        for j in range(2):
            assert set(batch.cases[:, j].tolist()) <= set(members[:, j].tolist())

    def test_bad_inputs(self):
        with pytest.raises(ValueError, match="n >= 1"):
            generate_synthetic(unit_box(), "uniform_hb", 0, seed=0)
        with pytest.raises(ValueError, match="unknown generation mode"):
            generate_synthetic(unit_box(), "smote", 5, seed=0)
        with pytest.raises(ValueError, match="PureRegion"):
            generate_synthetic(unit_box(), "marginal_pure", 5, seed=0)

    def test_csv_provenance_header(self):
        batch = generate_synthetic(unit_box(), "uniform_hb", 3, seed=7)
        buf = io.StringIO()
        batch.to_csv(buf)
        header = buf.getvalue().splitlines()[0]
        assert header.startswith("# mode=uniform_hb seed=7 region=hb:")


class TestEvaluateOverlap:
    @pytest.fixture()
    def iris_overlap(self, iris_scorer, iris_scores, iris_two_norm):
        interval = compute_overlap_interval(
            iris_scores, iris_two_norm.labels, iris_scorer.threshold, "Versicolor", "Virginica"
        )
        inside = interval.contains(iris_scores.values)
        cases = iris_two_norm.select_rows(
            iris_two_norm.rows_for_ids(iris_scores.case_ids[inside])
        )
        mis = find_misclassified(
            iris_scores, iris_two_norm.labels, iris_scorer.threshold, "Versicolor", "Virginica"
        )
        return interval, cases, mis

    def test_iris_overlap_numbers(self, iris_scorer, iris_overlap):
        interval, cases, mis = iris_overlap
        report = evaluate_overlap(iris_scorer, cases, interval)
        assert report.n_overlap == 8
        assert report.n_mis == 2
        assert report.error_rate == 0.25
        assert report.accuracy == 0.75

    def test_confusion_marginals(self, iris_scorer, iris_overlap):
        interval, cases, _ = iris_overlap
        report = evaluate_overlap(iris_scorer, cases, interval)
        total = sum(sum(row.values()) for row in report.confusion.values())
        assert total == report.n_overlap
        for cls, row in report.confusion.items():
            assert sum(row.values()) == int((cases.labels == cls).sum())

    def test_weighted_accuracy_reported(self, iris_scorer, iris_overlap):
        interval, cases, mis = iris_overlap
        report = evaluate_overlap(iris_scorer, cases, interval, (2.0, 1.0), set(mis.tolist()))
        # both formerly misclassified cases are still wrong under the same scorer
        assert report.weighted_accuracy == 1.0 * (report.n_overlap - report.n_mis)

    def test_perfect_model(self, iris_overlap, iris_two_norm):
        interval, cases, _ = iris_overlap

        class Oracle:
            def classify(self, X):
                return cases.labels.copy()

            def score(self, X):
                return np.full(len(X), interval.a)

        report = evaluate_overlap(Oracle(), cases, interval)
        assert report.n_mis == 0
        assert report.accuracy == 1.0
        for t, row in report.confusion.items():
            for p, count in row.items():
                assert count == 0 or t == p

    def test_misclassified_scores_always_hit_interval(self, iris_scorer, iris_overlap, iris_two_norm):
        interval, _, mis = iris_overlap
        mis_cases = iris_two_norm.select_rows(iris_two_norm.rows_for_ids(mis))
        report = evaluate_overlap(iris_scorer, mis_cases, interval)
        assert report.overlap_hit_fraction == 1.0


class TestPureAreaEvidence:
    def test_all_outside_is_pure_evidence(self):
        f = LinearScorer(np.array([1.0]), 0.5, "u", "b")
        interval = OverlapInterval(0.4, 0.6)
        batch = generate_synthetic(
            Hyperblock(np.array([0.8]), np.array([0.9]), ("a",)), "uniform_hb", 20, seed=0
        )
        report = pure_area_evidence(f, batch, interval)
        assert report.verdict == "pure_evidence"
        assert report.fraction == 0.0

    def test_hits_force_boost_verdict(self):
        f = LinearScorer(np.array([1.0]), 0.5, "u", "b")
        interval = OverlapInterval(0.4, 0.6)
        batch = generate_synthetic(
            Hyperblock(np.array([0.3]), np.array([0.7]), ("a",)), "uniform_hb", 200, seed=1
        )
        report = pure_area_evidence(f, batch, interval)
        assert report.verdict == "boost_both_areas"
        assert report.fraction > 0

    def test_pure_area_marginals_can_leak_into_interval(
        self, iris_scorer, iris_scores, iris_two_norm
    ):
        # resampling attribute marginals of pure-area cases produces polylines
        # that score inside the overlap interval: evidence more boosting is needed
        interval = compute_overlap_interval(
            iris_scores, iris_two_norm.labels, iris_scorer.threshold, "Versicolor", "Virginica"
        )
        outside = ~interval.contains(iris_scores.values)
        region = PureRegion(iris_two_norm.cases[outside], iris_two_norm.attributes)
        batch = generate_synthetic(region, "marginal_pure", 25, seed=0)
        real_fraction = float((~outside).mean())
        report = pure_area_evidence(iris_scorer, batch, interval, real_fraction)
        assert report.verdict == "boost_both_areas"
        assert report.fraction > real_fraction
        assert report.discrepancy_ratio == report.fraction / real_fraction

    def test_discrepancy_ratio(self):
        f = LinearScorer(np.array([1.0]), 0.5, "u", "b")
        interval = OverlapInterval(0.0, 1.0)

        class Batch:
            cases = np.linspace(0.0, 2.0, 10).reshape(-1, 1)

        report = pure_area_evidence(f, Batch(), interval, real_fraction=0.125)
        # 5 of 10 scores fall inside [0, 1] -> 0.5 vs the real 0.125 -> ratio 4
        assert report.fraction == 0.5
        assert report.discrepancy_ratio == 4.0
