import json

import numpy as np
import pytest

from overlap_boost import (
    Dataset,
    DecisionList,
    Fallback,
    IntervalRule,
    discover_pure_intervals,
    dnc_run,
    prune_redundant,
    to_generalized_dt,
)
from oracles import brute_force_pure_intervals, greedy_decision_list_oracle, random_labeled_dataset


def small(cases, labels, names=None):
    cases = np.asarray(cases, dtype=np.float64)
    if cases.ndim == 1:
        cases = cases.reshape(-1, 1)
    names = names or tuple(f"a{j}" for j in range(cases.shape[1]))
    return Dataset(tuple(names), cases, np.array(labels, object), np.arange(len(labels), dtype=np.int64))


class TestDiscoverPureIntervals:
    def test_normalized_iris_petal_width_virginica(self, iris_norm):
        rules = discover_pure_intervals(iris_norm, "petal.width")
        virginica = [r for r in rules if r.label == "Virginica"]
        assert len(virginica) == 1
        rule = virginica[0]
        assert rule.lo == pytest.approx(0.75, abs=0.005)
        assert rule.hi == pytest.approx(1.00, abs=0.005)
        assert rule.coverage == 34
        assert rule.class_share == pytest.approx(0.68)

    def test_raw_petal_length_tail_is_pure_virginica(self, iris_raw):
        rules = discover_pure_intervals(iris_raw, "petal.length")
        top = max(rules, key=lambda r: r.hi)
        assert top.label == "Virginica"
        assert top.lo > 5.1  # the run starts just above the last shared value
        col = iris_raw.column("petal.length")
        tail = col > 5.1
        assert (iris_raw.labels[tail] == "Virginica").all()
        assert top.coverage == int(tail.sum())

    def test_single_class_dataset_one_full_span_rule(self):
        d = small([1.0, 3.0, 2.0, 5.0], ["x", "x", "x", "x"])
        rules = discover_pure_intervals(d, 0)
        assert len(rules) == 1
        assert (rules[0].lo, rules[0].hi) == (1.0, 5.0)
        assert rules[0].coverage == 4

    def test_value_ties_across_classes_break_purity(self):
        d = small([1.0, 2.0, 2.0, 3.0], ["x", "x", "y", "y"])
        rules = discover_pure_intervals(d, 0)
        assert {(r.lo, r.hi, r.label) for r in rules} == {(1.0, 1.0, "x"), (3.0, 3.0, "y")}

    def test_min_coverage_filters(self, iris_norm):
        rules = discover_pure_intervals(iris_norm, "petal.width", min_coverage=30)
        assert all(r.coverage >= 30 for r in rules)
        assert {r.label for r in rules} == {"Setosa", "Virginica"}

    def test_matches_brute_force_on_iris(self, iris_norm):
        for attr in range(iris_norm.n_attributes):
            got = discover_pure_intervals(iris_norm, attr)
            expected = brute_force_pure_intervals(iris_norm, attr, 1)
            assert [(r.lo, r.hi, r.label, r.coverage) for r in got] == [
                (r.lo, r.hi, r.label, r.coverage) for r in expected
            ]


class TestPruneRedundant:
    def test_two_full_covers_keep_one(self, iris_norm):
        # the last two axes each hold a run covering all 50 Setosa cases
        pl = [r for r in discover_pure_intervals(iris_norm, "petal.length") if r.label == "Setosa"]
        pw = [r for r in discover_pure_intervals(iris_norm, "petal.width") if r.label == "Setosa"]
        assert pl[0].coverage == 50 and pw[0].coverage == 50
        retained = prune_redundant(pl + pw, iris_norm)
        assert len(retained) == 1
        assert retained[0].attribute == 2  # tie broken toward the lower attribute index

    def test_disjoint_rules_all_retained(self):
        d = small([0.0, 1.0, 5.0, 6.0], ["x", "x", "y", "y"])
        rules = discover_pure_intervals(d, 0)
        assert len(prune_redundant(rules, d)) == len(rules)

    def test_nested_rule_dropped(self):
        d = small(
            [[0.0, 0.1], [1.0, 0.2], [2.0, 5.0], [3.0, 6.0]],
            ["x", "x", "y", "y"],
        )
        big = discover_pure_intervals(d, 0)  # covers x{0,1} and y{2,3} fully
        nested = [
            r for r in discover_pure_intervals(d, 1) if r.label == "x" and r.coverage == 2
        ]
        retained = prune_redundant(big + nested, d)
        covered_attrs = {r.attribute for r in retained}
        assert covered_attrs == {0}

    def test_union_preserved(self, iris_norm):
        rules = []
        for a in range(iris_norm.n_attributes):
            rules.extend(discover_pure_intervals(iris_norm, a))
        retained = prune_redundant(rules, iris_norm)
        union_all = np.zeros(iris_norm.n_cases, dtype=bool)
        union_kept = np.zeros(iris_norm.n_cases, dtype=bool)
        for r in rules:
            union_all |= r.covered_mask(iris_norm.cases)
        for r in retained:
            union_kept |= r.covered_mask(iris_norm.cases)
        assert np.array_equal(union_all, union_kept)


class TestDncRun:
    def test_iris_three_class_classifies_everything(self, iris_norm):
        dl = dnc_run(iris_norm, min_coverage=1)
        predicted = dl.classify(iris_norm.cases)
        correct = sum(p == t for p, t in zip(predicted, iris_norm.labels))
        assert correct == 150

    def test_iris_coarse_coverage_leaves_tail_to_fallback(self, iris_norm):
        # with min_coverage 3 the three stragglers around the class boundary
        # cannot form a qualifying run; the majority fallback absorbs them
        dl = dnc_run(iris_norm, min_coverage=3)
        predicted = dl.classify(iris_norm.cases)
        correct = sum(p == t for p, t in zip(predicted, iris_norm.labels))
        assert correct == 149
        assert dl.fallback.kind == "majority_class"

    def test_identical_values_across_classes_fall_back(self):
        d = small([1.0, 1.0, 1.0, 1.0], ["x", "y", "x", "y"])
        dl = dnc_run(d, min_coverage=1)
        assert dl.rules == ()
        assert dl.fallback.kind == "majority_class"
        assert dl.fallback.label == "x"  # tie broken alphabetically

    def test_planted_bands_match_greedy_oracle(self):
        rng = np.random.default_rng(0)
        lo_band = rng.uniform(0.0, 0.4, 20)
        hi_band = rng.uniform(0.6, 1.0, 20)
        second = rng.uniform(0.0, 1.0, 40)
        cases = np.column_stack([np.concatenate([lo_band, hi_band]), second])
        labels = np.array(["lo"] * 20 + ["hi"] * 20, object)
        d = Dataset(("a0", "a1"), cases, labels, np.arange(40, dtype=np.int64))
        got = dnc_run(d, min_coverage=2)
        expected = greedy_decision_list_oracle(d, min_coverage=2)
        assert got.to_json() == expected.to_json()

    def test_random_datasets_match_oracle(self):
        rng = np.random.default_rng(123)
        for _ in range(10):
            d = random_labeled_dataset(rng, max_cases=60)
            got = dnc_run(d, min_coverage=2, max_iterations=6)
            expected = greedy_decision_list_oracle(d, min_coverage=2, max_iterations=6)
            assert got.to_json() == expected.to_json()

    def test_progress_every_iteration(self, iris_norm):
        dl = dnc_run(iris_norm, min_coverage=3)
        iterations = [r.iteration for r in dl.rules]
        assert iterations == sorted(iterations)
        # each iteration removed at least one case
        by_iter = {}
        for r in dl.rules:
            by_iter[r.iteration] = by_iter.get(r.iteration, 0) + r.coverage
        assert all(v > 0 for v in by_iter.values())

    def test_interactive_hooks_can_reject(self, iris_norm):
        seen = []

        def hooks(iteration, candidates, remaining):
            seen.append((iteration, len(candidates), remaining.n_cases))
            return candidates[:1] if iteration == 1 else []

        dl = dnc_run(iris_norm, min_coverage=3, interactive_hooks=hooks)
        assert len(seen) == 2  # second round's candidates were all rejected -> stop
        assert all(r.iteration == 1 for r in dl.rules)
        assert dl.fallback.kind == "majority_class"

    def test_stored_coverage_matches_reevaluation(self, iris_norm):
        dl = dnc_run(iris_norm, min_coverage=3)
        counts = dl.first_match_counts(iris_norm.cases)
        assert counts == [r.coverage for r in dl.rules]


class TestDecisionList:
    def test_serialization_roundtrip_classifies_identically(self, iris_norm):
        dl = dnc_run(iris_norm, min_coverage=3)
        blob = json.dumps(dl.to_json())
        again = DecisionList.from_json(json.loads(blob))
        assert again.classify(iris_norm.cases) == dl.classify(iris_norm.cases)
        assert [r.coverage for r in again.rules] == [r.coverage for r in dl.rules]

    def test_purity_on_induction_snapshot(self, iris_norm):
        # every case whose first match is rule r carries r's label
        dl = dnc_run(iris_norm, min_coverage=3)
        taken = np.zeros(iris_norm.n_cases, dtype=bool)
        for rule in dl.rules:
            hit = rule.covered_mask(iris_norm.cases) & ~taken
            assert (iris_norm.labels[hit] == rule.label).all()
            taken |= hit

    def test_first_match_order(self):
        rules = (
            IntervalRule(0, "a0", 0.0, 10.0, "x", 1, 2),
            IntervalRule(0, "a0", 5.0, 10.0, "y", 2, 1),
        )
        dl = DecisionList(rules, Fallback("abstain"), ("a0",))
        assert dl.classify_one(np.array([7.0])) == "x"  # earlier rule wins
        assert dl.classify_one(np.array([99.0])) is None

    def test_text_rendering_mentions_rules_and_fallback(self, iris_norm):
        dl = dnc_run(iris_norm, min_coverage=3)
        text = dl.to_text()
        assert "If" in text and "then x is" in text
        assert text.count("\n") == len(dl.rules)


class TestGeneralizedDT:
    def test_single_iteration_three_rules_depth_one(self):
        rules = tuple(
            IntervalRule(0, "a0", float(i), float(i) + 0.5, lbl, 1, 1)
            for i, lbl in enumerate(["x", "y", "z"])
        )
        dt = to_generalized_dt(DecisionList(rules, Fallback("abstain"), ("a0",)))
        assert dt.root.iteration == 1
        assert len(dt.root.leaves) == 3
        assert dt.root.else_node is None

    def test_agrees_with_list_on_iris(self, iris_norm):
        dl = dnc_run(iris_norm, min_coverage=3)
        dt = to_generalized_dt(dl)
        assert dt.classify(iris_norm.cases) == dl.classify(iris_norm.cases)

    def test_empty_list_single_fallback_node(self):
        dt = to_generalized_dt(DecisionList((), Fallback("majority_class", "x"), ("a0",)))
        assert dt.root is None
        assert dt.classify_one(np.array([0.0])) == "x"
        assert "[fallback]" in dt.to_text()

    def test_agrees_on_offband_inputs(self, iris_norm):
        dl = dnc_run(iris_norm, min_coverage=3)
        dt = to_generalized_dt(dl)
        rng = np.random.default_rng(5)
        X = rng.uniform(-0.5, 1.5, size=(200, 4))
        assert dt.classify(X) == dl.classify(X)
