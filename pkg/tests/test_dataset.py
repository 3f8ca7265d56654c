import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from overlap_boost import (
    Dataset,
    DatasetError,
    FeatureExpr,
    denormalize,
    engineer_features,
    load_csv,
    minmax_normalize,
    remove_covered,
    sort_attributes_by_correlation,
)


def csv_stream(text: str) -> io.BytesIO:
    return io.BytesIO(text.encode("utf-8"))


class TestLoadCsv:
    def test_iris(self, iris_raw):
        assert iris_raw.n_cases == 150
        assert iris_raw.attributes == (
            "sepal.length",
            "sepal.width",
            "petal.length",
            "petal.width",
        )
        assert len(set(iris_raw.labels.tolist())) == 3
        assert iris_raw.case_ids.tolist() == list(range(150))

    def test_header_only(self):
        d = load_csv(csv_stream("a,b,class\n"), "class")
        assert d.n_cases == 0
        assert d.attributes == ("a", "b")

    def test_bad_cell_names_row_and_column(self):
        rows = ["a,b,class"] + [f"{i},1,x" for i in range(5)] + ["abc,1,x", "9,9,x"]
        with pytest.raises(DatasetError, match=r"row 7.*'a'.*'abc'"):
            load_csv(csv_stream("\n".join(rows) + "\n"), "class")

    def test_ragged_row(self):
        with pytest.raises(DatasetError, match="row 3"):
            load_csv(csv_stream("a,b,class\n1,2,x\n1,2\n"), "class")

    def test_missing_label_column(self):
        with pytest.raises(DatasetError, match="label column"):
            load_csv(csv_stream("a,b\n1,2\n"), "class")

    def test_missing_header(self):
        with pytest.raises(DatasetError, match="header"):
            load_csv(csv_stream(""), "class")

    def test_non_finite_rejected(self):
        with pytest.raises(DatasetError, match="non-finite"):
            load_csv(csv_stream("a,class\nnan,x\n"), "class")

    def test_export_reimports_bit_exact(self, iris_raw):
        buf = io.StringIO()
        iris_raw.to_csv(buf)
        again = load_csv(csv_stream(buf.getvalue()), "class")
        assert np.array_equal(again.cases, iris_raw.cases)
        assert again.labels.tolist() == iris_raw.labels.tolist()


class TestNormalize:
    def test_two_class_table_values(self, iris_two):
        # the scored-table petal.width values under the two-class task's own bounds
        d = minmax_normalize(iris_two)
        pw = set(np.round(d.column("petal.width"), 4).tolist())
        for expected in (0.2, 0.3333, 0.4667):
            assert expected in pw

    def test_unit_interval_and_meta(self, iris_norm, iris_raw):
        assert iris_norm.cases.min() >= 0.0 and iris_norm.cases.max() <= 1.0
        assert np.array_equal(iris_norm.norm_meta.lo, iris_raw.cases.min(axis=0))
        assert np.array_equal(iris_norm.norm_meta.hi, iris_raw.cases.max(axis=0))

    def test_already_unit_interval_unchanged(self):
        cases = np.array([[0.0, 0.5], [1.0, 0.25], [0.5, 0.0], [0.25, 1.0]])
        d = Dataset(("a", "b"), cases, np.array(["x"] * 4, object), np.arange(4))
        out = minmax_normalize(d)
        assert np.array_equal(out.cases, cases)

    def test_constant_attribute_flagged_zero(self):
        d = Dataset(
            ("a", "b"),
            np.array([[5.0, 1.0], [5.0, 2.0], [5.0, 3.0]]),
            np.array(["x"] * 3, object),
            np.arange(3),
        )
        out = minmax_normalize(d)
        assert np.array_equal(out.column("a"), np.zeros(3))
        assert out.norm_meta.constant == (0,)

    def test_empty_rejected(self):
        d = Dataset(("a",), np.empty((0, 1)), np.empty(0, object), np.empty(0, np.int64))
        with pytest.raises(DatasetError):
            minmax_normalize(d)

    def test_round_trip(self, iris_raw, iris_norm):
        back = denormalize(iris_norm)
        assert np.allclose(back.cases, iris_raw.cases, rtol=1e-9, atol=0)

    @given(
        st.lists(
            st.lists(st.floats(-1e6, 1e6), min_size=3, max_size=3),
            min_size=2,
            max_size=30,
        )
    )
    @settings(max_examples=50, deadline=None)
    def test_round_trip_property(self, rows):
        cases = np.array(rows)
        d = Dataset(
            ("a", "b", "c"),
            cases,
            np.array(["x"] * len(rows), object),
            np.arange(len(rows)),
        )
        back = denormalize(minmax_normalize(d))
        assert np.allclose(back.cases, cases, rtol=1e-9, atol=1e-9)


class TestEngineerFeatures:
    def test_difference_matches_columns(self, iris_raw):
        out = engineer_features(iris_raw, [FeatureExpr("difference", (2, 3))])
        assert out.attributes[-1] == "diff(petal.length,petal.width)"
        expected = iris_raw.column("petal.length") - iris_raw.column("petal.width")
        assert np.array_equal(out.column(out.attributes[-1]), expected)

    def test_zero_weighted_sum(self, iris_raw):
        out = engineer_features(iris_raw, [FeatureExpr("weighted_sum", (0, 1), weights=(0.0, 0.0))])
        assert np.array_equal(out.cases[:, -1], np.zeros(150))

    def test_forward_difference_oracle(self, iris_raw):
        out = engineer_features(iris_raw, [FeatureExpr("forward_difference", (0, 1, 2, 3))])
        assert out.n_attributes == 7
        rng = np.random.default_rng(7)
        for row in rng.integers(0, 150, 5):
            base = iris_raw.cases[row]
            for k in range(3):
                assert out.cases[row, 4 + k] == base[k] - base[k + 1]

    def test_backward_difference_and_trig_and_slope(self, iris_raw):
        out = engineer_features(
            iris_raw,
            [
                FeatureExpr("backward_difference", (0, 1)),
                FeatureExpr("trig", (0,), trig="sin"),
                FeatureExpr("slope", (0, 2)),
            ],
        )
        assert np.array_equal(out.cases[:, 4], iris_raw.cases[:, 1] - iris_raw.cases[:, 0])
        assert np.array_equal(out.cases[:, 5], np.sin(iris_raw.cases[:, 0]))
        assert np.array_equal(out.cases[:, 6], (iris_raw.cases[:, 2] - iris_raw.cases[:, 0]) / 2.0)

    def test_originals_bitwise_stable(self, iris_raw):
        out = engineer_features(iris_raw, [FeatureExpr("difference", (0, 1))])
        assert np.array_equal(
            out.cases[:, :4].view(np.uint64), iris_raw.cases.view(np.uint64)
        )

    def test_invalid_operand_rejected(self, iris_raw):
        with pytest.raises(DatasetError, match="out of range"):
            engineer_features(iris_raw, [FeatureExpr("difference", (0, 9))])

    def test_normalized_dataset_new_columns_get_own_bounds(self, iris_norm):
        out = engineer_features(iris_norm, [FeatureExpr("difference", (2, 3))])
        col = out.cases[:, -1]
        assert col.min() >= 0.0 and col.max() <= 1.0
        raw = iris_norm.cases[:, 2] - iris_norm.cases[:, 3]
        assert out.norm_meta.lo[-1] == raw.min()
        assert out.norm_meta.hi[-1] == raw.max()


class TestAttributeOrdering:
    def test_perfectly_correlated_adjacent(self):
        rng = np.random.default_rng(0)
        a = rng.random(40)
        noise = rng.random(40)
        cases = np.column_stack([a, noise, 2.0 * a + 1.0])
        d = Dataset(("a", "n", "a2"), cases, np.array(["x"] * 40, object), np.arange(40))
        order = sort_attributes_by_correlation(d)
        ia, ia2 = order.index("a"), order.index("a2")
        assert abs(ia - ia2) == 1

    def test_iris_petal_pair_adjacent(self, iris_raw):
        # petal.length / petal.width have the highest pairwise |r| in this data
        R = np.corrcoef(iris_raw.cases, rowvar=False)
        np.fill_diagonal(R, 0)
        i, j = np.unravel_index(np.argmax(np.abs(R)), R.shape)
        assert {iris_raw.attributes[i], iris_raw.attributes[j]} == {
            "petal.length",
            "petal.width",
        }
        order = sort_attributes_by_correlation(iris_raw)
        assert abs(order.index("petal.length") - order.index("petal.width")) == 1

    def test_single_attribute(self):
        d = Dataset(("a",), np.array([[1.0], [2.0]]), np.array(["x", "y"], object), np.arange(2))
        assert sort_attributes_by_correlation(d) == ["a"]

    def test_constant_attribute_participates(self):
        cases = np.array([[1.0, 5.0], [2.0, 5.0], [3.0, 5.0]])
        d = Dataset(("a", "c"), cases, np.array(["x"] * 3, object), np.arange(3))
        order = sort_attributes_by_correlation(d)
        assert sorted(order) == ["a", "c"]


class TestRemoveCovered:
    def test_remove_class(self, iris_raw):
        setosa_ids = iris_raw.case_ids[iris_raw.labels == "Setosa"]
        out = remove_covered(iris_raw, setosa_ids)
        assert out.n_cases == 100
        assert set(out.labels.tolist()) == {"Versicolor", "Virginica"}
        # survivors keep their original ids
        assert set(out.case_ids.tolist()) == set(range(150)) - set(setosa_ids.tolist())

    def test_empty_set_identity(self, iris_raw):
        out = remove_covered(iris_raw, set())
        assert np.array_equal(out.cases, iris_raw.cases)

    def test_remove_all(self, iris_raw):
        out = remove_covered(iris_raw, set(iris_raw.case_ids.tolist()))
        assert out.n_cases == 0
        assert out.attributes == iris_raw.attributes

    def test_unknown_id_rejected(self, iris_raw):
        with pytest.raises(DatasetError, match="999"):
            remove_covered(iris_raw, {999})

    def test_idempotent_and_commutes(self, iris_raw):
        a = {0, 1, 2}
        b = {50, 51}
        once = remove_covered(iris_raw, a)
        # removing the already-gone ids again is a no-op on the survivors
        again = remove_covered(once, a & set(once.case_ids.tolist()))
        assert np.array_equal(again.cases, once.cases)
        ab = remove_covered(remove_covered(iris_raw, a), b)
        ba = remove_covered(remove_covered(iris_raw, b), a)
        assert np.array_equal(ab.cases, ba.cases)
        assert np.array_equal(ab.case_ids, ba.case_ids)
        assert np.array_equal(ab.cases, remove_covered(iris_raw, a | b).cases)

    @given(st.sets(st.integers(0, 149), max_size=40))
    @settings(max_examples=30, deadline=None)
    def test_size_contract(self, iris_raw, covered):
        out = remove_covered(iris_raw, covered)
        assert out.n_cases == 150 - len(covered)


def test_monotonic_chain_destroyed_by_normalization(iris_raw, iris_norm):
    def chain_count(d, cls):
        M = d.cases[d.labels == cls]
        return int(np.sum(np.all(M[:, :-1] > M[:, 1:], axis=1)))

    assert chain_count(iris_raw, "Setosa") == 50
    after = chain_count(iris_norm, "Setosa")
    assert after < 50
    assert after == 0  # enumerated over the bundled 150-case file and pinned
