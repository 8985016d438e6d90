import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from mlrank.dataset import MultiLabelDataset
from mlrank.evaluation import classification_metrics, ranking_roc, select_features


def test_perfect_and_reversed_rankings():
    order = np.array([2, 0, 4, 1, 3])
    assert ranking_roc(order, {2, 0}).auc == 1.0
    assert ranking_roc(order[::-1], {2, 0}).auc == 0.0


def test_roc_points_monotone_end_at_one(rng):
    roc = ranking_roc(rng.permutation(30), range(7))
    assert np.all(np.diff(roc.fpr) >= 0) and np.all(np.diff(roc.tpr) >= 0)
    assert roc.points[-1] == (1.0, 1.0)
    assert 0.0 <= roc.auc <= 1.0


def test_random_rankings_average_half():
    rng = np.random.default_rng(0)
    aucs = [ranking_roc(rng.permutation(50), range(10)).auc for _ in range(200)]
    assert abs(np.mean(aucs) - 0.5) <= 0.05


@pytest.mark.parametrize("relevant", [set(), set(range(4)), {7}])
def test_roc_argument_errors(relevant):
    with pytest.raises(ValueError):
        ranking_roc(np.arange(4), relevant)


def test_identical_predictions(rng):
    Y = rng.integers(0, 2, (20, 4))
    m = classification_metrics(Y, Y)
    assert (m.subset_accuracy, m.hamming, m.jaccard) == (1.0, 1.0, 1.0)


def test_complement_prediction(rng):
    Y = rng.integers(0, 2, (20, 4))
    m = classification_metrics(Y, 1 - Y)
    assert m.subset_accuracy == 0.0 and m.hamming == 0.0


def test_empty_union_counts_as_match():
    assert classification_metrics([[0, 0]], [[0, 0]]).jaccard == 1.0


def test_metric_shape_mismatch():
    with pytest.raises(ValueError, match="shape"):
        classification_metrics(np.zeros((2, 3)), np.zeros((2, 2)))


@settings(max_examples=100, deadline=None)
@given(arrays(np.int8, st.tuples(st.integers(1, 10), st.integers(1, 5)), elements=st.integers(0, 1)),
       st.integers(0, 2**32 - 1))
def test_metric_ordering(T, seed):
    P = np.random.default_rng(seed).integers(0, 2, T.shape)
    m = classification_metrics(T, P)
    assert 0 <= m.subset_accuracy <= m.hamming <= 1
    assert 0 <= m.subset_accuracy <= m.jaccard <= 1


def _selection_data(seed, n=300, p=50):
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, p))
    Y = np.column_stack([X[:, 3] > 0, X[:, 3] > 0.5]).astype(int)
    return MultiLabelDataset(X, Y)


def test_budget_and_single_perfect_feature():
    ds = _selection_data(0)
    order = np.r_[3, np.delete(np.arange(50), 3)]
    res = select_features(ds, order, budget_frac=0.2)
    assert res.budget == 10
    assert len(res.prefix_scores) == 10
    assert res.chosen_subset == (3,)
    assert res.model.feature_subset == (3,)


def test_ties_go_to_smallest_prefix():
    # labels constant: every prefix predicts perfectly
    rng = np.random.default_rng(1)
    ds = MultiLabelDataset(rng.standard_normal((60, 10)),
                           np.column_stack([np.ones(60), np.zeros(60)]).astype(int))
    res = select_features(ds, np.arange(10), budget_frac=0.5)
    assert np.all(res.prefix_scores == res.prefix_scores[0])
    assert len(res.chosen_subset) == 1


@settings(max_examples=10, deadline=None)
@given(st.floats(0.02, 1.0), st.integers(0, 1000))
def test_never_exceeds_budget(frac, seed):
    ds = _selection_data(seed, n=80, p=12)
    res = select_features(ds, np.random.default_rng(seed).permutation(12), budget_frac=frac)
    assert 1 <= len(res.chosen_subset) <= res.budget
    assert res.prefix_scores[len(res.chosen_subset) - 1] == res.prefix_scores.max()


def test_selection_deterministic():
    ds = _selection_data(2, n=200, p=20)
    order = np.random.default_rng(3).permutation(20)
    a = select_features(ds, order, seed=5)
    b = select_features(ds, order, seed=5)
    assert a.chosen_subset == b.chosen_subset
    assert np.array_equal(a.prefix_scores, b.prefix_scores)


def test_selection_errors():
    ds = _selection_data(0, n=50, p=10)
    with pytest.raises(ValueError):
        select_features(ds, np.arange(10), budget_frac=0.0)
    with pytest.raises(ValueError):
        select_features(ds, np.arange(9))
