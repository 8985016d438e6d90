import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from mlrank.dataset import DatasetError, MultiLabelDataset, discretize, load_csv, split, \
    standardize, write_csv
from oracles import rank_quantile_codes


def _ds(X, Y=None):
    X = np.asarray(X, float)
    if X.ndim == 1:
        X = X[:, None]
    if Y is None:
        Y = np.tile([0, 1], (X.shape[0], 1))
    return MultiLabelDataset(X, Y)


def test_load_small_file(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("0.5,1.5,0,1\n-2,3,1,1\n7,8e-3,0,0\n")
    ds = load_csv(f, 2, has_header=False)
    assert (ds.n, ds.p, ds.K) == (3, 2, 2)
    assert ds.features[2, 1] == 8e-3
    assert ds.labels.tolist() == [[0, 1], [1, 1], [0, 0]]


def test_load_header_names(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("a,b,l1,l2\n1,2,0,1\n3,4,1,0\n")
    ds = load_csv(f, 2, has_header=True)
    assert ds.n == 2
    assert ds.feature_names == ["a", "b"]
    assert ds.label_names == ["l1", "l2"]


def test_labels_first(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("l1,l2,a\n0,1,2.5\n1,0,3.5\n")
    ds = load_csv(f, 2, labels_first=True)
    assert ds.feature_names == ["a"]
    assert ds.features[:, 0].tolist() == [2.5, 3.5]
    assert ds.labels.tolist() == [[0, 1], [1, 0]]


def test_non_binary_label_names_location(tmp_path):
    f = tmp_path / "d.csv"
    f.write_text("a,l1,l2\n1,0,1\n2,2,0\n")
    with pytest.raises(DatasetError, match=r"row 3, column 2.*'2'"):
        load_csv(f, 2)


@pytest.mark.parametrize("body,msg", [
    ("a,l1,l2\n1,0\n", "expected 3 columns"),
    ("a,l1,l2\nxx,0,1\n", "row 2, column 1"),
    ("a,l1,l2\n,0,1\n", "missing value"),
    ("a,l1,l2\nnan,0,1\n", "non-finite"),
])
def test_malformed_rows(tmp_path, body, msg):
    f = tmp_path / "d.csv"
    f.write_text(body)
    with pytest.raises(DatasetError, match=msg):
        load_csv(f, 2)


def test_invariants_enforced():
    with pytest.raises(DatasetError):
        MultiLabelDataset(np.zeros((3, 1)), np.zeros((2, 2)))
    with pytest.raises(DatasetError):
        MultiLabelDataset(np.zeros((3, 1)), np.zeros((3, 1)))
    with pytest.raises(DatasetError):
        MultiLabelDataset(np.array([[np.inf], [0]]), np.zeros((2, 2)))


def test_round_trip_bit_exact(tmp_path, rng):
    X = rng.standard_normal((20, 4)) * 10.0 ** rng.integers(-8, 8, (20, 4))
    ds = MultiLabelDataset(X, rng.integers(0, 2, (20, 3)))
    write_csv(ds, tmp_path / "d.csv")
    back = load_csv(tmp_path / "d.csv", 3)
    assert np.array_equal(back.features, ds.features)
    assert np.array_equal(back.labels, ds.labels)
    assert back.feature_names == ds.feature_names


def test_split_sizes_and_determinism():
    ds = _ds(np.arange(10.0))
    s = split(ds, 0.7, 0.3, seed=1)
    assert (len(s.train_idx), len(s.val_idx), len(s.test_idx)) == (7, 3, 0)
    s2 = split(ds, 0.5, 0.0, seed=1)
    assert (len(s2.train_idx), len(s2.test_idx)) == (5, 5)
    again = split(ds, 0.7, 0.3, seed=1)
    assert np.array_equal(s.train_idx, again.train_idx)
    assert np.array_equal(s.val_idx, again.val_idx)


@pytest.mark.parametrize("tr,va", [(0.0, 0.2), (1.2, 0.0), (0.6, 0.5), (0.5, -0.1)])
def test_split_rejects_bad_fractions(tr, va):
    with pytest.raises(ValueError):
        split(_ds(np.arange(10.0)), tr, va)


@settings(max_examples=50, deadline=None)
@given(n=st.integers(1, 200), tr=st.floats(0.05, 0.95), seed=st.integers(0, 2**32 - 1))
def test_split_disjoint(n, tr, seed):
    va = (1 - tr) / 2
    if int(tr * n + 0.5) < 1:
        with pytest.raises(ValueError, match="empty"):
            split(n, tr, va, seed)
        return
    s = split(n, tr, va, seed)
    allidx = np.concatenate([s.train_idx, s.val_idx, s.test_idx])
    assert len(np.unique(allidx)) == len(allidx) == n
    assert len(s.train_idx) >= 1


def test_discretize_equal_frequency():
    ds, dmap = discretize(_ds(np.arange(1.0, 101.0)), 10)
    codes = ds.features[:, 0].astype(int)
    assert np.bincount(codes).tolist() == [10] * 10
    assert np.all(np.diff(dmap.boundaries[0]) > 0)


def test_discretize_ties_match_oracle():
    values = np.array([1.0, 1.0, 1.0, 2.0])
    ds, _ = discretize(_ds(values), 2)
    expected = rank_quantile_codes(values, 2)
    assert expected.tolist() == [0, 0, 0, 1]
    assert ds.features[:, 0].astype(int).tolist() == expected.tolist()


def test_discretize_constant_and_errors():
    ds, _ = discretize(_ds(np.full(7, 3.3)), 4)
    assert np.all(ds.features == 0)
    with pytest.raises(ValueError):
        discretize(_ds(np.arange(5.0)), 1)


@settings(max_examples=40, deadline=None)
@given(arrays(np.float64, st.tuples(st.integers(2, 60), st.integers(1, 4)),
              elements=st.floats(-1e6, 1e6)), st.integers(2, 12))
def test_discretize_preserves_rows_and_labels(X, bins):
    Y = np.tile([1, 0], (X.shape[0], 1))
    ds = MultiLabelDataset(X, Y)
    out, _ = discretize(ds, bins)
    assert out.features.shape == X.shape
    assert np.array_equal(out.labels, ds.labels)
    assert out.features.min() >= 0 and out.features.max() <= bins - 1
    # codes are monotone in the raw values
    for j in range(X.shape[1]):
        o = np.argsort(X[:, j], kind="stable")
        assert np.all(np.diff(out.features[o, j]) >= 0)


def test_standardize_population_sd():
    out = standardize(_ds(np.array([0.0, 2.0])))
    # mean 1, population sd 1
    assert out.features[:, 0].tolist() == [-1.0, 1.0]


def test_standardize_idempotent_and_constant(rng):
    X = np.column_stack([rng.standard_normal(50), np.full(50, 4.2)])
    once = standardize(_ds(X))
    twice = standardize(once)
    assert np.allclose(once.features, twice.features, atol=1e-12, rtol=0)
    assert np.all(once.features[:, 1] == 0)
    assert abs(once.features[:, 0].mean()) < 1e-12
    assert abs(once.features[:, 0].std() - 1) < 1e-12
