"""Ranking ROC/AUC, multi-label classification metrics and prefix feature selection."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chains import ChainModel, predict_chain, train_chain
from .dataset import MultiLabelDataset, split
from .logistic import LogisticConfig


@dataclass(frozen=True)
class RocCurve:
    fpr: np.ndarray
    tpr: np.ndarray
    auc: float

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


@dataclass(frozen=True)
class MetricsReport:
    subset_accuracy: float
    hamming: float
    jaccard: float

    def as_dict(self) -> dict:
        return {"subset_accuracy": self.subset_accuracy, "hamming": self.hamming,
                "jaccard": self.jaccard}


@dataclass(frozen=True)
class SelectionResult:
    chosen_subset: tuple[int, ...]
    prefix_scores: np.ndarray
    budget: int
    model: ChainModel | None = None


def _order_of(ranking) -> np.ndarray:
    return np.asarray(getattr(ranking, "order", ranking), dtype=int)


def ranking_roc(ranking, relevant) -> RocCurve:
    """ROC of a feature ordering against the set of truly relevant features.

    ``ranking`` is a FeatureRanking or a 0-based order. Point k is
    (FPR(k), TPR(k)) after admitting the top k features; AUC integrates the
    polyline from (0, 0) with the trapezoid rule.
    """
    order = _order_of(ranking)
    p = order.size
    rel = np.zeros(p, dtype=bool)
    idx = np.asarray(sorted(set(int(j) for j in relevant)), dtype=int)
    if idx.size and (idx.min() < 0 or idx.max() >= p):
        raise ValueError("relevant index out of range")
    rel[idx] = True
    n_rel = int(rel.sum())
    if n_rel == 0 or n_rel == p:
        raise ValueError("relevant set must be nonempty and leave at least one irrelevant feature")
    hits = rel[order]
    tpr = np.cumsum(hits) / n_rel
    fpr = np.cumsum(~hits) / (p - n_rel)
    x = np.concatenate([[0.0], fpr])
    y = np.concatenate([[0.0], tpr])
    auc = float(np.sum((x[1:] - x[:-1]) * (y[1:] + y[:-1]) / 2.0))
    return RocCurve(fpr, tpr, auc)


def classification_metrics(y_true, y_pred) -> MetricsReport:
    """Subset accuracy, Hamming and Jaccard measures averaged over instances.

    An instance with no true and no predicted positives counts as a perfect
    Jaccard match.
    """
    T = np.asarray(y_true).astype(bool)
    P = np.asarray(y_pred).astype(bool)
    if T.shape != P.shape:
        raise ValueError(f"shape mismatch: {T.shape} vs {P.shape}")
    if T.ndim != 2 or T.shape[0] == 0:
        raise ValueError("expected non-empty n x K label matrices")
    subset = np.all(T == P, axis=1).mean()
    hamming = (T == P).mean(axis=1).mean()
    inter = (T & P).sum(axis=1)
    union = (T | P).sum(axis=1)
    jac = np.where(union == 0, 1.0, inter / np.maximum(union, 1))
    return MetricsReport(float(subset), float(hamming), float(jac.mean()))


def select_features(ds: MultiLabelDataset, ranking, budget_frac: float = 0.2,
                    val_frac: float = 0.3, seed: int = 0,
                    config: LogisticConfig | None = None, order=None) -> SelectionResult:
    """Pick the ranking prefix whose classifier chain scores best on held-out rows.

    ``ds`` is split into fitting and validation parts (``val_frac`` held out);
    chains are trained on prefixes of size 1..L with L = ceil(budget_frac * p)
    and the prefix with the highest validation subset accuracy wins, the
    smallest one on ties. The returned model is refit on all of ``ds``.
    """
    if not 0.0 < budget_frac <= 1.0:
        raise ValueError(f"budget_frac must lie in (0, 1], got {budget_frac}")
    rank_order = _order_of(ranking)
    if rank_order.size != ds.p:
        raise ValueError(f"ranking covers {rank_order.size} features but dataset has {ds.p}")
    # guard against 0.2 * 50 = 10.000000000000002
    L = math.ceil(round(budget_frac * ds.p, 9))
    if L < 1:
        raise ValueError("feature budget is below one")
    parts = split(ds, 1.0 - val_frac, val_frac, seed)
    if parts.val_idx.size == 0:
        raise ValueError("validation partition is empty")
    fit_rows, val_rows = parts.train_idx, parts.val_idx
    cfg = config or LogisticConfig(intercept=True)

    scores = np.empty(L)
    for s in range(1, L + 1):
        subset = rank_order[:s]
        model = train_chain(ds.features[fit_rows], ds.labels[fit_rows], subset, order, cfg)
        pred = predict_chain(model, ds.features[np.ix_(val_rows, subset)])
        scores[s - 1] = classification_metrics(ds.labels[val_rows], pred).subset_accuracy
    best = int(np.argmax(scores)) + 1
    chosen = tuple(int(j) for j in rank_order[:best])
    final = train_chain(ds.features, ds.labels, chosen, order, cfg)
    return SelectionResult(chosen, scores, L, final)
