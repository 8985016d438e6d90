"""Feature rankers: the three Ising-model methods and the BR/LP filter baselines."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .dataset import MultiLabelDataset, discretize_array, standardize_array
from .filters import STATISTICS
from .logistic import L1Config, LogisticConfig, fit_l1, lambda_max
from .parallel import ordered_map
from .score import build_null_cache, interaction_design, interaction_scores, score_columns, \
    score_multivariate

METHODS = (
    "ising+score",
    "ising-inter+score",
    "ising+l1",
    "br-chi2",
    "br-ig",
    "lp-chi2",
    "lp-ig",
)


@dataclass(frozen=True)
class RankerConfig:
    method: str = "ising+score"
    bins: int = 10
    lambda_factor: float = 1e-4
    tau: int = 0
    standardize: bool = True
    # Sum of joint multivariate statistics instead of per-term sums (ising-inter+score)
    joint: bool = False
    threads: int | None = None
    logistic: LogisticConfig = field(default_factory=LogisticConfig)
    l1: L1Config = field(default_factory=L1Config)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; choose from {', '.join(METHODS)}")
        if int(self.bins) != self.bins or self.bins < 2:
            raise ValueError(f"bins must be an integer >= 2, got {self.bins}")
        if not self.lambda_factor > 0:
            raise ValueError(f"lambda_factor must be positive, got {self.lambda_factor}")
        if self.tau < 0:
            raise ValueError("tau must be nonnegative")


@dataclass(frozen=True)
class FeatureRanking:
    order: np.ndarray
    importances: np.ndarray
    method: str
    per_label_scores: np.ndarray | None = None
    feature_names: list[str] = field(default_factory=list)

    @classmethod
    def from_importances(cls, importances, method, per_label=None, names=None):
        imp = np.asarray(importances, dtype=float)
        # descending importance, ties by ascending index
        order = np.lexsort((np.arange(imp.size), -imp))
        return cls(order, imp, method, per_label, list(names or []))

    @property
    def p(self) -> int:
        return self.importances.size


def _ising_features(ds: MultiLabelDataset, cfg: RankerConfig) -> np.ndarray:
    return standardize_array(ds.features) if cfg.standardize else np.asarray(ds.features)


def rank_ising_score(ds: MultiLabelDataset, cfg: RankerConfig | None = None) -> FeatureRanking:
    """Importance = sum over labels of the score statistic u_k(x_j)."""
    cfg = cfg or RankerConfig("ising+score")
    X = _ising_features(ds, cfg)
    Y = ds.labels.astype(float)

    def per_label(k):
        cache = build_null_cache(Y, k, cfg.logistic)
        return score_columns(cache, X)[0]

    scores = np.column_stack(ordered_map(per_label, range(ds.K), cfg.threads))
    return FeatureRanking.from_importances(scores.sum(axis=1), "ising+score", scores,
                                           ds.feature_names)


def rank_ising_inter_score(ds: MultiLabelDataset,
                           cfg: RankerConfig | None = None) -> FeatureRanking:
    """Importance = sum_k [u_k(x_j) + sum_{s != k} u_k(x_j y_s)].

    With ``cfg.joint`` the per-label term is instead the multivariate
    statistic over the whole block ``(x_j y_{-k}, x_j)``.
    """
    cfg = cfg or RankerConfig("ising-inter+score")
    X = _ising_features(ds, cfg)
    Y = ds.labels.astype(float)

    def per_label(k):
        cache = build_null_cache(Y, k, cfg.logistic)
        if cfg.joint:
            return np.array([score_multivariate(cache, interaction_design(cache, X[:, j])).value
                             for j in range(X.shape[1])])
        main, inter = interaction_scores(cache, X)
        return main + inter.sum(axis=0)

    scores = np.column_stack(ordered_map(per_label, range(ds.K), cfg.threads))
    return FeatureRanking.from_importances(scores.sum(axis=1), "ising-inter+score", scores,
                                           ds.feature_names)


def rank_ising_l1(ds: MultiLabelDataset, cfg: RankerConfig | None = None) -> FeatureRanking:
    """Importance = sum_k |a_hat_{k,j}| from l1 fits of y_k on (y_{-k}, x)."""
    cfg = cfg or RankerConfig("ising+l1")
    X = _ising_features(ds, cfg)
    Y = ds.labels.astype(float)

    def per_label(k):
        design = np.column_stack([np.delete(Y, k, axis=1), X])
        lam = cfg.lambda_factor * lambda_max(design, Y[:, k])
        fit = fit_l1(design, Y[:, k], lam, cfg.l1)
        return np.abs(fit.coefficients[ds.K - 1:])

    coefs = np.column_stack(ordered_map(per_label, range(ds.K), cfg.threads))
    return FeatureRanking.from_importances(coefs.sum(axis=1), "ising+l1", coefs,
                                           ds.feature_names)


def _filter_scores(codes: np.ndarray, target, stat: str) -> np.ndarray:
    fn = STATISTICS[stat]
    return np.array([fn(codes[:, j], target) for j in range(codes.shape[1])])


def rank_br(ds: MultiLabelDataset, cfg: RankerConfig | None = None,
            stat: str = "chi2") -> FeatureRanking:
    """Binary relevance: sum over labels of a per-label filter statistic."""
    cfg = cfg or RankerConfig(f"br-{stat}")
    codes, _ = discretize_array(ds.features, cfg.bins)
    per = ordered_map(lambda k: _filter_scores(codes, ds.labels[:, k], stat), range(ds.K),
                      cfg.threads)
    scores = np.column_stack(per)
    return FeatureRanking.from_importances(scores.sum(axis=1), f"br-{stat}", scores,
                                           ds.feature_names)


def metaclass_codes(Y, tau: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Label-powerset target: one code per distinct label row.

    Returns ``(codes, keep)``; rows whose label combination occurs fewer than
    ``tau`` times are marked ``keep=False`` and must be left out of any
    statistic.
    """
    Y = np.asarray(Y)
    _, codes, counts = np.unique(Y, axis=0, return_inverse=True, return_counts=True)
    codes = codes.ravel()
    keep = counts[codes] >= tau
    return codes, keep


def rank_lp(ds: MultiLabelDataset, cfg: RankerConfig | None = None,
            stat: str = "chi2") -> FeatureRanking:
    """Label powerset: filter statistic against the meta-class target."""
    cfg = cfg or RankerConfig(f"lp-{stat}")
    codes, _ = discretize_array(ds.features, cfg.bins)
    target, keep = metaclass_codes(ds.labels, cfg.tau)
    if not keep.any():
        imp = np.zeros(ds.p)
    else:
        imp = _filter_scores(codes[keep], target[keep], stat)
    return FeatureRanking.from_importances(imp, f"lp-{stat}", None, ds.feature_names)


def rank(ds: MultiLabelDataset, cfg: RankerConfig) -> FeatureRanking:
    m = cfg.method
    if m == "ising+score":
        return rank_ising_score(ds, cfg)
    if m == "ising-inter+score":
        return rank_ising_inter_score(ds, cfg)
    if m == "ising+l1":
        return rank_ising_l1(ds, cfg)
    family, stat = m.split("-")
    return (rank_br if family == "br" else rank_lp)(ds, cfg, stat)


def write_ranking(ranking: FeatureRanking, path) -> None:
    """CSV with ``rank,feature_index,feature_name,importance``; indices 1-based."""
    names = ranking.feature_names or [f"x{j + 1}" for j in range(ranking.p)]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["rank", "feature_index", "feature_name", "importance"])
        for r, j in enumerate(ranking.order, start=1):
            w.writerow([r, int(j) + 1, names[j], repr(float(ranking.importances[j]))])


def read_ranking(path, method: str = "unknown") -> FeatureRanking:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: empty ranking file")
    missing = {"rank", "feature_index", "feature_name", "importance"} - set(rows[0])
    if missing:
        raise ValueError(f"{path}: missing columns {sorted(missing)}")
    rows.sort(key=lambda r: int(r["rank"]))
    order = np.array([int(r["feature_index"]) - 1 for r in rows])
    p = order.size
    if sorted(order.tolist()) != list(range(p)):
        raise ValueError(f"{path}: feature_index column is not a permutation of 1..{p}")
    imp = np.empty(p)
    names = [""] * p
    for r, j in zip(rows, order):
        imp[j] = float(r["importance"])
        names[j] = r["feature_name"]
    return FeatureRanking(order, imp, method, None, names)
