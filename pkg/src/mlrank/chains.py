"""Classifier chains with logistic base learners."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .logistic import LogisticConfig, fit_mle

FORMAT_VERSION = 1


@dataclass(frozen=True)
class ChainLink:
    coefficients: np.ndarray
    intercept: float


@dataclass(frozen=True)
class ChainModel:
    label_order: tuple[int, ...]
    feature_subset: tuple[int, ...]
    links: tuple[ChainLink, ...]
    intercept: bool = True

    @property
    def K(self) -> int:
        return len(self.label_order)

    def to_dict(self) -> dict:
        return {
            "format": "mlrank-chain",
            "version": FORMAT_VERSION,
            "label_order": list(self.label_order),
            "feature_subset": list(self.feature_subset),
            "intercept": self.intercept,
            "links": [
                {"coefficients": [float(c) for c in link.coefficients],
                 "intercept": float(link.intercept)}
                for link in self.links
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ChainModel":
        if d.get("format") != "mlrank-chain":
            raise ValueError("not a chain model file")
        if d.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported chain model version {d.get('version')}")
        links = tuple(ChainLink(np.asarray(l["coefficients"], dtype=float), float(l["intercept"]))
                      for l in d["links"])
        model = cls(tuple(d["label_order"]), tuple(d["feature_subset"]), links,
                    bool(d["intercept"]))
        for m, link in enumerate(model.links):
            if link.coefficients.size != len(model.feature_subset) + m:
                raise ValueError(f"chain position {m} has the wrong number of coefficients")
        return model


def save_chain(model: ChainModel, path) -> None:
    Path(path).write_text(json.dumps(model.to_dict(), indent=2) + "\n", encoding="utf-8")


def load_chain(path) -> ChainModel:
    return ChainModel.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def train_chain(features, labels, feature_subset=None, order=None,
                config: LogisticConfig | None = None) -> ChainModel:
    """Fit one logistic model per label, in chain order.

    Position m sees the selected feature columns followed by the true values
    of the labels at positions 0..m-1. ``labels`` may have a single column,
    in which case this is plain logistic regression.
    """
    X = np.asarray(features, dtype=float)
    Y = np.asarray(labels)
    if Y.ndim == 1:
        Y = Y[:, None]
    K = Y.shape[1]
    subset = tuple(range(X.shape[1])) if feature_subset is None else tuple(int(j) for j in feature_subset)
    if not subset:
        raise ValueError("feature_subset must be nonempty")
    if order is None:
        order = tuple(range(K))
    order = tuple(int(k) for k in order)
    if sorted(order) != list(range(K)):
        raise ValueError(f"order must be a permutation of 0..{K - 1}")
    cfg = config or LogisticConfig(intercept=True)

    Xs = X[:, list(subset)]
    links = []
    for m, k in enumerate(order):
        design = np.column_stack([Xs, Y[:, list(order[:m])]])
        fit = fit_mle(design, Y[:, k], cfg)
        links.append(ChainLink(fit.coefficients, fit.intercept))
    return ChainModel(order, subset, tuple(links), cfg.intercept)


def predict_chain(model: ChainModel, features) -> np.ndarray:
    """Greedy chain inference: each label is 1 when its probability is >= 0.5,
    and that hard prediction feeds the later positions.

    ``features`` must hold exactly the model's feature-subset columns, in order.
    """
    X = np.asarray(features, dtype=float)
    if X.ndim != 2 or X.shape[1] != len(model.feature_subset):
        raise ValueError(
            f"expected {len(model.feature_subset)} feature columns, got shape {X.shape}"
        )
    n = X.shape[0]
    pred = np.zeros((n, model.K), dtype=np.int8)
    for m, (k, link) in enumerate(zip(model.label_order, model.links)):
        design = np.column_stack([X, pred[:, list(model.label_order[:m])]])
        eta = design @ link.coefficients + link.intercept
        # eta >= 0 is exactly probability >= 0.5
        pred[:, k] = eta >= 0.0
    return pred
