"""Contingency-table filter statistics used by the BR and LP baselines."""

from __future__ import annotations

import numpy as np


def contingency_table(feature_codes, target_codes) -> np.ndarray:
    f = np.asarray(feature_codes).ravel()
    t = np.asarray(target_codes).ravel()
    if f.size == 0:
        raise ValueError("empty input")
    if f.shape != t.shape:
        raise ValueError("feature and target code vectors differ in length")
    _, fi = np.unique(f, return_inverse=True)
    _, ti = np.unique(t, return_inverse=True)
    table = np.zeros((fi.max() + 1, ti.max() + 1))
    np.add.at(table, (fi, ti), 1.0)
    return table


def chi2_from_table(table: np.ndarray) -> float:
    table = np.asarray(table, dtype=float)
    n = table.sum()
    if n <= 0:
        return 0.0
    expected = np.outer(table.sum(axis=1), table.sum(axis=0)) / n
    mask = expected > 0
    return float(np.sum((table[mask] - expected[mask]) ** 2 / expected[mask]))


def _entropy(counts: np.ndarray) -> float:
    counts = counts[counts > 0]
    q = counts / counts.sum()
    return float(-np.sum(q * np.log(q)))


def info_gain_from_table(table: np.ndarray) -> float:
    table = np.asarray(table, dtype=float)
    n = table.sum()
    if n <= 0:
        return 0.0
    h_target = _entropy(table.sum(axis=0))
    h_cond = 0.0
    for row in table:
        m = row.sum()
        if m > 0:
            h_cond += m / n * _entropy(row)
    # clip round-off below zero
    return max(0.0, h_target - h_cond)


def chi2_statistic(feature_codes, target_codes) -> float:
    """Pearson chi-squared statistic of the feature-by-target table."""
    return chi2_from_table(contingency_table(feature_codes, target_codes))


def info_gain(feature_codes, target_codes) -> float:
    """Plug-in information gain H(target) - H(target | feature), in nats."""
    return info_gain_from_table(contingency_table(feature_codes, target_codes))


STATISTICS = {"chi2": chi2_statistic, "ig": info_gain}
