"""Figures written next to the CSV reports."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed metadata keeps PNG output byte-stable across runs
_PNG_META = {"Software": None}


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata=_PNG_META)
    plt.close(fig)


def plot_roc(curves, path, mean=None, title="Feature ranking ROC"):
    """Per-run ROC curves (thin) and their mean (thick) on one axis.

    ``curves`` is a list of ``(label, RocCurve)``; ``mean`` an optional
    ``(fpr, tpr, auc)`` triple.
    """
    fig, ax = plt.subplots(figsize=(4.5, 4.5))
    for label, roc in curves:
        ax.plot(roc.fpr, roc.tpr, lw=0.8, alpha=0.5,
                label=f"{label} ({roc.auc:.3f})" if len(curves) <= 8 else None)
    if mean is not None:
        fpr, tpr, auc = mean
        ax.plot(fpr, tpr, color="k", lw=2, label=f"mean ({auc:.3f})")
    ax.plot([0, 1], [0, 1], ls=":", color="grey", lw=0.8)
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1.02)
    ax.set_xlabel("FPR(k)")
    ax.set_ylabel("TPR(k)")
    ax.set_title(title)
    ax.legend(loc="lower right", fontsize=7, frameon=False)
    _finish(fig, path)


def plot_selection(prefix_scores, chosen_size, path):
    fig, ax = plt.subplots(figsize=(5, 3.2))
    sizes = range(1, len(prefix_scores) + 1)
    ax.plot(sizes, prefix_scores, marker="o", ms=3)
    ax.axvline(chosen_size, color="grey", ls="--", lw=0.8)
    ax.set_xlabel("prefix size")
    ax.set_ylabel("validation subset accuracy")
    ax.spines["right"].set_visible(False)
    ax.spines["top"].set_visible(False)
    _finish(fig, path)
