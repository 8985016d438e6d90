"""Rao score statistics for adding feature terms to the node-wise model y_k ~ y_{-k}.

Everything that does not involve the candidate feature (the null fit, the
weights and the inverse label information block) lives in a
:class:`NullModelCache` built once per label. Scoring a feature is then a
handful of weighted inner products, vectorized over feature columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .logistic import LogisticConfig, fit_mle

# v at or below this (relative to x'Wx) counts as exact collinearity
COLLINEAR_TOL = 1e-12
# spectral cutoff for the multivariate information matrix
PINV_RTOL = 1e-10


@dataclass(frozen=True)
class NullModelCache:
    label_index: int
    theta_hat: np.ndarray
    W_diag: np.ndarray
    A_inv: np.ndarray
    residuals: np.ndarray
    other_labels: np.ndarray
    degenerate: bool = False
    singular: bool = False

    @property
    def n(self) -> int:
        return self.residuals.shape[0]


@dataclass(frozen=True)
class ScoreResult:
    value: float
    collinear: bool = False
    components: dict = field(default_factory=dict)


def build_null_cache(Y, k: int, config: LogisticConfig | None = None) -> NullModelCache:
    """Fit ``y_k ~ y_{-k}`` (no intercept) and precompute W, A^{-1} and residuals."""
    Y = np.asarray(Y, dtype=float)
    if Y.ndim != 2 or Y.shape[1] < 2:
        raise ValueError("need a label matrix with at least two columns")
    if not 0 <= k < Y.shape[1]:
        raise IndexError(f"label index {k} out of range for K={Y.shape[1]}")
    yk = Y[:, k]
    others = np.delete(Y, k, axis=1)
    fit = fit_mle(others, yk, config)
    p = fit.fitted_probabilities
    w = p * (1.0 - p)
    cfg = config or LogisticConfig()
    # on 0/1 regressors a coefficient this large means odds beyond e^15: the
    # ridge, not the data, is holding the fit finite (separation)
    separated = bool(np.any(np.abs(fit.coefficients) > 0.5 * cfg.coef_cap))
    degenerate = bool(separated or fit.capped or not fit.converged or yk.min() == yk.max())

    A = (others * w[:, None]).T @ others
    A = 0.5 * (A + A.T)
    eig = np.linalg.eigvalsh(A)
    singular = bool(eig[-1] <= 0.0 or eig[0] <= 1e-10 * eig[-1])
    A_inv = np.linalg.pinv(A, hermitian=True) if singular else np.linalg.inv(A)
    A_inv = 0.5 * (A_inv + A_inv.T)

    resid = yk - p
    for arr in (w, A_inv, resid, others):
        arr.flags.writeable = False
    return NullModelCache(
        label_index=k,
        theta_hat=np.append(fit.coefficients, 0.0),
        W_diag=w,
        A_inv=A_inv,
        residuals=resid,
        other_labels=others,
        degenerate=degenerate,
        singular=singular,
    )


def _as_columns(cache: NullModelCache, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.shape[0] != cache.n:
        raise ValueError(f"expected {cache.n} rows, got array of shape {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError("feature values must be finite")
    return X


def score_columns(cache: NullModelCache, X) -> tuple[np.ndarray, np.ndarray]:
    """Univariate score statistic for every column of ``X``.

    Returns ``(u, collinear)``: ``u[j] = s_j^2 / v_j`` with
    ``s_j = x_j'(y_k - p)`` and ``v_j = x_j'Wx_j - B_j'A^{-1}B_j``, and a flag
    marking columns whose Schur complement vanished (those get ``u = 0``).
    """
    X = _as_columns(cache, X)
    WX = X * cache.W_diag[:, None]
    s = X.T @ cache.residuals
    B = cache.other_labels.T @ WX
    D = np.einsum("ij,ij->j", X, WX)
    v = D - np.einsum("ij,ij->j", B, cache.A_inv @ B)
    collinear = v <= COLLINEAR_TOL * np.maximum(1.0, D)
    u = np.zeros(X.shape[1])
    ok = ~collinear
    u[ok] = np.abs(s[ok] ** 2 / v[ok])
    return u, collinear


def score_univariate(cache: NullModelCache, xj) -> ScoreResult:
    xj = np.asarray(xj, dtype=float)
    if xj.ndim != 1:
        raise ValueError("xj must be a vector")
    u, col = score_columns(cache, xj)
    return ScoreResult(float(u[0]), bool(col[0]))


def interaction_design(cache: NullModelCache, xj) -> np.ndarray:
    """Columns ``(x_j * y_l for l != k, x_j)`` of the feature-dependent model."""
    xj = np.asarray(xj, dtype=float)
    return np.column_stack([cache.other_labels * xj[:, None], xj])


def score_multivariate(cache: NullModelCache, M) -> ScoreResult:
    """Joint score statistic ``|S' V^+ S|`` for the block of columns ``M``."""
    M = _as_columns(cache, M)
    WM = M * cache.W_diag[:, None]
    S = M.T @ cache.residuals
    B = cache.other_labels.T @ WM
    V = M.T @ WM - B.T @ cache.A_inv @ B
    V = 0.5 * (V + V.T)
    evals, evecs = np.linalg.eigh(V)
    top = evals[-1] if evals.size else 0.0
    if top <= 0.0:
        return ScoreResult(0.0, True)
    keep = evals > PINV_RTOL * top
    proj = evecs[:, keep].T @ S
    value = float(abs(np.sum(proj ** 2 / evals[keep])))
    return ScoreResult(value, bool(not keep.all()), {"rank": int(keep.sum())})


def interaction_scores(cache: NullModelCache, X) -> tuple[np.ndarray, np.ndarray]:
    """Per-term scores of the feature-dependent model, for all columns of ``X``.

    Returns ``(main, inter)`` where ``main[j] = u_k(x_j)`` and
    ``inter[l, j] = u_k(x_j * y_l)`` over the labels ``l != k`` in their
    original order.
    """
    X = _as_columns(cache, X)
    main, _ = score_columns(cache, X)
    others = cache.other_labels
    inter = np.empty((others.shape[1], X.shape[1]))
    for l in range(others.shape[1]):
        inter[l], _ = score_columns(cache, X * others[:, l:l + 1])
    return main, inter
