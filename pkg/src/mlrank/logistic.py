"""Logistic regression: Newton/IRLS maximum likelihood and l1-penalized CCD.

Both fitters work on an explicit design matrix without an intercept unless
``intercept=True``; the node-wise Ising regressions have no constant term.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.special import expit

PROB_EPS = 1e-15


@dataclass(frozen=True)
class LogisticConfig:
    tol: float = 1e-8
    max_iter: int = 100
    ridge: float = 1e-8
    coef_cap: float = 30.0
    intercept: bool = False


@dataclass(frozen=True)
class L1Config:
    tol: float = 1e-7
    max_iter: int = 100
    max_inner: int = 1000
    intercept: bool = False


@dataclass(frozen=True)
class LogisticFit:
    coefficients: np.ndarray
    converged: bool
    iterations: int
    final_log_likelihood: float
    fitted_probabilities: np.ndarray
    intercept: float = 0.0
    capped: bool = False

    def predict_proba(self, design: np.ndarray) -> np.ndarray:
        return predict_proba(design, self.coefficients, self.intercept)


@dataclass(frozen=True)
class L1Fit:
    coefficients: np.ndarray
    lam: float
    lambda_max: float
    iterations: int
    converged: bool
    intercept: float = 0.0


def _check_inputs(design, response):
    Z = np.asarray(design, dtype=float)
    if Z.ndim == 1:
        Z = Z[:, None]
    y = np.asarray(response, dtype=float).ravel()
    if Z.ndim != 2 or Z.shape[1] < 1:
        raise ValueError("design must be an n x d matrix with d >= 1")
    if Z.shape[0] != y.shape[0]:
        raise ValueError(f"design has {Z.shape[0]} rows but response has {y.shape[0]}")
    if not np.all(np.isfinite(Z)):
        raise ValueError("design contains non-finite entries")
    if not np.all((y == 0) | (y == 1)):
        raise ValueError("response entries must be 0 or 1")
    return Z, y


def log_likelihood(theta, design, response, intercept: float = 0.0) -> float:
    """l(theta) = sum_i [y_i eta_i - log(1 + exp(eta_i))]."""
    eta = np.asarray(design, dtype=float) @ np.asarray(theta, dtype=float) + intercept
    y = np.asarray(response, dtype=float)
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def gradient(theta, design, response, intercept: float = 0.0) -> np.ndarray:
    Z = np.asarray(design, dtype=float)
    p = expit(Z @ np.asarray(theta, dtype=float) + intercept)
    return Z.T @ (np.asarray(response, dtype=float) - p)


def predict_proba(design, coefficients, intercept: float = 0.0) -> np.ndarray:
    return expit(np.asarray(design, dtype=float) @ coefficients + intercept)


def fit_mle(design, response, config: LogisticConfig | None = None) -> LogisticFit:
    """Maximize the ridge-stabilized log-likelihood by damped Newton steps.

    The objective is ``l(theta) - ridge * |theta|^2 / 2`` with coefficients
    clipped to ``[-coef_cap, coef_cap]``. Under complete separation the cap
    is reached and the fit comes back with ``converged=False`` and
    ``capped=True`` rather than raising.
    """
    cfg = config or LogisticConfig()
    Z, y = _check_inputs(design, response)
    n, d = Z.shape
    if cfg.intercept:
        Z = np.column_stack([Z, np.ones(n)])
    m = Z.shape[1]
    # the intercept is not shrunk
    pen = np.full(m, cfg.ridge)
    if cfg.intercept:
        pen[-1] = 0.0

    def objective(theta):
        eta = Z @ theta
        return float(np.sum(y * eta - np.logaddexp(0.0, eta)) - 0.5 * np.sum(pen * theta ** 2))

    theta = np.zeros(m)
    obj = objective(theta)
    converged = False
    # one extra Newton step after the tolerance is met drives the gradient
    # to round-off, which the score statistics downstream rely on
    polished = False
    it = 0
    for it in range(1, cfg.max_iter + 1):
        p = expit(Z @ theta)
        grad = Z.T @ (y - p) - pen * theta
        small = np.max(np.abs(grad)) <= cfg.tol
        if small and polished:
            converged = True
            it -= 1
            break
        w = p * (1.0 - p)
        H = (Z * w[:, None]).T @ Z + np.diag(pen)
        try:
            step = np.linalg.solve(H, grad)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(H, grad, rcond=None)[0]
        t = 1.0
        for _ in range(40):
            cand = np.clip(theta + t * step, -cfg.coef_cap, cfg.coef_cap)
            cand_obj = objective(cand)
            if cand_obj >= obj - 1e-12 * max(1.0, abs(obj)):
                break
            t *= 0.5
        else:
            break
        moved = np.max(np.abs(cand - theta))
        theta, obj = cand, cand_obj
        if small:
            polished = True
        if moved == 0.0:
            converged = small
            break
    else:
        p = expit(Z @ theta)
        grad = Z.T @ (y - p) - pen * theta
        converged = bool(np.max(np.abs(grad)) <= cfg.tol)

    capped = bool(np.any(np.abs(theta) >= cfg.coef_cap))
    p = np.clip(expit(Z @ theta), PROB_EPS, 1.0 - PROB_EPS)
    coef = theta[:d] if cfg.intercept else theta
    b0 = float(theta[-1]) if cfg.intercept else 0.0
    return LogisticFit(
        coefficients=coef.copy(),
        converged=converged and not capped,
        iterations=it,
        final_log_likelihood=log_likelihood(coef, Z[:, :d], y, b0),
        fitted_probabilities=p,
        intercept=b0,
        capped=capped,
    )


def lambda_max(design, response, intercept: bool = False) -> float:
    """Smallest l1 penalty at which the all-zero coefficient vector is optimal.

    Without an intercept the null fit has every probability equal to 0.5;
    with one, the intercept absorbs the label mean.
    """
    Z, y = _check_inputs(design, response)
    center = y.mean() if intercept else 0.5
    return float(np.max(np.abs(Z.T @ (y - center))))


@njit(cache=True)
def _cd_quadratic(G, q, theta, penalty, tol, max_cycles):
    """Coordinate descent on 0.5 t'Gt - q't + sum_j penalty_j |t_j|, in place.

    Returns the number of cycles run.
    """
    d = theta.shape[0]
    Gt = G @ theta
    cycles = 0
    for cycles in range(1, max_cycles + 1):
        max_delta = 0.0
        for j in range(d):
            gjj = G[j, j]
            if gjj <= 0.0:
                continue
            old = theta[j]
            g = q[j] - Gt[j] + gjj * old
            lam = penalty[j]
            if g > lam:
                new = (g - lam) / gjj
            elif g < -lam:
                new = (g + lam) / gjj
            else:
                new = 0.0
            delta = new - old
            if delta != 0.0:
                theta[j] = new
                for i in range(d):
                    Gt[i] += delta * G[i, j]
                if abs(delta) > max_delta:
                    max_delta = abs(delta)
        if max_delta < tol:
            break
    return cycles


def fit_l1(design, response, lam: float, config: L1Config | None = None) -> L1Fit:
    """Minimize ``-l(theta) + lam * |theta|_1`` by cyclic coordinate descent.

    Each outer iteration replaces ``-l`` by its quadratic (IRLS) approximation
    at the current point and cycles soft-thresholded coordinate updates over
    it; a backtracking step keeps the penalized objective non-increasing.
    ``config.max_iter`` caps the number of outer iterations.
    """
    cfg = config or L1Config()
    if lam < 0:
        raise ValueError(f"lambda must be nonnegative, got {lam}")
    Z, y = _check_inputs(design, response)
    n, d = Z.shape
    lmax = lambda_max(Z, y, intercept=cfg.intercept)
    b0_null = 0.0
    if cfg.intercept:
        ybar = y.mean()
        b0_null = float(np.log(ybar / (1 - ybar))) if 0 < ybar < 1 else 0.0
    if lam >= lmax:
        return L1Fit(np.zeros(d), float(lam), lmax, 0, True, b0_null)

    penalty = np.full(d, float(lam))
    if cfg.intercept:
        Z = np.column_stack([Z, np.ones(n)])
        penalty = np.append(penalty, 0.0)

    def objective(t):
        eta = Z @ t
        return float(-np.sum(y * eta - np.logaddexp(0.0, eta)) + np.sum(penalty * np.abs(t)))

    theta = np.zeros(Z.shape[1])
    if cfg.intercept:
        theta[-1] = b0_null
    obj = objective(theta)
    converged = False
    it = 0
    for it in range(1, cfg.max_iter + 1):
        p = expit(Z @ theta)
        w = np.maximum(p * (1.0 - p), 1e-5)
        H = (Z * w[:, None]).T @ Z
        q = Z.T @ (y - p) + H @ theta
        new = theta.copy()
        if it == 1:
            # start the first sweep from a lightly ridged Newton step rather than
            # zero: exact copies of a column then share their weight instead of
            # the first copy taking all of it (the optimum is not unique there)
            eps = 1e-6 * max(np.trace(H) / H.shape[0], 1e-12)
            try:
                new = np.linalg.solve(H + eps * np.eye(H.shape[0]), q)
            except np.linalg.LinAlgError:
                pass
        _cd_quadratic(H, q, new, penalty, cfg.tol, cfg.max_inner)

        t = 1.0
        for _ in range(30):
            cand = theta + t * (new - theta)
            cand_obj = objective(cand)
            if cand_obj <= obj + 1e-12 * max(1.0, abs(obj)):
                break
            t *= 0.5
        change = float(np.max(np.abs(cand - theta)))
        theta, obj = cand, cand_obj
        if change < cfg.tol:
            converged = True
            break
    coef = theta[:d].copy()
    b0 = float(theta[-1]) if cfg.intercept else 0.0
    return L1Fit(coef, float(lam), lmax, it, converged, b0)
