"""Synthetic multi-label benchmarks.

ArtData1/2 draw labels from a conditional Ising model by Gibbs sampling;
ArtData3/4 are deterministic (resp. noisy) rule blocks over uniform features.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .dataset import MultiLabelDataset

SCENARIOS = ("artdata1", "artdata2", "artdata3", "artdata4", "custom")
DEFAULT_SWEEPS = 30


@dataclass(frozen=True)
class IsingParams:
    """Parameters of P(y | x) ~ exp(sum_k a_k'x y_k + sum_{k<l} (beta_kl + b_kl'x) y_k y_l)."""

    a: np.ndarray
    beta: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        beta = np.asarray(self.beta, dtype=float)
        b = np.asarray(self.b, dtype=float)
        K, p = a.shape
        if beta.shape != (K, K) or b.shape != (K, K, p):
            raise ValueError("inconsistent parameter shapes")
        if not np.allclose(beta, beta.T) or not np.allclose(b, b.transpose(1, 0, 2)):
            raise ValueError("interaction parameters must be symmetric in the label indices")
        if np.any(np.diag(beta) != 0) or np.any(b[np.arange(K), np.arange(K)] != 0):
            raise ValueError("interaction diagonals must be zero")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "beta", beta)
        object.__setattr__(self, "b", b)

    @property
    def K(self) -> int:
        return self.a.shape[0]

    @property
    def p(self) -> int:
        return self.a.shape[1]

    @classmethod
    def zeros(cls, K: int, p: int) -> "IsingParams":
        return cls(np.zeros((K, p)), np.zeros((K, K)), np.zeros((K, K, p)))


@dataclass(frozen=True)
class ScenarioSpec:
    scenario: str = "artdata1"
    n: int | None = None
    p: int | None = None
    K: int | None = None
    seed: int = 0
    gibbs_sweeps: int = DEFAULT_SWEEPS
    relevant_set: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; choose from {', '.join(SCENARIOS)}")
        if self.gibbs_sweeps < 1:
            raise ValueError("gibbs_sweeps must be at least 1")


def _pair_fields(X: np.ndarray, params: IsingParams):
    # row-specific external fields (n x K) and couplings (n x K x K)
    field = X @ params.a.T
    coupling = params.beta[None, :, :] + np.einsum("klp,np->nkl", params.b, X)
    return field, coupling


def gibbs_sample(X, params: IsingParams, sweeps: int = DEFAULT_SWEEPS, rng=None) -> np.ndarray:
    """Draw one label vector per row of ``X`` by systematic-scan Gibbs sampling.

    Labels start iid Bernoulli(0.5); each sweep redraws y_1, ..., y_K in order
    from their full conditionals and the state after the last sweep is kept.
    """
    if sweeps < 1:
        raise ValueError("sweeps must be at least 1")
    rng = np.random.default_rng(rng)
    X = np.atleast_2d(np.asarray(X, dtype=float))
    n = X.shape[0]
    K = params.K
    field, coupling = _pair_fields(X, params)
    Y = (rng.random((n, K)) < 0.5).astype(float)
    for _ in range(sweeps):
        u = rng.random((n, K))
        for k in range(K):
            logit = field[:, k] + np.einsum("nl,nl->n", coupling[:, k, :], Y)
            Y[:, k] = u[:, k] < expit(logit)
    return Y.astype(np.int8)


def gibbs_sample_labels(x_row, params: IsingParams, sweeps: int = DEFAULT_SWEEPS,
                        rng=None) -> np.ndarray:
    return gibbs_sample(np.asarray(x_row, dtype=float)[None, :], params, sweeps, rng)[0]


def ising_log_weights(x_row, params: IsingParams):
    """Unnormalized log-probabilities of all 2^K label vectors given ``x_row``.

    Returns ``(states, logw)`` with states in lexicographic order.
    """
    x = np.asarray(x_row, dtype=float)
    K = params.K
    states = ((np.arange(2 ** K)[:, None] >> np.arange(K - 1, -1, -1)) & 1).astype(float)
    field, coupling = _pair_fields(x[None, :], params)
    quad = 0.5 * np.einsum("sk,kl,sl->s", states, coupling[0], states)
    return states.astype(np.int8), states @ field[0] + quad


def artdata_params(scenario: str, K: int, p: int, relevant) -> IsingParams:
    a = np.zeros((K, p))
    if scenario == "artdata1":
        a[:, list(relevant)] = 0.2
    beta = np.full((K, K), 0.1)
    np.fill_diagonal(beta, 0.0)
    b = np.zeros((K, K, p))
    b[0, 1, list(relevant)] = 0.2
    b[1, 0, list(relevant)] = 0.2
    return IsingParams(a, beta, b)


def make_artdata(spec: ScenarioSpec, params: IsingParams | None = None):
    """Generate a benchmark dataset; returns ``(dataset, relevant)`` with 0-based indices."""
    rng = np.random.default_rng(spec.seed)
    s = spec.scenario
    if s in ("artdata1", "artdata2", "custom"):
        n = spec.n or 1000
        if s == "custom":
            if params is None:
                raise ValueError("custom scenario needs explicit IsingParams")
            K, p = params.K, params.p
            relevant = tuple(spec.relevant_set or np.flatnonzero(
                np.any(params.a != 0, axis=0) | np.any(params.b != 0, axis=(0, 1))))
        else:
            p = spec.p or 50
            K = spec.K or 10
            if p < 10 or K < 2:
                raise ValueError(f"{s} needs p >= 10 and K >= 2")
            relevant = tuple(range(10))
            params = artdata_params(s, K, p, relevant)
        if n < 1:
            raise ValueError("n must be positive")
        X = rng.standard_normal((n, p))
        Y = gibbs_sample(X, params, spec.gibbs_sweeps, rng)
        return MultiLabelDataset(X, Y), relevant

    n = spec.n or 100
    p = spec.p or 50
    if p < 10 or n < 1:
        raise ValueError(f"{s} needs p >= 10 and n >= 1")
    if spec.K not in (None, 4):
        raise ValueError(f"{s} always has K = 4 labels")
    base = rng.random((n, 5))
    x1, x2, x3, x4, x5 = base.T
    if s == "artdata3":
        derived = np.column_stack([(x1 - x2) / 2, (x1 + x2) / 2, x3 + 0.1, x4 - 0.2, 2 * x5])
        y1 = x1 > x2
        y2 = x4 > x3
        y4 = x5 > 0.8
        relevant = (0, 1, 2, 3, 4, 5, 7, 8, 9)
    else:
        derived = base + rng.normal(0.0, 0.3, size=(n, 5))
        eps = rng.normal(0.0, 0.3, size=(n, 3))
        y1 = x1 > x2 + eps[:, 0]
        y2 = x4 > x3 + eps[:, 1]
        y4 = x5 + eps[:, 2] > 0.8
        relevant = tuple(range(10))
    noise = rng.random((n, p - 10))
    X = np.column_stack([base, derived, noise])
    Y = np.column_stack([y1, y2, y1 ^ y2, y4]).astype(np.int8)
    return MultiLabelDataset(X, Y), relevant


def make_xor_toy(noise_features: int = 0, n: int = 400, seed=None) -> MultiLabelDataset:
    """Two labels and a feature x1 = y1 XOR y2, plus iid Gaussian noise features.

    The four label combinations appear as evenly as n allows, so x1 is
    uncorrelated with each label on its own.
    """
    if n < 4:
        raise ValueError("n must be at least 4")
    rng = np.random.default_rng(seed)
    combos = np.array([[0, 0], [0, 1], [1, 0], [1, 1]])
    Y = combos[rng.permutation(np.arange(n) % 4)]
    x1 = (Y[:, 0] != Y[:, 1]).astype(float)
    X = np.column_stack([x1, rng.standard_normal((n, noise_features))])
    return MultiLabelDataset(X, Y)


def make_or_toy(n: int = 2000, seed=None):
    """y2, x1 ~ iid Bernoulli(0.5) and y1 = I(y2 + x1 > 0).

    Returns ``(x1, y1, y2)`` as integer vectors.
    """
    rng = np.random.default_rng(seed)
    y2 = rng.integers(0, 2, n)
    x1 = rng.integers(0, 2, n)
    y1 = ((y2 + x1) > 0).astype(int)
    return x1, y1, y2


def make_single_feature_ising(n: int, a, beta=None, seed=None,
                              sweeps: int = DEFAULT_SWEEPS) -> MultiLabelDataset:
    """One Gaussian feature x with labels drawn from the constant-interaction model.

    ``a`` holds the per-label coefficients of x; ``beta`` the label couplings
    (zero when omitted).
    """
    a = np.asarray(a, dtype=float)
    K = a.size
    beta = np.zeros((K, K)) if beta is None else np.asarray(beta, dtype=float)
    params = IsingParams(a[:, None], beta, np.zeros((K, K, 1)))
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, 1))
    return MultiLabelDataset(X, gibbs_sample(X, params, sweeps, rng))
