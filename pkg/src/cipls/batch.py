"""Batch PLS1 via NIPALS, the in-memory reference for the incremental model.

Scores are normalised to unit length after projection so that the deflation
``X -= t p^T`` with ``p = X^T t`` is an exact rank-one least-squares removal.
``t_norms`` keeps the norm each score column had before normalisation; new
rows are divided by it so that projecting the training matrix reproduces ``T``.
"""
from dataclasses import dataclass

import numpy as np

from .core import replay_scores, sign_label
from .errors import DegenerateTarget, DimensionMismatch, InvalidConfig, NonFiniteInput


@dataclass(eq=False)
class BatchPLS:
    mean: np.ndarray     # (m,)
    W: np.ndarray        # (m, c), unit columns
    P: np.ndarray        # (m, c)
    Q: np.ndarray        # (c,)
    T: np.ndarray        # (n, c), unit orthogonal columns
    s: np.ndarray        # (c,), t_i^T t_i
    t_norms: np.ndarray  # (c,)
    epsilon: float = 1e-12

    @property
    def m(self):
        return self.W.shape[0]

    @property
    def c(self):
        return self.W.shape[1]

    @property
    def n(self):
        return self.T.shape[0]

    def transform(self, X):
        return transform_batch(self, X)

    def predict(self, X):
        return predict_batch(self, X)

    def predict_label(self, X):
        return sign_label(predict_batch(self, X))

    def regression_loadings(self):
        active = self.t_norms > 0
        return np.where(active, self.Q, 0.0)


def fit_nipals(X, Y, c, epsilon=1e-12, allow_degenerate=False):
    """Fit ``c`` PLS1 components to centred ``X`` and labels ``Y``.

    Raises ``DegenerateTarget`` if ``Y`` holds a single class or once the
    residual cross-covariance ``|X^T Y|`` falls below ``epsilon``.  With
    ``allow_degenerate`` the remaining components are left at zero instead.
    """
    X = np.array(X, dtype=np.float64)
    Y = np.array(Y, dtype=np.float64).ravel()
    if X.ndim != 2:
        raise DimensionMismatch(f"X must be 2-D, got shape {X.shape}")
    n, m = X.shape
    if Y.shape != (n,):
        raise DimensionMismatch(f"X has {n} rows but Y has shape {Y.shape}")
    if not (np.all(np.isfinite(X)) and np.all(np.isfinite(Y))):
        raise NonFiniteInput("X or Y contains NaN or Inf")
    if n < 2:
        raise InvalidConfig("need at least 2 samples")
    if not 1 <= c <= min(m, n):
        raise InvalidConfig(f"components must lie in [1, {min(m, n)}], got {c}")
    if not allow_degenerate and np.unique(Y).size < 2:
        raise DegenerateTarget("Y contains a single class")

    mean = X.mean(axis=0)
    X -= mean
    W = np.zeros((m, c))
    P = np.zeros((m, c))
    Q = np.zeros(c)
    T = np.zeros((n, c))
    s = np.zeros(c)
    t_norms = np.zeros(c)
    for i in range(c):
        xy = X.T @ Y
        xy_norm = np.linalg.norm(xy)
        if xy_norm < epsilon:
            if allow_degenerate:
                break
            raise DegenerateTarget(f"residual target exhausted at component {i + 1}")
        w = xy / xy_norm
        t = X @ w
        t_norm = np.linalg.norm(t)
        if t_norm < epsilon:
            if allow_degenerate:
                break
            raise DegenerateTarget(f"zero scores at component {i + 1}")
        t /= t_norm
        p = X.T @ t
        q = Y @ t
        X -= np.outer(t, p)
        Y = Y - t * q
        W[:, i], P[:, i], Q[i], T[:, i] = w, p, q, t
        s[i] = t @ t
        t_norms[i] = t_norm
    return BatchPLS(mean=mean, W=W, P=P, Q=Q, T=T, s=s, t_norms=t_norms, epsilon=epsilon)


def transform_batch(model, X_new):
    X_new = np.asarray(X_new, dtype=np.float64)
    if X_new.shape[-1:] != (model.m,) or X_new.ndim > 2:
        raise DimensionMismatch(f"expected rows of length {model.m}, got shape {X_new.shape}")
    active = model.t_norms > 0
    w_scale = np.where(active, model.t_norms, 1.0)
    return replay_scores(X_new, model.mean, model.W.T, model.P.T, w_scale,
                         np.ones(model.c), active)


def predict_batch(model, X_new):
    return transform_batch(model, X_new) @ model.regression_loadings()
