"""Covariance-free incremental PLS: a single-pass, one-sample-at-a-time estimator.

The model keeps only ``O(c*m)`` state: the running mean, the accumulated
weight vectors ``W``, the accumulated x-loadings ``P``, the accumulated
y-loadings ``Q`` and the accumulated score energies ``s`` (sum of squared
scores per component).  Each sample is centred with the running mean and then
pushed through every component in order, deflating the sample and its label
residual after each one.
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .errors import (
    DimensionMismatch,
    EmptyModel,
    InvalidConfig,
    LabelError,
    NonFiniteInput,
)


class DeflationMode(str, Enum):
    """How a component's contribution is removed from the sample.

    ``STABILIZED`` divides the accumulated loadings by the score energy, the
    running analogue of the least-squares loading ``X^T t / t^T t``.
    ``LITERAL`` subtracts the raw accumulated loadings, whose scale grows with
    the number of samples.
    """

    STABILIZED = "stabilized"
    LITERAL = "literal"


class ScoreMode(str, Enum):
    """``PROJECTION``: ``t = x.w/|w|``.  ``SIGN``: ``t = sign(x.w)``."""

    PROJECTION = "proj"
    SIGN = "sign"


@dataclass(frozen=True)
class FitOptions:
    components: int = 2
    deflation: DeflationMode = DeflationMode.STABILIZED
    t_mode: ScoreMode = ScoreMode.PROJECTION
    epsilon: float = 1e-12

    def __post_init__(self):
        # accept the plain string values too
        object.__setattr__(self, "deflation", DeflationMode(self.deflation))
        object.__setattr__(self, "t_mode", ScoreMode(self.t_mode))
        if isinstance(self.components, bool) or int(self.components) != self.components:
            raise InvalidConfig(f"components must be an integer, got {self.components!r}")
        object.__setattr__(self, "components", int(self.components))
        if self.components < 1:
            raise InvalidConfig(f"components must be >= 1, got {self.components}")
        if not (self.epsilon > 0 and np.isfinite(self.epsilon)):
            raise InvalidConfig(f"epsilon must be a positive finite number, got {self.epsilon!r}")


@dataclass(frozen=True)
class LabeledSample:
    x: np.ndarray
    y: float

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        if x.ndim != 1:
            raise DimensionMismatch(f"sample must be a vector, got shape {x.shape}")
        if not np.all(np.isfinite(x)):
            raise NonFiniteInput("sample contains NaN or Inf")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", float(_check_labels(np.array([self.y]))[0]))


def _check_labels(y):
    y = np.asarray(y, dtype=np.float64)
    bad = ~((y == 1.0) | (y == -1.0))
    if bad.any():
        row = int(np.flatnonzero(bad)[0])
        raise LabelError(f"label {y[row]!r} at index {row} is not -1 or +1", row=row)
    return y


def update_mean(mu_prev, n, x_n):
    """Running mean after the ``n``-th sample: ``(n-1)/n * mu_prev + x_n/n``."""
    mu_prev = np.asarray(mu_prev, dtype=np.float64)
    x_n = np.asarray(x_n, dtype=np.float64)
    if mu_prev.shape != x_n.shape:
        raise DimensionMismatch(f"mean has shape {mu_prev.shape}, sample has {x_n.shape}")
    if n < 1:
        raise InvalidConfig(f"sample count must be >= 1, got {n}")
    return (n - 1) / n * mu_prev + (1.0 / n) * x_n


class CIPLS:
    """Incremental PLS1 model for a binary target coded as -1/+1.

    Parameters
    ----------
    m : int
        Feature dimensionality.
    options : FitOptions, optional
        Component count, deflation and score modes, zero-guard tolerance.

    Attributes
    ----------
    n : int
        Number of samples seen.
    mu : ndarray (m,)
        Running mean.
    W, P : ndarray (m, c)
        Accumulated weights and x-loadings (views on component-major storage).
    Q, s : ndarray (c,)
        Accumulated y-loadings and score energies.

    Notes
    -----
    ``partial_fit`` mutates the model and is not thread safe.  A fitted model
    can be read concurrently.
    """

    def __init__(self, m, options=None):
        options = FitOptions() if options is None else options
        if isinstance(m, bool) or int(m) != m or m < 1:
            raise InvalidConfig(f"m must be a positive integer, got {m!r}")
        m = int(m)
        if options.components > m:
            raise InvalidConfig(f"components ({options.components}) exceeds m ({m})")
        self.m = m
        self.options = options
        self.n = 0
        self.mu = np.zeros(m)
        self._W = np.zeros((options.components, m))
        self._P = np.zeros((options.components, m))
        self.Q = np.zeros(options.components)
        self.s = np.zeros(options.components)

    @property
    def c(self):
        return self.options.components

    @property
    def W(self):
        return self._W.T

    @property
    def P(self):
        return self._P.T

    def partial_fit(self, x, y, backend=None):
        """Absorb one sample, or a block of samples in arrival order.

        ``x`` is a length-``m`` vector with scalar ``y``, or an ``(k, m)``
        block with ``k`` labels.  Returns ``self``.
        """
        X = np.asarray(x, dtype=np.float64)
        Y = np.asarray(y, dtype=np.float64)
        if X.ndim == 1:
            X = X[None, :]
            Y = Y.reshape(1)
        if X.ndim != 2 or X.shape[1] != self.m:
            raise DimensionMismatch(f"expected samples of length {self.m}, got shape {np.shape(x)}")
        if Y.shape != (X.shape[0],):
            raise DimensionMismatch(f"{X.shape[0]} samples but labels have shape {Y.shape}")
        if not np.all(np.isfinite(X)):
            raise NonFiniteInput("samples contain NaN or Inf")
        Y = _check_labels(Y)
        kernel = _kernels.fit_rows if backend is None else _kernels.BACKENDS[backend]
        opts = self.options
        self.n = int(kernel(
            np.ascontiguousarray(X), Y, self.mu, self.n, self._W, self._P, self.Q, self.s,
            opts.deflation is DeflationMode.STABILIZED,
            opts.t_mode is ScoreMode.SIGN,
            opts.epsilon,
        ))
        return self

    def partial_fit_sample(self, sample):
        return self.partial_fit(sample.x, sample.y)

    def fit(self, X, y):
        """Stream every row of ``X`` through ``partial_fit`` in order."""
        return self.partial_fit(np.atleast_2d(X), np.atleast_1d(y))

    def _check_ready(self, X):
        if self.n == 0:
            raise EmptyModel("model has not seen any samples")
        X = np.asarray(X, dtype=np.float64)
        if X.shape[-1:] != (self.m,) or X.ndim > 2:
            raise DimensionMismatch(f"expected samples of length {self.m}, got shape {X.shape}")
        return X

    def _replay_params(self):
        eps = self.options.epsilon
        wnorm = np.linalg.norm(self._W, axis=1)
        active = (wnorm >= eps) & (self.s >= eps)
        safe_s = np.where(active, self.s, 1.0)
        if self.options.deflation is DeflationMode.STABILIZED:
            p_scale = safe_s
        else:
            p_scale = np.ones(self.c)
        return wnorm, p_scale, active, safe_s

    def transform(self, X):
        """Scores of one sample (``(c,)``) or of each row of a block (``(k, c)``)."""
        X = self._check_ready(X)
        wnorm, p_scale, active, _ = self._replay_params()
        sign = self.options.t_mode is ScoreMode.SIGN
        return replay_scores(X, self.mu, self._W, self._P, wnorm, p_scale, active, sign)

    def regression_loadings(self):
        """``q_i / s_i`` for usable components, 0 for guarded ones."""
        _, _, active, safe_s = self._replay_params()
        return np.where(active, self.Q / safe_s, 0.0)

    def predict(self, X):
        """Real-valued response ``sum_i t_i q_i / s_i``."""
        return self.transform(X) @ self.regression_loadings()

    def predict_label(self, X):
        return sign_label(self.predict(X))

    def __repr__(self):
        o = self.options
        return (f"CIPLS(m={self.m}, c={self.c}, n={self.n}, deflation={o.deflation.value}, "
                f"t_mode={o.t_mode.value})")


def new_model(m, options=None):
    return CIPLS(m, options)


def sign_label(score):
    """Map real scores to -1/+1 labels; a score of exactly 0 maps to +1."""
    return np.where(np.asarray(score) < 0, -1.0, 1.0)


def replay_scores(X, mean, W, P, w_scale, p_scale, active, sign_mode=False):
    """Project rows of ``X`` component by component, deflating between components.

    ``W`` and ``P`` are component-major ``(c, m)``.  Component ``i`` gives
    ``t = z.w_i / w_scale[i]`` (or its sign) followed by
    ``z -= t * P[i] / p_scale[i]``; inactive components score 0.
    """
    single = X.ndim == 1
    Z = np.atleast_2d(X) - mean
    T = np.zeros((Z.shape[0], W.shape[0]))
    for i in range(W.shape[0]):
        if not active[i]:
            continue
        proj = Z @ W[i]
        t = np.sign(proj) if sign_mode else proj / w_scale[i]
        T[:, i] = t
        Z -= np.outer(t, P[i] / p_scale[i])
    return T[0] if single else T
