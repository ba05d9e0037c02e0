"""Per-sample CIPLS update kernels.

Two interchangeable implementations of the same update are kept:

* ``fit_rows_loops`` -- scalar loops, compiled with numba.
* ``fit_rows_numpy`` -- vectorised over features, one Python iteration per
  sample and component.

``fit_rows`` is whichever one the ``CIPLS_DISABLE_NUMBA`` flag selects.
Both mutate ``mu``, ``W``, ``P``, ``Q`` and ``s`` in place and return the new
sample count.  ``W`` and ``P`` are stored component-major, shape ``(c, m)``.
Results agree to rounding; they are not bitwise identical to each other
because the summation order of the dot products differs.
"""
import math

import numpy as np

from ._accel import USE_NUMBA, njit


@njit
def fit_rows_loops(X, y, mu, n, W, P, Q, s, stabilized, sign_mode, eps):
    n_rows, m = X.shape
    c = W.shape[0]
    xb = np.empty(m)
    for r in range(n_rows):
        n += 1
        keep = (n - 1) / n
        frac = 1.0 / n
        for j in range(m):
            mu[j] = keep * mu[j] + frac * X[r, j]
            xb[j] = X[r, j] - mu[j]
        yb = y[r]
        for i in range(c):
            ww = 0.0
            dot = 0.0
            for j in range(m):
                W[i, j] += xb[j] * yb
                ww += W[i, j] * W[i, j]
                dot += xb[j] * W[i, j]
            wn = math.sqrt(ww)
            if wn < eps or abs(dot) < eps:
                continue
            if sign_mode:
                t = 1.0 if dot > 0.0 else -1.0
            else:
                t = dot / wn
            for j in range(m):
                P[i, j] += xb[j] * t
            Q[i] += yb * t
            s[i] += t * t
            if stabilized:
                for j in range(m):
                    xb[j] -= t * (P[i, j] / s[i])
                yb -= t * (Q[i] / s[i])
            else:
                for j in range(m):
                    xb[j] -= t * P[i, j]
                yb -= t * Q[i]
    return n


def fit_rows_numpy(X, y, mu, n, W, P, Q, s, stabilized, sign_mode, eps):
    c = W.shape[0]
    for r in range(X.shape[0]):
        n += 1
        x = X[r]
        mu *= (n - 1) / n
        mu += (1.0 / n) * x
        xb = x - mu
        yb = float(y[r])
        for i in range(c):
            w = W[i]
            w += xb * yb
            wn = math.sqrt(w @ w)
            dot = float(xb @ w)
            if wn < eps or abs(dot) < eps:
                continue
            t = math.copysign(1.0, dot) if sign_mode else dot / wn
            p = P[i]
            p += xb * t
            Q[i] += yb * t
            s[i] += t * t
            if stabilized:
                xb -= t * (p / s[i])
                yb -= t * (Q[i] / s[i])
            else:
                xb -= t * p
                yb -= t * Q[i]
    return n


fit_rows = fit_rows_loops if USE_NUMBA else fit_rows_numpy

BACKENDS = {"numba": fit_rows_loops, "numpy": fit_rows_numpy}
