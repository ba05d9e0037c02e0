"""Variable Importance in Projection (VIP) scores and percentage-based selection."""
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateModel, DimensionMismatch, InvalidFraction


@dataclass(eq=False)
class VipReport:
    scores: np.ndarray   # (m,), non-negative
    ranking: np.ndarray  # feature indices, descending score, ties by ascending index

    def to_text(self):
        lines = ["feature_index,score"]
        lines += [f"{j},{v:.17g}" for j, v in enumerate(self.scores)]
        return "\n".join(lines) + "\n"


def vip(W, Q, s, epsilon=1e-12):
    """VIP scores from weights ``W`` (m, c), accumulated y-loadings ``Q`` and energies ``s``.

    The regression-scale loading ``q_i / s_i`` is used, so a batch model
    (``s_i = 1``) and an incremental one share the same formula::

        f_j = sqrt(m * sum_i a_i (w_ij / |w_i|)^2 / sum_i a_i),  a_i = (q_i/s_i)^2 s_i

    Columns with a zero weight vector or zero energy contribute nothing.
    The scores satisfy ``sum_j f_j^2 == m``.
    """
    W = np.asarray(W, dtype=np.float64)
    Q = np.asarray(Q, dtype=np.float64).ravel()
    s = np.asarray(s, dtype=np.float64).ravel()
    if W.ndim != 2 or Q.shape != (W.shape[1],) or s.shape != Q.shape:
        raise DimensionMismatch(f"inconsistent shapes W{W.shape}, Q{Q.shape}, s{s.shape}")
    m = W.shape[0]
    wnorm = np.linalg.norm(W, axis=0)
    usable = (wnorm > 0) & (s > 0)
    safe_s = np.where(usable, s, 1.0)
    weight = np.where(usable, (Q / safe_s) ** 2 * s, 0.0)
    total = weight.sum()
    if not total >= epsilon:
        raise DegenerateModel(f"explained target energy {total!r} is below {epsilon}")
    unit = W[:, usable] / wnorm[usable]
    scores = np.sqrt(m * (unit ** 2 @ weight[usable]) / total)
    # lexsort: last key is primary
    ranking = np.lexsort((np.arange(m), -scores))
    return VipReport(scores=scores, ranking=ranking)


def model_vip(model):
    """VIP report for a fitted ``CIPLS`` or ``BatchPLS`` model."""
    eps = getattr(getattr(model, "options", None), "epsilon", None) or getattr(model, "epsilon", 1e-12)
    return vip(model.W, model.Q, model.s, epsilon=eps)


def select_features(report, keep_fraction):
    """Indices of the top ``ceil(keep_fraction * m)`` features, sorted ascending."""
    if not 0 < keep_fraction <= 1:
        raise InvalidFraction(f"keep_fraction must lie in (0, 1], got {keep_fraction!r}")
    m = len(report.scores)
    # round() absorbs products like 0.15 * 100 = 15.000000000000002
    k = math.ceil(round(keep_fraction * m, 9))
    return sorted(int(j) for j in report.ranking[:k])
