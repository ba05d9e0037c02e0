"""Per-sample timing of the incremental update over a grid of (m, c)."""
import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._accel import USE_NUMBA

DEFAULT_MS = (256, 1024, 4096)
DEFAULT_CS = (2, 4, 8)
DEFAULT_N = 2000
DEFAULT_REPEATS = 30


@dataclass
class BenchRow:
    m: int
    c: int
    mean: float
    median: float
    std: float
    min: float


@dataclass
class BenchTable:
    backend: str
    n: int
    repeats: int
    rows: list = field(default_factory=list)

    def median(self, m, c):
        for r in self.rows:
            if r.m == m and r.c == c:
                return r.median
        raise KeyError((m, c))

    def ratios(self):
        """Median-time ratios between every pair of grid values ``lo < hi``.

        Returns ``{"m": {(c, m_lo, m_hi): ratio}, "c": {(m, c_lo, c_hi): ratio}}``.
        """
        ms = sorted({r.m for r in self.rows})
        cs = sorted({r.c for r in self.rows})
        out = {"m": {}, "c": {}}
        for c in cs:
            for lo, hi in itertools.combinations(ms, 2):
                out["m"][(c, lo, hi)] = self.median(hi, c) / self.median(lo, c)
        for m in ms:
            for lo, hi in itertools.combinations(cs, 2):
                out["c"][(m, lo, hi)] = self.median(m, hi) / self.median(m, lo)
        return out

    def fourfold_ratios(self):
        """Only the pairs with ``hi == 4 * lo``, as ``(kind, fixed, lo, hi, ratio)``."""
        return [(kind, fixed, lo, hi, v)
                for kind, table in self.ratios().items()
                for (fixed, lo, hi), v in table.items() if hi == 4 * lo]

    def to_dict(self):
        ratios = self.ratios()
        return {
            "backend": self.backend, "n": self.n, "repeats": self.repeats,
            "rows": [vars(r) for r in self.rows],
            "m_ratios": [{"c": c, "m_lo": lo, "m_hi": hi, "ratio": v}
                         for (c, lo, hi), v in ratios["m"].items()],
            "c_ratios": [{"m": m, "c_lo": lo, "c_hi": hi, "ratio": v}
                         for (m, lo, hi), v in ratios["c"].items()],
        }

    def format(self):
        lines = [f"backend={self.backend} n={self.n} repeats={self.repeats}",
                 f"{'m':>6} {'c':>3} {'median us':>10} {'mean us':>10} {'std us':>9}"]
        for r in self.rows:
            lines.append(f"{r.m:>6} {r.c:>3} {r.median * 1e6:>10.3f} {r.mean * 1e6:>10.3f} "
                         f"{r.std * 1e6:>9.3f}")
        return "\n".join(lines)


def _warm_up(kernel):
    X = np.ones((3, 4))
    X[1] = -1.0
    kernel(X, np.array([1.0, -1.0, 1.0]), np.zeros(4), 0, np.zeros((2, 4)),
           np.zeros((2, 4)), np.zeros(2), np.zeros(2), True, False, 1e-12)


def bench_partial_fit(ms=DEFAULT_MS, cs=DEFAULT_CS, n=DEFAULT_N, repeats=DEFAULT_REPEATS,
                      backend=None, seed=0, stabilized=True, sign_mode=False):
    """Time one pass of ``n`` single-sample updates for every ``(m, c)``.

    Each repeat starts from a zero model; the per-sample time is the pass
    time divided by ``n``.  Times come from ``time.perf_counter``.
    """
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    kernel = _kernels.BACKENDS[backend]
    _warm_up(kernel)
    rng = np.random.Generator(np.random.PCG64(seed))
    y = np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    table = BenchTable(backend=backend, n=n, repeats=repeats)
    for m in ms:
        X = rng.standard_normal((n, m))
        X[:, :5] += y[:, None]
        for c in cs:
            times = np.empty(repeats)
            for r in range(repeats):
                mu, W, P = np.zeros(m), np.zeros((c, m)), np.zeros((c, m))
                Q, s = np.zeros(c), np.zeros(c)
                t0 = time.perf_counter()
                kernel(X, y, mu, 0, W, P, Q, s, stabilized, sign_mode, 1e-12)
                times[r] = (time.perf_counter() - t0) / n
            table.rows.append(BenchRow(m=m, c=c, mean=float(times.mean()),
                                       median=float(np.median(times)),
                                       std=float(times.std(ddof=1)) if repeats > 1 else 0.0,
                                       min=float(times.min())))
    return table
