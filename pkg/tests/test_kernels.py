import os
import subprocess
import sys

import numpy as np
import pytest
from numpy.testing import assert_allclose

from cipls import CIPLS, FitOptions, SynthSpec, synth_gaussian
from cipls import _kernels
from cipls.bench import bench_partial_fit


@pytest.mark.parametrize("mode", ["stabilized", "literal"])
@pytest.mark.parametrize("t_mode", ["proj", "sign"])
def test_backends_agree(mode, t_mode):
    d = synth_gaussian(SynthSpec(500, 16, 3, 1.0, 21))
    opts = FitOptions(components=4, deflation=mode, t_mode=t_mode)
    a = CIPLS(16, opts).partial_fit(d.X, d.y, backend="numba")
    b = CIPLS(16, opts).partial_fit(d.X, d.y, backend="numpy")
    assert a.n == b.n == 500
    for f in ("mu", "W", "P", "Q", "s"):
        x, y = getattr(a, f), getattr(b, f)
        assert_allclose(x, y, rtol=1e-8, atol=1e-8 * max(1.0, np.abs(y).max()))


def test_env_flag_selects_numpy_path():
    code = ("import cipls, cipls._kernels as k; "
            "print(cipls.USE_NUMBA, k.fit_rows is k.fit_rows_numpy)")
    env = dict(os.environ, CIPLS_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True).stdout.split()
    assert out == ["False", "True"]


def test_default_path_uses_numba():
    if os.environ.get("CIPLS_DISABLE_NUMBA"):
        pytest.skip("numba disabled by environment")
    assert _kernels.fit_rows is _kernels.fit_rows_loops


def test_bench_table_shape():
    table = bench_partial_fit(ms=(8, 32), cs=(1, 4), n=50, repeats=3, backend="numpy")
    assert [(r.m, r.c) for r in table.rows] == [(8, 1), (8, 4), (32, 1), (32, 4)]
    assert all(r.median > 0 for r in table.rows)
    kinds = {k for k, *_ in table.fourfold_ratios()}
    assert kinds == {"m", "c"}
    assert "m_ratios" in table.to_dict()
