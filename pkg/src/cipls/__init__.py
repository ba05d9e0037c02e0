"""Covariance-free incremental partial least squares (CIPLS)."""
__version__ = "0.1.0"

from ._accel import USE_NUMBA
from .batch import BatchPLS, fit_nipals, predict_batch, transform_batch
from .core import (
    CIPLS,
    DeflationMode,
    FitOptions,
    LabeledSample,
    ScoreMode,
    new_model,
    sign_label,
    update_mean,
)
from .data import Dataset, SynthSpec, read_csv, synth_gaussian, synth_two_direction, write_csv
from .errors import *  # noqa: F401,F403
from .evaluation import (
    StreamCurve,
    ablate_first_component,
    component_sweep,
    split_blocks,
    streaming_curve,
)
from .model_io import deserialize, load, save, serialize
from .vip import VipReport, model_vip, select_features, vip
