"""Dataset container, CSV reading/writing and seeded synthetic generators.

Synthetic data is drawn from numpy's ``PCG64`` bit generator through
``numpy.random.Generator.standard_normal`` (numpy >= 1.17), seeded with
``SynthSpec.seed``.  Identical specs give bitwise-identical datasets.
"""
import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidSpec, LabelError, ParseError, RaggedRows, TooFewSamples


@dataclass(eq=False)
class Dataset:
    X: np.ndarray
    y: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.float64)
        if self.X.ndim != 2 or self.X.shape[0] < 1:
            raise TooFewSamples(f"dataset needs a non-empty 2-D X, got shape {self.X.shape}")
        if self.y.shape != (self.X.shape[0],):
            raise ParseError(f"{self.X.shape[0]} rows but {self.y.shape} labels")
        if not np.all((self.y == 1.0) | (self.y == -1.0)):
            raise LabelError("labels must be -1 or +1")

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def m(self):
        return self.X.shape[1]

    def take(self, rows, note=None):
        prov = dict(self.provenance)
        if note:
            prov["subset"] = note
        return Dataset(self.X[rows], self.y[rows], prov)


@dataclass(frozen=True)
class SynthSpec:
    n: int
    m: int
    informative: int
    delta: float
    seed: int

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise InvalidSpec(f"n and m must be positive, got n={self.n}, m={self.m}")
        if not 1 <= self.informative <= self.m:
            raise InvalidSpec(f"informative must lie in [1, m={self.m}], got {self.informative}")
        if not self.delta > 0:
            raise InvalidSpec(f"delta must be positive, got {self.delta}")
        if not 0 <= self.seed < 2 ** 64:
            raise InvalidSpec(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def _labels(n):
    # +,-,+,- ... gives ceil(n/2) positives
    return np.where(np.arange(n) % 2 == 0, 1.0, -1.0)


def synth_gaussian(spec):
    """Two mirrored Gaussian classes.

    Class +1 has mean ``delta`` on the first ``informative`` coordinates and 0
    elsewhere, class -1 has mean ``-delta`` there; unit variance throughout.
    Rows alternate +1, -1, +1, ...
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    y = _labels(spec.n)
    X = rng.standard_normal((spec.n, spec.m))
    X[:, :spec.informative] += spec.delta * y[:, None]
    prov = {"generator": "synth_gaussian", "n": spec.n, "m": spec.m,
            "informative": spec.informative, "delta": spec.delta, "seed": spec.seed,
            "prng": "numpy PCG64 / Generator.standard_normal"}
    return Dataset(X, y, prov)


def synth_two_direction(n, m, major=4.0, minor=1.5, noise=8.0, seed=0):
    """Class signal on two orthogonal axes with very different noise levels.

    Coordinate 0 has class-mean offset ``+-major`` and noise std ``noise``;
    coordinate 1 has offset ``+-minor`` and unit noise.  Coordinate 0 dominates
    the feature/label covariance, so the first PLS component is a poor
    classifier and the class information on coordinate 1 is left for the
    second component.  Remaining coordinates are unit noise.  Rows alternate
    +1, -1, ...
    """
    if m < 2:
        raise InvalidSpec("need m >= 2 for two informative directions")
    if n < 1 or not (major > 0 and minor > 0 and noise > 0):
        raise InvalidSpec("n, major, minor and noise must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    y = _labels(n)
    X = rng.standard_normal((n, m))
    X[:, 0] *= noise
    X[:, 0] += major * y
    X[:, 1] += minor * y
    prov = {"generator": "synth_two_direction", "n": n, "m": m, "major": major,
            "minor": minor, "noise": noise, "seed": seed,
            "prng": "numpy PCG64 / Generator.standard_normal"}
    return Dataset(X, y, prov)


def _parse_label(text, row, column):
    try:
        value = float(text)
    except ValueError:
        raise ParseError(f"row {row}, column {column}: bad label {text!r}", row, column) from None
    if value == 1.0:
        return 1.0
    if value in (0.0, -1.0):
        return -1.0
    raise LabelError(f"row {row}: label {text!r} is not one of 0, 1, -1, +1", row=row)


def read_csv(path, has_header=False):
    """Read ``m`` feature columns followed by one label column.

    Labels 0/1 are mapped to -1/+1; -1/+1 pass through.  Row numbers in
    errors are 1-based file lines.
    """
    X, y = [], []
    width = None
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for line_no, fields in enumerate(reader, start=1):
            if has_header and line_no == 1:
                continue
            if not fields or (len(fields) == 1 and not fields[0].strip()):
                continue
            if width is None:
                width = len(fields)
                if width < 2:
                    raise ParseError(f"row {line_no}: need at least one feature and a label",
                                     line_no, 1)
            elif len(fields) != width:
                raise RaggedRows(f"row {line_no} has {len(fields)} columns, expected {width}",
                                 line_no, len(fields))
            row = []
            for col, text in enumerate(fields[:-1], start=1):
                try:
                    v = float(text)
                except ValueError:
                    raise ParseError(f"row {line_no}, column {col}: cannot parse {text!r}",
                                     line_no, col) from None
                if not math.isfinite(v):
                    raise ParseError(f"row {line_no}, column {col}: non-finite value {text!r}",
                                     line_no, col)
                row.append(v)
            X.append(row)
            y.append(_parse_label(fields[-1], line_no, width))
    if not X:
        raise ParseError(f"{path}: no data rows")
    return Dataset(np.array(X), np.array(y), {"path": str(path)})


def write_csv(data, path, header=False):
    """Write ``data`` with 17 significant digits so that ``read_csv`` is exact."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if header:
            fh.write(",".join([f"x{j}" for j in range(data.m)] + ["y"]) + "\n")
        for row, label in zip(data.X, data.y):
            fh.write(",".join(format(v, ".17g") for v in row))
            fh.write(f",{int(label)}\n")
