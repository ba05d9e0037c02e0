"""Model file format.

A model is stored as a JSON object with the keys, in this order::

    format   "cipls-model"
    version  "1"
    mode     "stabilized" | "literal" | "batch"
    t_mode   "proj" | "sign"
    epsilon, m, c, n
    mu       running (or training) mean, length m
    W, P     column-major: a list of c columns, each of length m
    Q, s     length c
    T        batch only: list of c score columns, each of length n
    t_norms  batch only: length c

Reals are written with 17 significant digits (and always with a decimal
point or exponent) so that a save/load round trip is bit-exact.  Unknown or
missing keys are rejected.
"""
import json

import numpy as np

from .batch import BatchPLS
from .core import CIPLS, DeflationMode, FitOptions, ScoreMode
from .errors import FormatError, VersionError

FORMAT = "cipls-model"
VERSION = "1"

_COMMON = ["format", "version", "mode", "t_mode", "epsilon", "m", "c", "n",
           "mu", "W", "P", "Q", "s"]
_BATCH_EXTRA = ["T", "t_norms"]


def format_real(v):
    text = format(float(v), ".17g")
    if not any(ch in text for ch in ".eni"):
        text += ".0"
    return text


def _vec(values):
    return "[" + ", ".join(format_real(v) for v in values) + "]"


def _cols(matrix):
    # matrix is (rows, c); emit one list per column
    cols = [_vec(matrix[:, i]) for i in range(matrix.shape[1])]
    return "[\n    " + ",\n    ".join(cols) + "\n  ]" if cols else "[]"


def dumps(model):
    """Render a ``CIPLS`` or ``BatchPLS`` model as text."""
    if isinstance(model, CIPLS):
        o = model.options
        head = {"format": FORMAT, "version": VERSION, "mode": o.deflation.value,
                "t_mode": o.t_mode.value}
        eps, m, c, n = o.epsilon, model.m, model.c, model.n
        mu = model.mu
    elif isinstance(model, BatchPLS):
        head = {"format": FORMAT, "version": VERSION, "mode": "batch", "t_mode": "proj"}
        eps, m, c, n = model.epsilon, model.m, model.c, model.n
        mu = model.mean
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    parts = [f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in head.items()]
    parts += [
        f'  "epsilon": {format_real(eps)}',
        f'  "m": {m}', f'  "c": {c}', f'  "n": {n}',
        f'  "mu": {_vec(mu)}',
        f'  "W": {_cols(model.W)}',
        f'  "P": {_cols(model.P)}',
        f'  "Q": {_vec(model.Q)}',
        f'  "s": {_vec(model.s)}',
    ]
    if isinstance(model, BatchPLS):
        parts += [f'  "T": {_cols(model.T)}', f'  "t_norms": {_vec(model.t_norms)}']
    return "{\n" + ",\n".join(parts) + "\n}\n"


def serialize(model):
    return dumps(model).encode("utf-8")


def _int_field(doc, key, minimum):
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < minimum:
        raise FormatError(key, f"expected an integer >= {minimum}, got {v!r}")
    return v


def _real_vector(doc, key, length):
    v = doc[key]
    if not isinstance(v, list):
        raise FormatError(key, "expected a list of reals")
    if len(v) != length:
        raise FormatError(key, f"expected {length} values, got {len(v)}")
    for i, x in enumerate(v):
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise FormatError(f"{key}[{i}]", f"expected a real, got {x!r}")
    arr = np.array(v, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise FormatError(key, "non-finite value")
    return arr


def _columns(doc, key, n_cols, length):
    v = doc[key]
    if not isinstance(v, list) or len(v) != n_cols:
        raise FormatError(key, f"expected a list of {n_cols} columns")
    out = np.empty((length, n_cols))
    for i in range(n_cols):
        out[:, i] = _real_vector({f"{key}[{i}]": v[i]}, f"{key}[{i}]", length)
    return out


def loads(text):
    """Parse a model document; raises ``FormatError`` or ``VersionError``."""
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise FormatError("$", f"not UTF-8: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError("$", f"malformed document: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("$", "expected a JSON object")
    if doc.get("format") != FORMAT:
        raise FormatError("format", f"expected {FORMAT!r}, got {doc.get('format')!r}")
    if "version" not in doc:
        raise FormatError("version", "missing")
    if doc["version"] != VERSION:
        raise VersionError("version", f"unsupported version {doc['version']!r}")
    mode = doc.get("mode")
    if mode not in ("stabilized", "literal", "batch"):
        raise FormatError("mode", f"unknown mode {mode!r}")
    expected = _COMMON + (_BATCH_EXTRA if mode == "batch" else [])
    missing = [k for k in expected if k not in doc]
    if missing:
        raise FormatError(missing[0], "missing")
    extra = [k for k in doc if k not in expected]
    if extra:
        raise FormatError(extra[0], "unknown field")
    if doc["t_mode"] not in ("proj", "sign") or (mode == "batch" and doc["t_mode"] != "proj"):
        raise FormatError("t_mode", f"invalid value {doc['t_mode']!r}")
    eps = doc["epsilon"]
    if isinstance(eps, bool) or not isinstance(eps, (int, float)) or not eps > 0:
        raise FormatError("epsilon", f"expected a positive real, got {eps!r}")
    m = _int_field(doc, "m", 1)
    c = _int_field(doc, "c", 1)
    n = _int_field(doc, "n", 0)
    if c > m:
        raise FormatError("c", f"c={c} exceeds m={m}")
    mu = _real_vector(doc, "mu", m)
    W = _columns(doc, "W", c, m)
    P = _columns(doc, "P", c, m)
    Q = _real_vector(doc, "Q", c)
    s = _real_vector(doc, "s", c)

    if mode == "batch":
        T = _columns(doc, "T", c, n)
        t_norms = _real_vector(doc, "t_norms", c)
        return BatchPLS(mean=mu, W=W, P=P, Q=Q, T=T, s=s, t_norms=t_norms, epsilon=float(eps))

    if np.any(s < 0):
        raise FormatError("s", "score energies must be non-negative")
    opts = FitOptions(components=c, deflation=DeflationMode(mode),
                      t_mode=ScoreMode(doc["t_mode"]), epsilon=float(eps))
    model = CIPLS(m, opts)
    model.n = n
    model.mu[:] = mu
    model._W[:] = W.T
    model._P[:] = P.T
    model.Q[:] = Q
    model.s[:] = s
    return model


def deserialize(data):
    return loads(data)


def save(model, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps(model))


def load(path):
    with open(path, "rb") as fh:
        return loads(fh.read())
