"""Evaluation protocols: holdout accuracy, component sweep, streaming curves, ablation."""
from dataclasses import dataclass, replace

import numpy as np

from .core import CIPLS, FitOptions, sign_label
from .errors import DimensionMismatch, InvalidConfig, NotEnoughComponents, TooFewSamples

DEFAULT_BLOCKS = 20
DEFAULT_C_MAX = 10
VALIDATION_FRACTION = 0.10


@dataclass(eq=False)
class StreamCurve:
    k: int
    accuracies: np.ndarray
    block_sizes: list

    def to_csv(self):
        lines = ["block,train_rows,accuracy"]
        seen = 0
        for b, (size, acc) in enumerate(zip(self.block_sizes, self.accuracies), start=1):
            seen += size
            lines.append(f"{b},{seen},{acc:.17g}")
        return "\n".join(lines) + "\n"


@dataclass(eq=False)
class SweepResult:
    best_c: int
    accuracies: dict   # c -> validation accuracy


def accuracy(scores, y):
    """Fraction of sign matches; a score of 0 counts as +1."""
    return float(np.mean(sign_label(scores) == np.asarray(y)))


def holdout_accuracy(model, test):
    return accuracy(model.predict(test.X), test.y)


def fit_cipls(data, options=None):
    return CIPLS(data.m, options).fit(data.X, data.y)


def split_blocks(data, k=DEFAULT_BLOCKS):
    """Contiguous, order-preserving split into ``k`` blocks.

    The first ``n mod k`` blocks get one extra row.
    """
    if k < 1:
        raise InvalidConfig(f"block count must be >= 1, got {k}")
    if data.n < k:
        raise TooFewSamples(f"cannot split {data.n} rows into {k} blocks")
    base, extra = divmod(data.n, k)
    blocks, start = [], 0
    for b in range(k):
        size = base + (1 if b < extra else 0)
        blocks.append(data.take(slice(start, start + size), note=f"block {b + 1}/{k}"))
        start += size
    return blocks


def streaming_curve(train, test, options=None, k=DEFAULT_BLOCKS, retrain=True):
    """Test accuracy after each cumulative prefix of ``k`` arrival blocks.

    With ``retrain`` (the default) every prefix is fit by a fresh model.
    Otherwise one model keeps absorbing blocks.  Since the update is a pure
    function of the sample sequence, both give the same curve; the
    continuing variant costs one pass instead of ``k(k+1)/2`` block passes.
    """
    if train.m != test.m:
        raise DimensionMismatch(f"train has {train.m} features, test has {test.m}")
    blocks = split_blocks(train, k)
    accs = np.empty(k)
    model = CIPLS(train.m, options)
    for b in range(k):
        if retrain:
            model = CIPLS(train.m, options)
            for blk in blocks[:b + 1]:
                model.partial_fit(blk.X, blk.y)
        else:
            model.partial_fit(blocks[b].X, blocks[b].y)
        accs[b] = holdout_accuracy(model, test)
    return StreamCurve(k=k, accuracies=accs, block_sizes=[blk.n for blk in blocks])


def validation_split(data, fraction=VALIDATION_FRACTION):
    """Deterministic split: the last ``fraction`` of rows are held out."""
    n_val = int(round(data.n * fraction, 9))
    if n_val < 1 or data.n - n_val < 2:
        raise TooFewSamples(f"{data.n} rows leave no usable {fraction:.0%} validation split")
    cut = data.n - n_val
    return data.take(slice(0, cut), "fit split"), data.take(slice(cut, data.n), "validation split")


def component_sweep(train, options=None, c_max=DEFAULT_C_MAX):
    """Pick the component count in ``1..c_max`` with the best validation accuracy.

    Ties go to the smaller count.  ``options`` supplies every setting except
    ``components``.
    """
    if c_max < 1:
        raise InvalidConfig(f"c_max must be >= 1, got {c_max}")
    template = FitOptions() if options is None else options
    fit_part, val_part = validation_split(train)
    accs = {}
    for c in range(1, c_max + 1):
        model = fit_cipls(fit_part, replace(template, components=c))
        accs[c] = holdout_accuracy(model, val_part)
    best = max(accs, key=lambda c: (accs[c], -c))
    return SweepResult(best_c=best, accuracies=accs)


def ablate_first_component(model, test):
    """Sign accuracy of ``sum_{i>=2} t_i q_i`` with the first component dropped."""
    if model.c < 2:
        raise NotEnoughComponents(f"ablation needs at least 2 components, model has {model.c}")
    T = model.transform(test.X)
    q = model.regression_loadings()
    return accuracy(T[:, 1:] @ q[1:], test.y)


def permutation_null(model, test, rounds=200, seed=0, ablate=True):
    """Accuracies of a fixed model's scores against shuffled test labels.

    This is the chance-level reference for a reported accuracy: the scores
    are kept, only their pairing with the labels is destroyed.
    """
    T = model.transform(test.X)
    q = model.regression_loadings()
    scores = T[:, 1:] @ q[1:] if ablate else T @ q
    rng = np.random.Generator(np.random.PCG64(seed))
    return np.array([accuracy(scores, rng.permutation(test.y)) for _ in range(rounds)])


def refit_permutation_null(model_factory, train, test, rounds=20, seed=0, ablate=True):
    """Accuracies of models refit on shuffled training labels.

    ``model_factory(X, y)`` returns a fitted model.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    out = np.empty(rounds)
    for r in range(rounds):
        model = model_factory(train.X, rng.permutation(train.y))
        out[r] = ablate_first_component(model, test) if ablate else holdout_accuracy(model, test)
    return out
