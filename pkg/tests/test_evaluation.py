import numpy as np
import pytest
from numpy.testing import assert_array_equal

from cipls import (
    CIPLS,
    Dataset,
    FitOptions,
    NotEnoughComponents,
    SynthSpec,
    TooFewSamples,
    ablate_first_component,
    component_sweep,
    fit_nipals,
    split_blocks,
    streaming_curve,
    synth_gaussian,
    synth_two_direction,
)
from cipls.evaluation import (
    DEFAULT_BLOCKS,
    DEFAULT_C_MAX,
    accuracy,
    holdout_accuracy,
    permutation_null,
    refit_permutation_null,
    validation_split,
)


def tiny(n, m=2):
    X = np.arange(n * m, dtype=float).reshape(n, m)
    return Dataset(X, np.where(np.arange(n) % 2 == 0, 1.0, -1.0))


def test_defaults_match_protocol():
    assert DEFAULT_BLOCKS == 20
    assert DEFAULT_C_MAX == 10


def test_split_one_row_each():
    blocks = split_blocks(tiny(20), 20)
    assert [b.n for b in blocks] == [1] * 20


def test_split_remainder_rule_and_round_trip():
    data = tiny(103)
    blocks = split_blocks(data)
    assert [b.n for b in blocks] == [6, 6, 6] + [5] * 17
    assert np.concatenate([b.X for b in blocks]).tobytes() == data.X.tobytes()
    assert np.concatenate([b.y for b in blocks]).tobytes() == data.y.tobytes()


def test_split_too_few():
    with pytest.raises(TooFewSamples):
        split_blocks(tiny(5), 6)


def test_accuracy_zero_counts_as_positive():
    assert accuracy(np.array([0.0, -1.0]), np.array([1.0, -1.0])) == 1.0


@pytest.fixture(scope="module")
def stream_data():
    return (synth_gaussian(SynthSpec(4000, 50, 5, 2.0, 7)),
            synth_gaussian(SynthSpec(1000, 50, 5, 2.0, 8)))


def test_single_block_equals_holdout(stream_data):
    train, test = stream_data
    curve = streaming_curve(train, test, k=1)
    model = CIPLS(50).fit(train.X, train.y)
    assert curve.accuracies[0] == holdout_accuracy(model, test)


def test_stream_curve(stream_data):
    train, test = stream_data
    curve = streaming_curve(train, test, FitOptions(components=2))
    assert curve.k == 20 and len(curve.accuracies) == 20
    assert np.all((0 <= curve.accuracies) & (curve.accuracies <= 1))
    assert curve.accuracies[-1] >= 0.95
    assert curve.accuracies[-1] >= curve.accuracies[0]
    again = streaming_curve(train, test, FitOptions(components=2))
    assert curve.accuracies.tobytes() == again.accuracies.tobytes()
    cont = streaming_curve(train, test, FitOptions(components=2), retrain=False)
    assert curve.accuracies.tobytes() == cont.accuracies.tobytes()
    lines = curve.to_csv().splitlines()
    assert lines[0] == "block,train_rows,accuracy" and lines[-1].startswith("20,4000,")


def test_last_block_equals_full_fit(stream_data):
    train, test = stream_data
    curve = streaming_curve(train, test, k=7)
    full = CIPLS(50).fit(train.X, train.y)
    assert curve.accuracies[-1] == holdout_accuracy(full, test)


def test_validation_split_is_tail():
    fit_part, val = validation_split(tiny(50))
    assert fit_part.n == 45 and val.n == 5
    assert_array_equal(val.X, tiny(50).X[45:])
    with pytest.raises(TooFewSamples):
        validation_split(tiny(9))


def test_sweep_single_value():
    d = synth_gaussian(SynthSpec(200, 5, 2, 1.0, 0))
    assert component_sweep(d, c_max=1).best_c == 1


@pytest.fixture(scope="module")
def two_direction():
    return synth_two_direction(10000, 50, seed=7), synth_two_direction(2000, 50, seed=8)


def test_sweep_finds_two_directions(two_direction):
    train, _ = two_direction
    result = component_sweep(train)
    assert sorted(result.accuracies) == list(range(1, 11))
    assert result.best_c in (2, 3)


def test_ablation(two_direction):
    train, test = two_direction
    model = CIPLS(50, FitOptions(components=2)).fit(train.X, train.y)
    full = holdout_accuracy(model, test)
    ablated = ablate_first_component(model, test)
    assert ablated >= 0.75
    assert ablated <= full + 0.02
    batch = fit_nipals(train.X, train.y, 2)
    assert abs(ablate_first_component(batch, test) - ablated) < 0.03


def test_ablation_above_permutation_null(two_direction):
    train, test = two_direction
    model = CIPLS(50).fit(train.X, train.y)
    ablated = ablate_first_component(model, test)
    null = permutation_null(model, test, rounds=200, seed=1)
    assert abs(null.mean() - 0.5) < 0.01
    assert ablated > 0.5 + 3 * null.std(ddof=1)
    # models refit on shuffled labels: a wide null, but still never reached
    refit = refit_permutation_null(lambda X, y: CIPLS(50).fit(X, y), train, test, seed=1)
    assert ablated > refit.max()


def test_ablation_needs_two_components():
    d = synth_gaussian(SynthSpec(100, 5, 2, 1.0, 0))
    model = CIPLS(5, FitOptions(components=1)).fit(d.X, d.y)
    with pytest.raises(NotEnoughComponents):
        ablate_first_component(model, d)
