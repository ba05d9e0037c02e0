import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_array_equal

from cipls import (
    InvalidSpec,
    LabelError,
    ParseError,
    RaggedRows,
    SynthSpec,
    read_csv,
    synth_gaussian,
    synth_two_direction,
    write_csv,
)


def write(tmp_path, text, name="d.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_read_maps_zero_one_labels(tmp_path):
    d = read_csv(write(tmp_path, "1.0,2.0,1\n3.0,4.0,0\n"))
    assert_array_equal(d.X, [[1.0, 2.0], [3.0, 4.0]])
    assert_array_equal(d.y, [1.0, -1.0])


def test_read_header(tmp_path):
    d = read_csv(write(tmp_path, "a,b,label\n1.0,2.0,1\n3.0,4.0,0\n"), has_header=True)
    assert_array_equal(d.X, [[1.0, 2.0], [3.0, 4.0]])


def test_read_plus_minus_labels_pass_through(tmp_path):
    d = read_csv(write(tmp_path, "1,-1\n2,1\n3,+1\n"))
    assert_array_equal(d.y, [-1.0, 1.0, 1.0])


def test_bad_label_names_row(tmp_path):
    with pytest.raises(LabelError) as exc:
        read_csv(write(tmp_path, "1.0,2.0,1\n3.0,4.0,2\n"))
    assert exc.value.row == 2


def test_parse_error_row_and_column(tmp_path):
    with pytest.raises(ParseError) as exc:
        read_csv(write(tmp_path, "1.0,2.0,1\n3.0,abc,0\n"))
    assert (exc.value.row, exc.value.column) == (2, 2)


def test_ragged_rows(tmp_path):
    with pytest.raises(RaggedRows):
        read_csv(write(tmp_path, "1.0,2.0,1\n3.0,0\n"))


def test_empty_file(tmp_path):
    with pytest.raises(ParseError):
        read_csv(write(tmp_path, ""))


def test_synth_is_deterministic():
    spec = SynthSpec(200, 7, 3, 1.5, 123)
    a, b = synth_gaussian(spec), synth_gaussian(spec)
    assert a.X.tobytes() == b.X.tobytes() and a.y.tobytes() == b.y.tobytes()


def test_synth_balance_and_interleaving():
    d = synth_gaussian(SynthSpec(101, 3, 1, 1.0, 0))
    assert (d.y > 0).sum() == 51
    assert_array_equal(d.y[:4], [1.0, -1.0, 1.0, -1.0])


def test_synth_class_means():
    d = synth_gaussian(SynthSpec(10000, 1, 1, 1.0, 1))
    bound = 3 / np.sqrt(5000)
    assert abs(d.X[d.y > 0, 0].mean() - 1.0) < bound
    assert abs(d.X[d.y < 0, 0].mean() + 1.0) < bound


@pytest.mark.parametrize("kwargs", [dict(informative=0), dict(informative=9),
                                    dict(delta=0.0), dict(n=0), dict(seed=-1)])
def test_invalid_spec(kwargs):
    base = dict(n=10, m=8, informative=2, delta=1.0, seed=0)
    base.update(kwargs)
    with pytest.raises(InvalidSpec):
        SynthSpec(**base)


def test_two_direction_family():
    d = synth_two_direction(20000, 4, seed=3)
    pos, neg = d.X[d.y > 0], d.X[d.y < 0]
    diff = pos.mean(axis=0) - neg.mean(axis=0)
    assert abs(diff[0] - 8.0) < 0.5 and abs(diff[1] - 3.0) < 0.1
    assert np.all(np.abs(diff[2:]) < 0.1)
    with pytest.raises(InvalidSpec):
        synth_two_direction(10, 1)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 40), st.integers(1, 6), st.integers(0, 2 ** 32 - 1), st.booleans())
def test_csv_round_trip_exact(tmp_path_factory, n, m, seed, header):
    d = synth_gaussian(SynthSpec(n, m, 1, 1.0, seed))
    d.X[0, 0] = np.nextafter(1.0, 2.0)
    path = tmp_path_factory.mktemp("rt") / "d.csv"
    write_csv(d, path, header=header)
    back = read_csv(path, has_header=header)
    assert back.X.tobytes() == d.X.tobytes()
    assert_array_equal(back.y, d.y)
