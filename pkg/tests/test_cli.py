import json

import pytest

from cipls import load
from cipls.cli import main, read_report
from cipls.errors import FormatError, VersionError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def dataset(tmp_path, capsys):
    path = tmp_path / "d.csv"
    code, out, _ = run(capsys, "synth", "--n", "2000", "--m", "50", "--informative", "5",
                       "--delta", "2", "--seed", "7", "--out", str(path))
    assert code == 0
    assert read_report(out)["metrics"]["positives"] == 1000
    return path


def test_fit_eval_pipeline(tmp_path, capsys, dataset):
    model = tmp_path / "m.json"
    code, out, _ = run(capsys, "fit", "--input", str(dataset), "--components", "2",
                       "--model", str(model))
    assert code == 0 and load(model).c == 2
    code, out, _ = run(capsys, "eval", "--model", str(model), "--input", str(dataset))
    assert code == 0
    assert read_report(out)["metrics"]["accuracy"] >= 0.95


def test_stream_eval_default_blocks(tmp_path, capsys, dataset):
    curve = tmp_path / "curve.csv"
    code, out, _ = run(capsys, "stream-eval", "--input", str(dataset), "--curve-csv", str(curve))
    assert code == 0
    metrics = read_report(out)["metrics"]
    assert metrics["blocks"] == 20 and len(metrics["curve"]) == 20
    assert len(curve.read_text().splitlines()) == 21


def test_reports_reproducible(tmp_path, capsys, dataset):
    reports = []
    for _ in range(2):
        code, out, _ = run(capsys, "stream-eval", "--input", str(dataset), "--blocks", "5")
        reports.append(out)
    assert reports[0] == reports[1]


def test_zero_components_is_usage_error(capsys, dataset, tmp_path):
    code, _, err = run(capsys, "fit", "--input", str(dataset), "--components", "0",
                       "--model", str(tmp_path / "m.json"))
    assert code == 2
    assert "--components" in err


def test_unknown_subcommand(capsys):
    code, _, _ = run(capsys, "frobnicate")
    assert code == 2


def test_data_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1.0,2.0,7\n")
    code, _, err = run(capsys, "fit", "--input", str(bad), "--model", str(tmp_path / "m.json"))
    assert code == 1 and "label" in err


def test_model_error_exit_code(tmp_path, capsys, dataset):
    model = tmp_path / "m.json"
    model.write_text("{")
    code, _, _ = run(capsys, "eval", "--model", str(model), "--input", str(dataset))
    assert code == 1


def test_vip_select_transform_predict(tmp_path, capsys, dataset):
    model = tmp_path / "m.json"
    run(capsys, "fit", "--input", str(dataset), "--batch", "--model", str(model))
    table, idx = tmp_path / "vip.txt", tmp_path / "idx.txt"
    code, out, _ = run(capsys, "vip", "--model", str(model), "--table", str(table))
    assert code == 0
    metrics = read_report(out)["metrics"]
    assert set(range(5)) <= set(metrics["top"])
    assert abs(metrics["sum_of_squares"] - 50) < 1e-8
    assert table.read_text().splitlines()[0] == "feature_index,score"
    code, out, _ = run(capsys, "select", "--model", str(model), "--keep", "0.1",
                       "--indices", str(idx))
    assert code == 0 and idx.read_text().split() == ["0", "1", "2", "3", "4"]
    scores = tmp_path / "t.csv"
    assert run(capsys, "transform", "--model", str(model), "--input", str(dataset),
               "--out", str(scores))[0] == 0
    assert scores.read_text().splitlines()[0] == "t1,t2"
    preds = tmp_path / "p.csv"
    assert run(capsys, "predict", "--model", str(model), "--input", str(dataset),
               "--out", str(preds))[0] == 0
    assert len(preds.read_text().splitlines()) == 2001


def test_sweep_report(tmp_path, capsys):
    data = tmp_path / "two.csv"
    run(capsys, "synth", "--family", "two-direction", "--n", "5000", "--m", "20",
        "--seed", "3", "--out", str(data))
    report = tmp_path / "r.json"
    code, out, _ = run(capsys, "sweep", "--input", str(data), "--c-max", "4",
                       "--out", str(report))
    assert code == 0 and out == ""
    metrics = read_report(report.read_text())["metrics"]
    assert metrics["best_c"] in (2, 3) and len(metrics["accuracies"]) == 4


def test_bench_small(capsys):
    code, out, _ = run(capsys, "bench", "--m", "16", "64", "--c", "1", "--n", "100",
                       "--repeats", "2", "--backend", "both")
    assert code == 0
    tables = read_report(out)["metrics"]["tables"]
    assert [t["backend"] for t in tables] == ["numba", "numpy"]


def test_read_report_rejects_unknown_fields(capsys, dataset, tmp_path):
    _, out, _ = run(capsys, "stream-eval", "--input", str(dataset), "--blocks", "2")
    doc = json.loads(out)
    doc["surprise"] = True
    with pytest.raises(FormatError):
        read_report(json.dumps(doc))
    doc.pop("surprise")
    doc["version"] = "2"
    with pytest.raises(VersionError):
        read_report(json.dumps(doc))
