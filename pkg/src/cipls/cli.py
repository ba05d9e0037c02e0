"""Command-line interface: ``cipls <subcommand> ...``.

Every subcommand prints (or writes to ``--out``) a JSON run report::

    {"schema": "cipls-report", "version": "1", "command": [...argv...],
     "options": {...}, "metrics": {...}, "tool_version": "..."}

``synth``, ``transform`` and ``predict`` write their product file to ``--out``
and the report to standard output; ``fit`` writes the model to ``--model``.  Exit status: 0 success, 1 data or model error, 2 usage.
"""
import argparse
import json
import sys
import time

import numpy as np

from . import __version__
from . import bench as bench_mod
from . import model_io
from .batch import fit_nipals
from .core import CIPLS, FitOptions
from .data import SynthSpec, read_csv, synth_gaussian, synth_two_direction, write_csv
from .errors import CiplsError, FormatError, VersionError
from .evaluation import (
    DEFAULT_BLOCKS,
    DEFAULT_C_MAX,
    ablate_first_component,
    component_sweep,
    holdout_accuracy,
    streaming_curve,
    validation_split,
)
from .vip import model_vip, select_features

REPORT_SCHEMA = "cipls-report"
REPORT_VERSION = "1"
REPORT_KEYS = ("schema", "version", "command", "options", "metrics", "tool_version")
RATIO_BOUNDS = (2.0, 8.0)


def make_report(argv, options, metrics):
    return {"schema": REPORT_SCHEMA, "version": REPORT_VERSION, "command": list(argv),
            "options": options, "metrics": metrics, "tool_version": __version__}


def read_report(text):
    """Parse and validate a run report; unknown or missing fields are rejected."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError("$", f"malformed report: {exc}") from None
    if not isinstance(doc, dict):
        raise FormatError("$", "expected a JSON object")
    for key in doc:
        if key not in REPORT_KEYS:
            raise FormatError(key, "unknown field")
    for key in REPORT_KEYS:
        if key not in doc:
            raise FormatError(key, "missing")
    if doc["schema"] != REPORT_SCHEMA:
        raise FormatError("schema", f"expected {REPORT_SCHEMA!r}")
    if doc["version"] != REPORT_VERSION:
        raise VersionError("version", f"unsupported version {doc['version']!r}")
    if not isinstance(doc["metrics"], dict) or not isinstance(doc["options"], dict):
        raise FormatError("metrics", "metrics and options must be objects")
    return doc


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (v > 0 and np.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be a positive finite number, got {text}")
    return v


def _fraction(text):
    v = _positive_float(text)
    if v > 1:
        raise argparse.ArgumentTypeError(f"must lie in (0, 1], got {text}")
    return v


def _seed(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if not 0 <= v < 2 ** 64:
        raise argparse.ArgumentTypeError("must be a 64-bit unsigned integer")
    return v


def _add_fit_options(p, components=True):
    if components:
        p.add_argument("--components", type=_positive_int, default=2)
    p.add_argument("--mode", choices=["stabilized", "literal"], default="stabilized")
    p.add_argument("--t-mode", dest="t_mode", choices=["proj", "sign"], default="proj")
    p.add_argument("--epsilon", type=_positive_float, default=1e-12)


def _options(args, components=None):
    return FitOptions(components=components or args.components, deflation=args.mode,
                      t_mode=args.t_mode, epsilon=args.epsilon)


def _input(p, name="--input", required=True):
    p.add_argument(name, required=required)


def build_parser():
    parser = argparse.ArgumentParser(prog="cipls", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a seeded synthetic dataset as CSV")
    p.add_argument("--family", choices=["gaussian", "two-direction"], default="gaussian")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--informative", type=_positive_int, default=5)
    p.add_argument("--delta", type=_positive_float, default=2.0)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--header", action="store_true")
    p.add_argument("--out", required=True)

    p = sub.add_parser("fit", help="fit a model to a CSV dataset")
    _input(p)
    p.add_argument("--has-header", action="store_true")
    p.add_argument("--batch", action="store_true", help="fit batch NIPALS instead of CIPLS")
    _add_fit_options(p)
    p.add_argument("--model", required=True)
    p.add_argument("--out")

    for name, help_ in (("transform", "write component scores as CSV"),
                        ("predict", "write real-valued scores and labels as CSV")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--model", required=True)
        _input(p)
        p.add_argument("--has-header", action="store_true")
        p.add_argument("--out", required=True)

    p = sub.add_parser("eval", help="sign accuracy of a model on a labelled CSV")
    p.add_argument("--model", required=True)
    _input(p)
    p.add_argument("--has-header", action="store_true")
    p.add_argument("--ablate-first", action="store_true",
                   help="also report accuracy without the first component")
    p.add_argument("--out")

    p = sub.add_parser("vip", help="VIP feature scores of a model")
    p.add_argument("--model", required=True)
    p.add_argument("--table", help="write feature_index,score table here")
    p.add_argument("--top", type=_positive_int, default=10)
    p.add_argument("--out")

    p = sub.add_parser("select", help="keep the top fraction of features by VIP")
    p.add_argument("--model", required=True)
    p.add_argument("--keep", type=_fraction, required=True)
    p.add_argument("--indices", help="write the kept indices here, one per line")
    p.add_argument("--out")

    p = sub.add_parser("sweep", help="choose the component count on a tail validation split")
    _input(p)
    p.add_argument("--has-header", action="store_true")
    p.add_argument("--c-max", dest="c_max", type=_positive_int, default=DEFAULT_C_MAX)
    _add_fit_options(p, components=False)
    p.add_argument("--out")

    p = sub.add_parser("stream-eval", help="accuracy after each cumulative block of a stream")
    _input(p)
    p.add_argument("--test", help="test CSV; default holds out the last 10%% of --input")
    p.add_argument("--has-header", action="store_true")
    p.add_argument("--blocks", type=_positive_int, default=DEFAULT_BLOCKS)
    p.add_argument("--continue", dest="continue_", action="store_true",
                   help="keep one model across blocks instead of refitting each prefix")
    _add_fit_options(p)
    p.add_argument("--curve-csv")
    p.add_argument("--out")

    p = sub.add_parser("bench", help="per-sample update timing over an (m, c) grid")
    p.add_argument("--m", type=_positive_int, nargs="+", default=list(bench_mod.DEFAULT_MS))
    p.add_argument("--c", type=_positive_int, nargs="+", default=list(bench_mod.DEFAULT_CS))
    p.add_argument("--n", type=_positive_int, default=bench_mod.DEFAULT_N)
    p.add_argument("--repeats", type=_positive_int, default=bench_mod.DEFAULT_REPEATS)
    p.add_argument("--backend", choices=["default", "numba", "numpy", "both"], default="default")
    p.add_argument("--check", action="store_true",
                   help="exit 1 unless every 4x ratio lies in [2, 8]")
    p.add_argument("--out")
    return parser


def _load_data(path, args):
    return read_csv(path, has_header=getattr(args, "has_header", False))


def _write_rows(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(model_io.format_real(v) for v in row) + "\n")


def cmd_synth(args):
    if args.family == "gaussian":
        data = synth_gaussian(SynthSpec(args.n, args.m, args.informative, args.delta, args.seed))
    else:
        data = synth_two_direction(args.n, args.m, seed=args.seed)
    write_csv(data, args.out, header=args.header)
    pos = int((data.y > 0).sum())
    return {"rows": data.n, "features": data.m, "positives": pos, "negatives": data.n - pos,
            "provenance": data.provenance}


def cmd_fit(args):
    data = _load_data(args.input, args)
    t0 = time.perf_counter()
    if args.batch:
        model = fit_nipals(data.X, data.y, args.components, epsilon=args.epsilon)
    else:
        model = CIPLS(data.m, _options(args)).fit(data.X, data.y)
    elapsed = time.perf_counter() - t0
    model_io.save(model, args.model)
    return {"rows": data.n, "features": data.m, "components": model.c,
            "training_accuracy": holdout_accuracy(model, data),
            "timings": {"fit_seconds": elapsed, "per_sample_seconds": elapsed / data.n}}


def cmd_transform(args):
    model = model_io.load(args.model)
    data = _load_data(args.input, args)
    T = model.transform(data.X)
    _write_rows(args.out, [f"t{i + 1}" for i in range(model.c)], T)
    return {"rows": data.n, "components": model.c}


def cmd_predict(args):
    model = model_io.load(args.model)
    data = _load_data(args.input, args)
    scores = model.predict(data.X)
    labels = model.predict_label(data.X)
    _write_rows(args.out, ["score", "label"], np.column_stack([scores, labels]))
    return {"rows": data.n, "accuracy": holdout_accuracy(model, data)}


def cmd_eval(args):
    model = model_io.load(args.model)
    data = _load_data(args.input, args)
    metrics = {"rows": data.n, "accuracy": holdout_accuracy(model, data)}
    if args.ablate_first:
        metrics["ablated_accuracy"] = ablate_first_component(model, data)
    return metrics


def cmd_vip(args):
    model = model_io.load(args.model)
    report = model_vip(model)
    if args.table:
        with open(args.table, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report.to_text())
    top = [int(j) for j in report.ranking[:args.top]]
    return {"features": len(report.scores), "top": top,
            "top_scores": [float(report.scores[j]) for j in top],
            "sum_of_squares": float(np.sum(report.scores ** 2))}


def cmd_select(args):
    model = model_io.load(args.model)
    kept = select_features(model_vip(model), args.keep)
    if args.indices:
        with open(args.indices, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("".join(f"{j}\n" for j in kept))
    return {"features": model.m, "kept": len(kept), "indices": kept}


def cmd_sweep(args):
    data = _load_data(args.input, args)
    result = component_sweep(data, _options(args, components=1), c_max=args.c_max)
    return {"best_c": result.best_c,
            "accuracies": [{"c": c, "accuracy": a} for c, a in result.accuracies.items()]}


def cmd_stream_eval(args):
    data = _load_data(args.input, args)
    if args.test:
        train, test = data, _load_data(args.test, args)
    else:
        train, test = validation_split(data)
    curve = streaming_curve(train, test, _options(args), k=args.blocks,
                            retrain=not args.continue_)
    if args.curve_csv:
        with open(args.curve_csv, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(curve.to_csv())
    return {"blocks": curve.k, "block_sizes": curve.block_sizes, "test_rows": test.n,
            "curve": [float(a) for a in curve.accuracies],
            "final_accuracy": float(curve.accuracies[-1])}


def cmd_bench(args):
    if args.backend == "both":
        backends = ["numba", "numpy"]
    elif args.backend == "default":
        backends = [None]
    else:
        backends = [args.backend]
    tables = [bench_mod.bench_partial_fit(args.m, args.c, n=args.n, repeats=args.repeats,
                                          backend=b) for b in backends]
    for t in tables:
        print(t.format(), file=sys.stderr)
    metrics = {"tables": [t.to_dict() for t in tables]}
    if args.check:
        lo, hi = RATIO_BOUNDS
        bad = []
        for t in tables:
            for kind in ("m_ratios", "c_ratios"):
                bad += [dict(r, backend=t.backend, kind=kind) for r in t.to_dict()[kind]
                        if _is_fourfold(r) and not lo <= r["ratio"] <= hi]
        metrics["ratio_violations"] = bad
    return metrics


def _is_fourfold(row):
    lo = row.get("m_lo", row.get("c_lo"))
    hi = row.get("m_hi", row.get("c_hi"))
    return hi == 4 * lo


COMMANDS = {"synth": cmd_synth, "fit": cmd_fit, "transform": cmd_transform,
            "predict": cmd_predict, "eval": cmd_eval, "vip": cmd_vip, "select": cmd_select,
            "sweep": cmd_sweep, "stream-eval": cmd_stream_eval, "bench": cmd_bench}

# commands whose --out names a product file rather than the report
_PRODUCT_OUT = {"synth", "transform", "predict"}


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        metrics = COMMANDS[args.command](args)
    except (CiplsError, OSError) as exc:
        print(f"cipls {args.command}: error: {exc}", file=sys.stderr)
        return 1
    options = {k: v for k, v in vars(args).items() if k != "command"}
    report = json.dumps(make_report(argv, options, metrics), indent=2) + "\n"
    out = None if args.command in _PRODUCT_OUT else getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(report)
    else:
        sys.stdout.write(report)
    if metrics.get("ratio_violations"):
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
