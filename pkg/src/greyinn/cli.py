"""Command-line interface: ``greyinn <command> [flags]``.

Exit codes: 0 success, 2 usage or input error, 3 numeric or fitting error.
"""

import argparse
import sys

import numpy as np
import tomli

from . import harness, report
from .grey import DegenerateFitError, HorizonError
from .harness import MODELS, OMITTED_BASELINES, RunConfig
from .metrics import METRIC_NAMES
from .nn import DivergenceError
from .pso import SearchError, order_fitness, select_order
from .synth import GENERATORS

EXIT_USAGE = 2
EXIT_NUMERIC = 3

NUMERIC_ERRORS = (DegenerateFitError, DivergenceError, SearchError, HorizonError, ArithmeticError)

# settings that may come from a config file or a flag
CONFIG_KEYS = (
    "model", "models", "train_split", "window", "xi", "grey_form", "alpha", "beta",
    "lr", "iters", "seed", "hidden", "activation", "pso_particles", "pso_iters", "horizon",
)


class UsageError(Exception):
    pass


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def _order_value(text):
    if text == "pso":
        return text
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'pso', got {text!r}") from None


def _int_list(text):
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _model_list(text):
    return tuple(t.strip() for t in text.split(",") if t.strip())


def _add_run_flags(p, model=True, horizon=False):
    if model:
        p.add_argument("--model", choices=MODELS)
    p.add_argument("--data", required=True, help="CSV with header and columns label,value")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--config", help="TOML file with default settings (flags win)")
    p.add_argument("--train-split", dest="train_split", type=_positive_int,
                   help="number of leading points used for fitting")
    p.add_argument("--window", type=_positive_int, help="sliding window length T (default 2)")
    p.add_argument("--xi", type=float, help="grey-term weight (default 0.1)")
    p.add_argument("--grey-form", dest="grey_form", choices=("mae", "mse"))
    p.add_argument("--alpha", type=_order_value, help="fractional order alpha or 'pso'")
    p.add_argument("--beta", type=_order_value, help="fractional order beta or 'pso'")
    p.add_argument("--lr", type=float, help="learning rate (default 0.001)")
    p.add_argument("--iters", type=_positive_int, help="training iterations (default 2000)")
    p.add_argument("--seed", type=int)
    p.add_argument("--hidden", type=_int_list, help="hidden layer widths, e.g. 10 or 10,10")
    p.add_argument("--activation", choices=("tanh", "relu", "sigmoid"))
    p.add_argument("--pso-particles", dest="pso_particles", type=_positive_int)
    p.add_argument("--pso-iters", dest="pso_iters", type=_positive_int)
    if horizon:
        p.add_argument("--horizon", type=_positive_int, required=True)


def build_parser():
    parser = argparse.ArgumentParser(prog="greyinn", description="Grey-informed small-sample forecasting.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a model and write parameters, fitted values and loss trace")
    _add_run_flags(p)
    p = sub.add_parser("forecast", help="fit a model and forecast beyond the data")
    _add_run_flags(p, horizon=True)
    p = sub.add_parser("evaluate", help="fit on a training prefix and score the held-out tail")
    _add_run_flags(p)
    p = sub.add_parser("compare", help="evaluate several models on the same split")
    _add_run_flags(p, model=False)
    p.add_argument("--models", type=_model_list, help=f"comma-separated subset of {','.join(MODELS)}")
    p.add_argument("--svg", action="store_true", help="also write chart.svg")
    p = sub.add_parser("search-order", help="select (alpha, beta) of tM-FGM(1,1) by particle swarm")
    _add_run_flags(p, model=False)

    p = sub.add_parser("synth", help="write a synthetic series")
    p.add_argument("kind", choices=sorted(GENERATORS))
    p.add_argument("--c", type=float, default=None, help="level (default 100, or 10 for geometric)")
    p.add_argument("--q", type=float, default=1.08, help="growth ratio")
    p.add_argument("--n", type=_positive_int, default=20)
    p.add_argument("--sigma", type=float, default=0.02, help="multiplicative noise level (noisy-exp)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="output directory (series.csv); default is standard output")
    return parser


def load_config(args):
    """Defaults, then the TOML file, then explicit flags."""
    values = {}
    if getattr(args, "config", None):
        try:
            with open(args.config, "rb") as fh:
                doc = tomli.load(fh)
        except OSError as exc:
            raise UsageError(f"cannot read config {args.config}: {exc.strerror or exc}") from None
        except tomli.TOMLDecodeError as exc:
            raise UsageError(f"invalid config {args.config}: {exc}") from None
        for key, value in doc.items():
            key = key.replace("-", "_")
            if key not in CONFIG_KEYS:
                raise UsageError(f"unknown config key {key!r}")
            values[key] = value
    for key in CONFIG_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if isinstance(values.get("hidden"), int):
        values["hidden"] = (values["hidden"],)
    if isinstance(values.get("models"), str):
        values["models"] = _model_list(values["models"])
    for key in ("hidden", "models"):
        if key in values:
            values[key] = tuple(values[key])
    cfg = RunConfig(**values)
    try:
        return cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(text, stream=None):
    (stream or sys.stdout).write(text + "\n")


def cmd_fit(args, cfg):
    labels, values = report.read_series(args.data)
    split = cfg.train_split or len(values)
    if split > len(values):
        raise UsageError(f"train_split ({split}) exceeds the series length ({len(values)})")
    m = harness.fit_model(cfg.model, values[:split], cfg)
    files = {
        "params.csv": report.csv_text(["name", "value"], m.params),
        "predictions.csv": report.csv_text(
            ["label", "index", "actual", "fitted"],
            [[labels[k - 1], int(k), values[k - 1], float(f)] for k, f in zip(m.fitted_index, m.fitted)],
        ),
        "manifest.json": report.manifest_text({"command": "fit", "model": cfg.model, "train_split": split,
                                               "config": cfg.manifest()}),
    }
    if m.trace:
        files["trace.csv"] = report.csv_text(["iteration", "loss"], [[i, v] for i, v in enumerate(m.trace, 1)])
    if m.order is not None:
        files["order.csv"] = report.csv_text(["alpha", "beta"], [[m.order.alpha, m.order.beta]])
    report.write_files(args.out, files)
    _emit(report.table(["name", "value"], m.params[:8], report.use_color(sys.stdout)))
    return 0


def cmd_forecast(args, cfg):
    labels, values = report.read_series(args.data)
    split = cfg.train_split or len(values)
    if split > len(values):
        raise UsageError(f"train_split ({split}) exceeds the series length ({len(values)})")
    m = harness.fit_model(cfg.model, values[:split], cfg)
    preds = m.forecast(cfg.horizon)
    new_labels = report.continue_labels(labels[:split], cfg.horizon)
    rows = [[lab, float(p)] for lab, p in zip(new_labels, preds)]
    report.write_files(args.out, {
        "predictions.csv": report.csv_text(["label", "forecast"], rows),
        "manifest.json": report.manifest_text({"command": "forecast", "model": cfg.model, "train_split": split,
                                               "config": cfg.manifest()}),
    })
    _emit(report.table(["label", "forecast"], rows, report.use_color(sys.stdout)))
    return 0


def _run_evaluations(args, cfg, models):
    labels, values = report.read_series(args.data)
    split = harness.default_split(len(values), cfg)
    if split >= len(values):
        raise UsageError(f"train_split ({split}) must be smaller than the series length ({len(values)})")
    for name in models:
        if split < cfg.min_train(name):
            raise UsageError(f"{name} needs train_split >= {cfg.min_train(name)}, got {split}")
    evals = []
    for name in models:
        evals.append((name, harness.evaluate_model(name, values, cfg)))
    return labels, values, split, evals


def _prediction_rows(labels, split, evals):
    rows = []
    for name, ev in evals:
        for i, (a, p) in enumerate(zip(ev.actual, ev.predicted)):
            rows.append([name, labels[split + i], a, float(p), abs(a - float(p))])
    return rows


def _evaluation_files(command, cfg, labels, split, evals):
    manifest = {
        "command": command,
        "models": [name for name, _ in evals],
        "train_split": split,
        "test_points": len(labels) - split,
        "config": cfg.manifest(),
        "orders": {name: [ev.model.order.alpha, ev.model.order.beta]
                   for name, ev in evals if ev.model.order is not None},
    }
    return {
        "metrics.csv": report.csv_text(["model", *METRIC_NAMES], report.metrics_rows(evals)),
        "predictions.csv": report.csv_text(["model", "label", "actual", "predicted", "abs_error"],
                                           _prediction_rows(labels, split, evals)),
        "manifest.json": report.manifest_text(manifest),
    }


def cmd_evaluate(args, cfg):
    labels, values, split, evals = _run_evaluations(args, cfg, [cfg.model])
    report.write_files(args.out, _evaluation_files("evaluate", cfg, labels, split, evals))
    _emit(report.table(["model", *METRIC_NAMES], report.metrics_rows(evals), report.use_color(sys.stdout)))
    return 0


def cmd_compare(args, cfg):
    models = [m for m in MODELS if m in cfg.models]
    labels, values, split, evals = _run_evaluations(args, cfg, models)
    files = _evaluation_files("compare", cfg, labels, split, evals)
    if args.svg:
        x = list(range(1, len(values) + 1))
        series = [("actual", x, values)]
        series += [(name, x[split:], [float(p) for p in ev.predicted]) for name, ev in evals]
        files["chart.svg"] = report.svg_chart(series, title="actual vs forecast")
    report.write_files(args.out, files)
    _emit(report.table(["model", *METRIC_NAMES], report.metrics_rows(evals), report.use_color(sys.stdout)))
    _emit(f"note: baselines {', '.join(OMITTED_BASELINES)} are not included (no formulas available).")
    return 0


def cmd_search_order(args, cfg):
    labels, values = report.read_series(args.data)
    split = cfg.train_split or len(values)
    if split > len(values):
        raise UsageError(f"train_split ({split}) exceeds the series length ({len(values)})")
    train = np.asarray(values[:split])
    order, result = select_order(train, cfg.pso_config(), return_result=True)
    baseline = order_fitness(train, 1.0, 1.0)
    report.write_files(args.out, {
        "order.csv": report.csv_text(["alpha", "beta", "fitness", "fitness_at_1_1", "evaluations"],
                                     [[order.alpha, order.beta, result.best_fitness, baseline, result.evaluations]]),
        "trace.csv": report.csv_text(["iteration", "best_fitness"], [[i, v] for i, v in enumerate(result.trace)]),
        "manifest.json": report.manifest_text({"command": "search-order", "train_split": split,
                                               "config": cfg.manifest()}),
    })
    _emit(f"alpha={order.alpha!r} beta={order.beta!r} in-sample MAPE={result.best_fitness!r}")
    return 0


def cmd_synth(args):
    gen = args.kind
    if gen == "geometric":
        values = GENERATORS[gen](10.0 if args.c is None else args.c, args.q, args.n)
    elif gen == "constant":
        values = GENERATORS[gen](100.0 if args.c is None else args.c, args.n)
    else:
        values = GENERATORS[gen](100.0 if args.c is None else args.c, args.q, args.n, args.sigma, args.seed)
    text = report.csv_text(["label", "value"], [[k, float(v)] for k, v in enumerate(values, 1)])
    if args.out:
        report.write_files(args.out, {"series.csv": text})
    else:
        sys.stdout.write(text)
    return 0


COMMANDS = {
    "fit": cmd_fit,
    "forecast": cmd_forecast,
    "evaluate": cmd_evaluate,
    "compare": cmd_compare,
    "search-order": cmd_search_order,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "synth":
            return cmd_synth(args)
        cfg = load_config(args)
        return COMMANDS[args.command](args, cfg)
    except NUMERIC_ERRORS as exc:
        print(f"greyinn: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, ValueError, OSError) as exc:
        print(f"greyinn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
