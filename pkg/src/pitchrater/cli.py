"""Command-line interface.

Exit codes: 0 success, 1 fatal error, 2 success with validation findings,
64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import config as cfgmod
from ._io import atomic_write_text
from .data import (DataError, canonical_sort, dump_dataset, parse_footballdata, parse_oisdb,
                   read_dataset, validate)
from .evaluate import FoldSpec, MissingInputError, Pipeline, walk_forward
from .forecast import FORECASTERS, PoissonForecaster
from .ratings import ENGINES, make_engine, rating_timeline, write_timeline
from .simulate import SimLeague, gen_league, truth_csv

EXIT_OK, EXIT_FATAL, EXIT_FINDINGS, EXIT_USAGE = 0, 1, 2, 64
BASELINE_ORDER = ("uniform", "majority", "odds")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_config_flags(p):
    p.add_argument("--config", metavar="FILE", help="flat key=value config file")
    p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                   help="override one config key (repeatable)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="pitchrater", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="parse a vendor CSV into the canonical dataset format")
    p.add_argument("source", help="input CSV path")
    p.add_argument("--format", required=True, choices=["oisdb", "footballdata"])
    p.add_argument("--out", required=True, help="canonical dataset output path")
    p.add_argument("--league", help="league label (footballdata; defaults to the Div column)")
    p.add_argument("--season", help="season label (footballdata; defaults to the match date)")

    p = sub.add_parser("rate", help="replay a rating engine and export its timeline")
    p.add_argument("dataset", help="canonical dataset path")
    p.add_argument("--engine", required=True, choices=sorted(ENGINES))
    p.add_argument("--out", required=True, help="timeline CSV output path")
    _add_config_flags(p)

    p = sub.add_parser("backtest", help="walk-forward backtest against baselines")
    p.add_argument("dataset", help="canonical dataset path")
    p.add_argument("--engine", default="elo", choices=[*sorted(ENGINES), "none"])
    p.add_argument("--forecaster", default="ologit", choices=sorted(FORECASTERS))
    p.add_argument("--out-dir", required=True)
    p.add_argument("--folds", choices=["season", "chunk"], help="fold boundaries")
    p.add_argument("--chunk-size", type=int, help="matches per fold with --folds chunk")
    p.add_argument("--window", type=int, help="train on the trailing WINDOW matches only")
    _add_config_flags(p)

    p = sub.add_parser("simulate", help="generate a synthetic league with known strengths")
    p.add_argument("--teams", type=int, default=20)
    p.add_argument("--seasons", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--home-factor", type=float, default=1.25)
    p.add_argument("--strength-low", type=float, default=0.5)
    p.add_argument("--strength-high", type=float, default=2.0)
    p.add_argument("--league", default="SIM")
    p.add_argument("--out", required=True, help="canonical dataset output path")
    p.add_argument("--truth", help="truth CSV path [OUT with .truth.csv suffix]")

    p = sub.add_parser("report", help="print the metrics table of a stored backtest")
    p.add_argument("report_dir")
    return parser


def _fmt(v) -> str:
    return "-" if v is None else f"{v:.4f}"


def metrics_table(results: dict[str, dict]) -> str:
    lines = [f"{'model':<22}{'n':>7}{'RPS_avg':>10}{'Accuracy':>10}{'Brier':>9}{'IGN':>9}"]
    for name, m in results.items():
        if not m.get("n"):
            lines.append(f"{name:<22}{0:>7}  (no predictions)")
            continue
        lines.append(f"{name:<22}{m['n']:>7}{_fmt(m['rps_avg']):>10}{_fmt(m['accuracy']):>10}"
                     f"{_fmt(m['brier']):>9}{_fmt(m['ign']):>9}")
    return "\n".join(lines)


def _need_file(path: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"cannot read {path}: no such file")
    return p


def _resolve_config(args) -> dict[str, str]:
    file_values = cfgmod.load_config_file(_need_file(args.config)) if args.config else {}
    try:
        overrides = cfgmod.parse_pairs(args.overrides)
    except cfgmod.ConfigError as exc:
        raise UsageError(str(exc)) from None
    try:
        return cfgmod.resolve(file_values, overrides)
    except cfgmod.ConfigError as exc:
        raise UsageError(str(exc)) from None


def cmd_ingest(args) -> int:
    text = _need_file(args.source).read_text(encoding="utf-8-sig")
    if args.format == "oisdb":
        dataset = parse_oisdb(text, strict=False)
    else:
        dataset = parse_footballdata(text, league=args.league, season=args.season, strict=False)
    report = validate(dataset)
    atomic_write_text(args.out, dump_dataset(dataset))
    print(f"wrote {len(dataset)} matches to {args.out}")
    if dataset.unmapped_columns:
        print(f"ignored {len(dataset.unmapped_columns)} unmapped column(s)")
    print(report.summary())
    return EXIT_OK if report.clean else EXIT_FINDINGS


def cmd_rate(args) -> int:
    cfg = _resolve_config(args)
    dataset = read_dataset(_need_file(args.dataset))
    if not len(dataset):
        print(f"error: {args.dataset} contains no matches", file=sys.stderr)
        return EXIT_FATAL
    engine = make_engine(args.engine, cfgmod.engine_config(args.engine, cfg))
    dataset = canonical_sort(dataset)
    atomic_write_text(args.out, write_timeline(rating_timeline(engine, dataset.matches)))
    atomic_write_text(f"{args.out}.config", cfgmod.dump(cfg))
    print(f"wrote {args.engine} timeline for {len(dataset)} matches to {args.out}")
    return EXIT_OK


def _fold_spec(args, cfg) -> FoldSpec:
    kind = args.folds or cfg["backtest.folds"]
    chunk = args.chunk_size if args.chunk_size is not None else cfgmod._opt_int(cfg, "backtest.chunk_size")
    window = args.window if args.window is not None else cfgmod._opt_int(cfg, "backtest.window")
    try:
        return FoldSpec(kind, chunk, window)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_backtest(args) -> int:
    cfg = _resolve_config(args)
    folds = _fold_spec(args, cfg)
    dataset = canonical_sort(read_dataset(_need_file(args.dataset)))
    if not len(dataset):
        print(f"error: {args.dataset} contains no matches", file=sys.stderr)
        return EXIT_FATAL

    engine = None
    if args.engine != "none":
        econf = cfgmod.engine_config(args.engine, cfg)
        engine = lambda: make_engine(args.engine, econf)
    forecaster = FORECASTERS[args.forecaster]
    if forecaster is PoissonForecaster:
        g_max = int(cfg["poisson.g_max"])
        forecaster = lambda: PoissonForecaster(g_max)
    pipeline = Pipeline(forecaster, engine)
    report = walk_forward(dataset, pipeline, folds)

    results = {pipeline.label: report.overall()}
    baselines = [b for b in BASELINE_ORDER if b != "odds" or dataset.has_odds]
    for name in baselines:
        if name == args.forecaster and args.engine == "none":
            continue
        results[name] = walk_forward(dataset, Pipeline(FORECASTERS[name]), folds).overall()

    out = Path(args.out_dir)
    report.write(out, {"baselines": {k: v for k, v in results.items() if k != pipeline.label}})
    atomic_write_text(out / "config.txt", cfgmod.dump(cfg))
    print(metrics_table(results))
    for note in report.notes:
        print(f"note: {note}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    try:
        sim = SimLeague.log_spaced(args.teams, args.strength_low, args.strength_high,
                                   home_factor=args.home_factor, seasons=args.seasons,
                                   seed=args.seed, league=args.league)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    dataset, truth = gen_league(sim)
    truth_path = args.truth or f"{args.out}.truth.csv"
    atomic_write_text(args.out, dump_dataset(dataset))
    atomic_write_text(truth_path, truth_csv(truth))
    print(f"wrote {len(dataset)} simulated matches to {args.out} and strengths to {truth_path}")
    return EXIT_OK


def cmd_report(args) -> int:
    path = Path(args.report_dir) / "summary.json"
    summary = json.loads(_need_file(path).read_text(encoding="utf-8"))
    baselines = summary.get("baselines", {})
    results = {summary["model"]: summary["overall"]}
    results.update((k, baselines[k]) for k in BASELINE_ORDER if k in baselines)
    print(metrics_table(results))
    skipped = sum(f["skipped"] for f in summary.get("folds", []))
    print(f"folds: {len(summary.get('folds', []))} ({skipped} skipped)")
    return EXIT_OK


COMMANDS = {"ingest": cmd_ingest, "rate": cmd_rate, "backtest": cmd_backtest,
            "simulate": cmd_simulate, "report": cmd_report}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"pitchrater: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, DataError, MissingInputError, ValueError, KeyError, json.JSONDecodeError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        print(f"pitchrater: error: {msg}", file=sys.stderr)
        return EXIT_FATAL


if __name__ == "__main__":
    sys.exit(main())
