"""Walk-forward backtesting.

Each league is replayed on its own. For every test fold the forecaster is
fitted on matches dated strictly before the fold, ratings are updated
match by match, and every match is forecast from the state left by earlier
dates only: matches sharing a date are all forecast from the same snapshot
before any of them is applied.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import math
from collections import defaultdict
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Callable, Sequence

from .._io import atomic_write_text
from ..data import Dataset, MatchRecord, Result, is_canonical
from ..forecast import DegenerateFitError, PreMatch, ProbTriple
from ..ratings import SeasonTracker
from .scoring import accuracy, brier_score, ign_score, rmse, rps

logger = logging.getLogger(__name__)


class MissingInputError(ValueError):
    """The pipeline needs an input the dataset or engine cannot provide."""


@dataclass
class Pipeline:
    """A rating engine (optional) feeding a forecaster.

    Both are given as zero-argument factories so every league and fold gets
    fresh instances.
    """

    forecaster: Callable[[], object]
    engine: Callable[[], object] | None = None
    name: str | None = None

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        f = self.forecaster().name
        return f if self.engine is None else f"{self.engine().name}+{f}"


@dataclass(frozen=True)
class FoldSpec:
    """How test folds are cut.

    ``kind="season"`` starts a fold whenever the season label changes within
    a league; ``kind="chunk"`` starts one every ``chunk_size`` matches.
    ``window`` limits training to the trailing ``window`` matches.
    """

    kind: str = "season"
    chunk_size: int | None = None
    window: int | None = None

    def __post_init__(self):
        if self.kind not in ("season", "chunk"):
            raise ValueError(f"unknown fold kind {self.kind!r}")
        if self.kind == "chunk" and not (self.chunk_size and self.chunk_size > 0):
            raise ValueError("chunk folds need a positive chunk_size")
        if self.window is not None and self.window < 1:
            raise ValueError("window must be positive")


@dataclass(frozen=True)
class ReportRow:
    key: str
    league: str
    season: str
    fold: int
    date: date
    forecast: ProbTriple
    outcome: Result
    rps: float
    brier: float
    ign: float
    ign_clamped: bool
    goals: tuple[int, int]
    goal_prediction: tuple[float, float] | None = None

    @property
    def predicted(self) -> Result:
        return self.forecast.predicted


@dataclass(frozen=True)
class FoldInfo:
    league: str
    fold: int
    first_date: date
    last_date: date
    n_train: int
    n_test: int
    skipped: bool


METRICS = ("n", "accuracy", "brier", "rps_avg", "ign", "rmse_goals")


def aggregate(rows: Sequence[ReportRow]) -> dict:
    """Summary metrics of a set of report rows."""
    if not rows:
        return {"n": 0}
    goal_rows = [r for r in rows if r.goal_prediction is not None]
    out = {
        "n": len(rows),
        "accuracy": accuracy([r.predicted for r in rows], [r.outcome for r in rows]),
        "brier": math.fsum(r.brier for r in rows) / len(rows),
        "rps_avg": math.fsum(r.rps for r in rows) / len(rows),
        "ign": math.fsum(r.ign for r in rows) / len(rows),
        "rmse_goals": None,
        "ign_clamped": sum(r.ign_clamped for r in rows),
    }
    if goal_rows:
        pred = [g for r in goal_rows for g in r.goal_prediction]
        act = [g for r in goal_rows for g in r.goals]
        out["rmse_goals"] = rmse(pred, act)
    return out


@dataclass
class BacktestReport:
    model: str
    rows: list[ReportRow]
    folds: list[FoldInfo]
    notes: list[str] = field(default_factory=list)

    def overall(self) -> dict:
        return aggregate(self.rows)

    def aggregates(self) -> list[dict]:
        """Metrics overall and per fold, league and (league, season)."""
        groups: dict[tuple, list[ReportRow]] = defaultdict(list)
        for r in self.rows:
            groups[("league", r.league, "")].append(r)
            groups[("season", r.league, r.season)].append(r)
            groups[("fold", r.league, str(r.fold))].append(r)
        out = [{"scope": "all", "league": "", "group": "", **self.overall()}]
        for (scope, league, group), rows in sorted(groups.items()):
            out.append({"scope": scope, "league": league, "group": group, **aggregate(rows)})
        return out

    def summary(self) -> dict:
        return {
            "model": self.model,
            "overall": self.overall(),
            "folds": [
                {"league": f.league, "fold": f.fold, "first_date": f.first_date.isoformat(),
                 "last_date": f.last_date.isoformat(), "n_train": f.n_train, "n_test": f.n_test,
                 "skipped": f.skipped}
                for f in self.folds
            ],
            "notes": list(self.notes),
        }

    def rows_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["match", "league", "season", "fold", "date", "p_home", "p_draw", "p_away",
                    "predicted_class", "outcome", "rps", "brier", "ign", "ign_clamped",
                    "home_goals", "away_goals", "pred_home_goals", "pred_away_goals", "model_name"])
        for r in self.rows:
            gp = [repr(g) for g in r.goal_prediction] if r.goal_prediction else ["", ""]
            w.writerow([r.key, r.league, r.season, r.fold, r.date.isoformat(),
                        *(repr(p) for p in r.forecast), r.predicted.code, r.outcome.code,
                        repr(r.rps), repr(r.brier), repr(r.ign), int(r.ign_clamped),
                        *r.goals, *gp, self.model])
        return buf.getvalue()

    def aggregates_csv(self) -> str:
        buf = io.StringIO()
        cols = ["scope", "league", "group", *METRICS, "ign_clamped"]
        w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for agg in self.aggregates():
            w.writerow({k: ("" if v is None else v) for k, v in agg.items()})
        return buf.getvalue()

    def write(self, out_dir, extra_summary: dict | None = None) -> Path:
        out = Path(out_dir)
        atomic_write_text(out / "rows.csv", self.rows_csv())
        atomic_write_text(out / "aggregates.csv", self.aggregates_csv())
        summary = self.summary()
        if extra_summary:
            summary.update(extra_summary)
        atomic_write_text(out / "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
        return out


def _fold_ids(matches: Sequence[MatchRecord], spec: FoldSpec) -> list[int]:
    if spec.kind == "chunk":
        return [i // spec.chunk_size for i in range(len(matches))]
    ids, fold, prev = [], -1, None
    for m in matches:
        if m.season != prev:
            fold += 1
            prev = m.season
        ids.append(fold)
    return ids


def _check_inputs(forecaster, engine, matches: Sequence[MatchRecord]) -> None:
    needs = getattr(forecaster, "needs", ())
    if "odds" in needs:
        missing = sum(m.odds is None for m in matches)
        if missing:
            raise MissingInputError(
                f"forecaster {forecaster.name!r} needs bookmaker odds but {missing} of "
                f"{len(matches)} matches have none")
    if ("covariate" in needs or "expected_goals" in needs) and engine is None:
        raise MissingInputError(f"forecaster {forecaster.name!r} needs a rating engine")
    if "expected_goals" in needs and matches:
        m = matches[0]
        if engine.expected_goals(m.home_team, m.away_team) is None:
            raise MissingInputError(
                f"engine {engine.name!r} does not produce expected goals for forecaster "
                f"{forecaster.name!r}")


def walk_forward(dataset: Dataset, pipeline: Pipeline, folds: FoldSpec = FoldSpec()) -> BacktestReport:
    """Backtest ``pipeline`` over a canonically sorted dataset."""
    if not (dataset.ordering_flag or is_canonical(dataset.matches)):
        raise ValueError("walk_forward needs a canonically sorted dataset")
    rows: list[ReportRow] = []
    fold_infos: list[FoldInfo] = []
    notes: list[str] = []
    for league in dataset.leagues:
        matches = [m for m in dataset.matches if m.league == league]
        _run_league(league, matches, pipeline, folds, rows, fold_infos, notes)
    rows.sort(key=lambda r: (r.date, r.league))
    return BacktestReport(pipeline.label, rows, fold_infos, notes)


def _run_league(league, matches, pipeline, spec, rows, fold_infos, notes):
    engine = pipeline.engine() if pipeline.engine is not None else None
    probe = pipeline.forecaster()
    _check_inputs(probe, engine, matches)
    fold_of = _fold_ids(matches, spec)
    tracker = SeasonTracker(matches)
    history: list[tuple[date, PreMatch]] = []
    fold_first: dict[int, date] = {}
    fold_last: dict[int, date] = {}
    for m, f in zip(matches, fold_of):
        fold_first.setdefault(f, m.date)
        fold_last[f] = m.date
    fitted: dict[int, object | None] = {}
    counts: dict[int, int] = defaultdict(int)

    def forecaster_for(f: int):
        if f in fitted:
            return fitted[f]
        start = fold_first[f]
        train = [s for d, s in history if d < start]
        if spec.window is not None:
            train = train[-spec.window:]
        model = None
        if not train:
            notes.append(f"{league} fold {f}: skipped, no earlier matches to train on")
        else:
            model = pipeline.forecaster()
            try:
                model.fit(train)
            except DegenerateFitError as exc:
                notes.append(f"{league} fold {f}: skipped, {exc}")
                model = None
        fitted[f] = model
        fold_infos.append(FoldInfo(league, f, start, fold_last[f], len(train), 0, model is None))
        return model

    indexed = list(zip(matches, fold_of))
    for day, group in itertools.groupby(indexed, key=lambda t: t[0].date):
        group = list(group)
        for m, _ in group:
            tracker.observe(engine, m)
        pre = []
        for m, f in group:
            cov = eg = None
            if engine is not None:
                cov = engine.covariate(m.home_team, m.away_team)
                eg = engine.expected_goals(m.home_team, m.away_team)
            pre.append(PreMatch(cov, eg, m.odds, m.result))
        for (m, f), sample in zip(group, pre):
            model = forecaster_for(f)
            if model is None:
                continue
            p = model.predict(sample)
            ign_val, clamped = ign_score(p, m.result)
            rows.append(ReportRow(
                key=m.key, league=league, season=m.season, fold=f, date=m.date, forecast=p,
                outcome=m.result, rps=rps(p, m.result), brier=brier_score(p, m.result),
                ign=ign_val, ign_clamped=clamped, goals=(m.home_goals, m.away_goals),
                goal_prediction=sample.expected_goals,
            ))
            counts[f] += 1
        for (m, _), sample in zip(group, pre):
            if engine is not None:
                engine.update(m)
            history.append((m.date, sample))
    for i, info in enumerate(fold_infos):
        if info.league == league:
            fold_infos[i] = FoldInfo(info.league, info.fold, info.first_date, info.last_date,
                                     info.n_train, counts[info.fold], info.skipped)


def temporal_split(dataset: Dataset, train_fraction: float) -> tuple[Dataset, Dataset]:
    """Chronological train/test split that never divides a date.

    The first ``ceil(train_fraction * N)`` matches go to training; if that
    boundary falls inside a date, it retreats so the whole date is tested.
    """
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must lie in (0, 1), got {train_fraction}")
    matches = dataset.matches
    if not (dataset.ordering_flag or is_canonical(matches)):
        raise ValueError("temporal_split needs a canonically sorted dataset")
    cut = math.ceil(round(train_fraction * len(matches), 9))
    while 0 < cut < len(matches) and matches[cut - 1].date == matches[cut].date:
        cut -= 1
    if cut == 0:
        raise ValueError("training set would be empty")
    train = Dataset(matches[:cut], ordering_flag=True)
    test = Dataset(matches[cut:], ordering_flag=True)
    return train, test
