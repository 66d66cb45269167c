"""Match records, source-CSV parsers and the canonical dataset format.

Two vendor layouts are understood: the Open International Soccer Database
(columns ``Sea,Lge,Date,HT,AT,HS,AS,GD,WDL``) and football-data.co.uk season
files. Both are turned into a :class:`Dataset` of :class:`MatchRecord` rows,
which can be persisted in a small versioned CSV format so that downstream
tools never re-read vendor files.
"""

from __future__ import annotations

import csv
import io
import logging
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field, replace
from datetime import date, datetime
from enum import IntEnum
from typing import Iterable, Mapping, Sequence

logger = logging.getLogger(__name__)

CANONICAL_HEADER = "pitchrater-dataset v1"
CANONICAL_COLUMNS = (
    "season", "league", "date", "home", "away", "hg", "ag",
    "odds_h", "odds_d", "odds_a", "stats",
)

OISDB_COLUMNS = ("Sea", "Lge", "Date", "HT", "AT", "HS", "AS", "GD", "WDL")
FOOTBALLDATA_REQUIRED = ("Date", "HomeTeam", "AwayTeam", "FTHG", "FTAG", "FTR")

# Bookmaker column prefixes in order of preference; the first provider with
# all three prices present on a row wins.
FOOTBALLDATA_ODDS_PROVIDERS = (
    "B365", "Avg", "BbAv", "PS", "WH", "IW", "VC", "BW", "LB", "Max", "BbMx",
)

FOOTBALLDATA_STATS = {
    "HS": "shots_home",
    "AS": "shots_away",
    "HST": "shots_on_target_home",
    "AST": "shots_on_target_away",
    "HC": "corners_home",
    "AC": "corners_away",
    "HF": "fouls_home",
    "AF": "fouls_away",
    "HY": "yellow_cards_home",
    "AY": "yellow_cards_away",
    "HR": "red_cards_home",
    "AR": "red_cards_away",
    "HTHG": "ht_goals_home",
    "HTAG": "ht_goals_away",
}

# Columns we read or knowingly skip; anything else counts as unmapped.
_FOOTBALLDATA_KNOWN = set(FOOTBALLDATA_REQUIRED) | set(FOOTBALLDATA_STATS) | {
    "Div", "Time", "HTR", "Referee", "Season", "Attendance",
}


class Result(IntEnum):
    """Match result from the home side's point of view.

    The integer value is the sign of the goal difference, so results order
    as ``HOME_WIN > DRAW > AWAY_WIN``.
    """

    AWAY_WIN = -1
    DRAW = 0
    HOME_WIN = 1

    @classmethod
    def from_goal_diff(cls, goal_diff: int) -> "Result":
        return cls((goal_diff > 0) - (goal_diff < 0))

    @property
    def index(self) -> int:
        """Position in a (home, draw, away) outcome vector."""
        return 1 - int(self)

    @property
    def code(self) -> str:
        return {1: "H", 0: "D", -1: "A"}[int(self)]

    @classmethod
    def from_index(cls, index: int) -> "Result":
        return cls(1 - index)


_WDL_CODES = {
    "W": Result.HOME_WIN, "H": Result.HOME_WIN,
    "D": Result.DRAW,
    "L": Result.AWAY_WIN, "A": Result.AWAY_WIN,
}


class DataError(ValueError):
    """Malformed source data. ``row`` is 1-based and counts the header."""

    def __init__(self, message: str, row: int | None = None, column: str | None = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


class ValidationError(DataError):
    """A row parsed but violates a record invariant."""


@dataclass(frozen=True, slots=True)
class OddsTriple:
    """Decimal bookmaker odds for home win, draw and away win."""

    home: float
    draw: float
    away: float

    def __post_init__(self):
        for name in ("home", "draw", "away"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 1.0):
                raise ValidationError(f"decimal odds must exceed 1.0, got {name}={v!r}")

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.home, self.draw, self.away)


@dataclass(frozen=True, slots=True)
class MatchRecord:
    """One completed fixture.

    ``goal_diff`` and ``result`` are stored rather than derived so that
    inconsistent source rows can be represented and reported by
    :func:`validate`; use :meth:`from_score` to build consistent records.
    ``source_index`` is provenance only and is ignored by equality.
    """

    season: str
    league: str
    date: date
    home_team: str
    away_team: str
    home_goals: int
    away_goals: int
    goal_diff: int
    result: Result
    odds: OddsTriple | None = None
    stats: Mapping[str, float] | None = None
    source_index: int = field(default=0, compare=False)

    def __post_init__(self):
        if self.home_goals < 0 or self.away_goals < 0:
            raise ValidationError(
                f"goals must be non-negative, got {self.home_goals}-{self.away_goals}")

    @classmethod
    def from_score(cls, season, league, date, home_team, away_team, home_goals,
                   away_goals, odds=None, stats=None, source_index=0) -> "MatchRecord":
        gd = int(home_goals) - int(away_goals)
        return cls(season, league, date, home_team, away_team, int(home_goals),
                   int(away_goals), gd, Result.from_goal_diff(gd), odds,
                   dict(stats) if stats else None, source_index)

    @property
    def key(self) -> str:
        return f"{self.league}|{self.date.isoformat()}|{self.home_team}|{self.away_team}"

    @property
    def margin(self) -> int:
        return abs(self.home_goals - self.away_goals)

    def stat(self, name: str) -> tuple[float, float]:
        """(home, away) values of a match statistic; ``"goals"`` is built in."""
        if name == "goals":
            return float(self.home_goals), float(self.away_goals)
        stats = self.stats or {}
        try:
            return stats[f"{name}_home"], stats[f"{name}_away"]
        except KeyError:
            raise KeyError(f"statistic {name!r} missing from match {self.key}") from None

    def is_consistent(self) -> bool:
        gd = self.home_goals - self.away_goals
        return self.goal_diff == gd and self.result == Result.from_goal_diff(gd)


@dataclass(frozen=True, slots=True)
class Issue:
    row: int | None
    column: str | None
    message: str


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of matches.

    When ``ordering_flag`` is true the matches are non-decreasing in
    ``(date, league, source_index)``.
    """

    matches: tuple[MatchRecord, ...]
    ordering_flag: bool = False
    issues: tuple[Issue, ...] = ()
    unmapped_columns: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.matches)

    def __iter__(self):
        return iter(self.matches)

    def __getitem__(self, i):
        return self.matches[i]

    @property
    def leagues(self) -> list[str]:
        return sorted({m.league for m in self.matches})

    @property
    def has_odds(self) -> bool:
        return bool(self.matches) and all(m.odds is not None for m in self.matches)

    def filter(self, pred) -> "Dataset":
        return replace(self, matches=tuple(m for m in self.matches if pred(m)))


def normalize_team(name: str) -> str:
    return name.strip().casefold()


def parse_date(text: str) -> date:
    """Parse ISO ``YYYY-MM-DD`` or football-data style ``DD/MM/YY[YY]``."""
    text = text.strip()
    for fmt in ("%Y-%m-%d", "%d/%m/%Y", "%d/%m/%y"):
        try:
            return datetime.strptime(text, fmt).date()
        except ValueError:
            continue
    raise ValueError(f"unrecognised date {text!r}")


def season_of(d: date) -> str:
    """European season label (``2022-23``) for a match date; July starts a season."""
    start = d.year if d.month >= 7 else d.year - 1
    return f"{start}-{(start + 1) % 100:02d}"


def _int_field(value: str, row: int, column: str, signed: bool = False) -> int:
    try:
        v = int(value.strip())
    except (ValueError, AttributeError):
        raise DataError(f"expected an integer, got {value!r}", row, column) from None
    if not signed and v < 0:
        raise DataError(f"expected a non-negative integer, got {v}", row, column)
    return v


def _float_field(value: str, row: int, column: str) -> float:
    try:
        return float(value.strip())
    except (ValueError, AttributeError):
        raise DataError(f"expected a number, got {value!r}", row, column) from None


def _date_field(value: str, row: int, column: str) -> date:
    try:
        return parse_date(value)
    except ValueError as exc:
        raise DataError(str(exc), row, column) from None


def _reader(text: str) -> tuple[list[str], Iterable[tuple[int, list[str]]]]:
    reader = csv.reader(io.StringIO(text.lstrip("﻿")))
    try:
        header = [h.strip() for h in next(reader)]
    except StopIteration:
        raise DataError("empty input: no header row") from None
    rows = ((i, r) for i, r in enumerate(reader, start=2) if any(c.strip() for c in r))
    return header, rows


def parse_oisdb(text: str, strict: bool = True) -> Dataset:
    """Parse Open International Soccer Database CSV content.

    The GD and WDL columns are cross-checked against the goals on every
    row. With ``strict=True`` a mismatch raises :class:`ValidationError`;
    otherwise the record keeps the file's GD/WDL values and the mismatch is
    listed in ``Dataset.issues``.
    """
    header, rows = _reader(text)
    missing = [c for c in OISDB_COLUMNS if c not in header]
    if missing:
        raise DataError(f"header is missing OISDB column(s) {', '.join(missing)}", 1)
    col = {name: header.index(name) for name in OISDB_COLUMNS}

    records: list[MatchRecord] = []
    issues: list[Issue] = []
    for rownum, raw in rows:
        if len(raw) < len(header):
            raise DataError(f"expected {len(header)} fields, got {len(raw)}", rownum)
        get = lambda name: raw[col[name]]
        d = _date_field(get("Date"), rownum, "Date")
        hg = _int_field(get("HS"), rownum, "HS")
        ag = _int_field(get("AS"), rownum, "AS")
        gd = _int_field(get("GD"), rownum, "GD", signed=True)
        wdl = get("WDL").strip().upper()
        if wdl not in _WDL_CODES:
            raise DataError(f"expected one of W/D/L, got {wdl!r}", rownum, "WDL")
        result = _WDL_CODES[wdl]
        home, away = normalize_team(get("HT")), normalize_team(get("AT"))
        if not home or not away:
            raise DataError("empty team name", rownum, "HT" if not home else "AT")

        problems = []
        if gd != hg - ag:
            problems.append(("GD", f"GD={gd} but HS-AS={hg - ag}"))
        if result != Result.from_goal_diff(hg - ag):
            problems.append(("WDL", f"WDL={wdl} inconsistent with score {hg}-{ag}"))
        if problems and strict:
            column, message = problems[0]
            raise ValidationError(message, rownum, column)
        issues.extend(Issue(rownum, c, m) for c, m in problems)

        records.append(MatchRecord(
            season=get("Sea").strip(), league=get("Lge").strip(), date=d,
            home_team=home, away_team=away, home_goals=hg, away_goals=ag,
            goal_diff=gd, result=result, source_index=len(records),
        ))
    return Dataset(tuple(records), issues=tuple(issues))


def parse_footballdata(text: str, league: str | None = None, season: str | None = None,
                       odds_provider: str | None = None, strict: bool = True) -> Dataset:
    """Parse a football-data.co.uk results file.

    ``league`` defaults to the ``Div`` column and ``season`` to the European
    season containing each match date. Odds come from ``odds_provider`` if
    given, otherwise from the first provider in
    :data:`FOOTBALLDATA_ODDS_PROVIDERS` with a complete price triple.
    """
    header, rows = _reader(text)
    for name in FOOTBALLDATA_REQUIRED:
        if name not in header:
            raise DataError(f"missing mandatory column {name!r}", 1, name)
    col = {name: i for i, name in enumerate(header) if name}

    providers = [odds_provider] if odds_provider else list(FOOTBALLDATA_ODDS_PROVIDERS)
    providers = [p for p in providers if all(f"{p}{s}" in col for s in "HDA")]
    odds_cols = {f"{p}{s}" for p in FOOTBALLDATA_ODDS_PROVIDERS for s in "HDA"}
    unmapped = tuple(h for h in header if h and h not in _FOOTBALLDATA_KNOWN and h not in odds_cols)
    if unmapped:
        logger.warning("ignoring %d unmapped football-data column(s)", len(unmapped))

    records: list[MatchRecord] = []
    issues: list[Issue] = []
    for rownum, raw in rows:
        raw = raw + [""] * (len(header) - len(raw))
        get = lambda name: raw[col[name]].strip()
        d = _date_field(get("Date"), rownum, "Date")
        hg = _int_field(get("FTHG"), rownum, "FTHG")
        ag = _int_field(get("FTAG"), rownum, "FTAG")
        ftr = get("FTR").upper()
        if ftr not in ("H", "D", "A"):
            raise DataError(f"expected H/D/A, got {ftr!r}", rownum, "FTR")
        result = _WDL_CODES[ftr]
        if result != Result.from_goal_diff(hg - ag):
            msg = f"FTR={ftr} inconsistent with score {hg}-{ag}"
            if strict:
                raise ValidationError(msg, rownum, "FTR")
            issues.append(Issue(rownum, "FTR", msg))
        home, away = normalize_team(get("HomeTeam")), normalize_team(get("AwayTeam"))
        if not home or not away:
            raise DataError("empty team name", rownum, "HomeTeam" if not home else "AwayTeam")

        odds = None
        for p in providers:
            vals = [get(f"{p}{s}") for s in "HDA"]
            if not all(vals):
                continue
            prices = [_float_field(v, rownum, f"{p}{s}") for v, s in zip(vals, "HDA")]
            try:
                odds = OddsTriple(*prices)
            except ValidationError as exc:
                bad = next(f"{p}{s}" for v, s in zip(prices, "HDA") if not v > 1.0)
                if strict:
                    raise ValidationError(str(exc), rownum, bad) from None
                issues.append(Issue(rownum, bad, str(exc)))
            break

        stats = {}
        for src, name in FOOTBALLDATA_STATS.items():
            if src in col and get(src):
                v = _float_field(get(src), rownum, src)
                if v < 0:
                    raise DataError(f"statistic must be non-negative, got {v}", rownum, src)
                stats[name] = v

        div = get("Div") if "Div" in col else ""
        records.append(MatchRecord(
            season=season or (get("Season") if "Season" in col and get("Season") else season_of(d)),
            league=league or div or "UNK", date=d, home_team=home, away_team=away,
            home_goals=hg, away_goals=ag, goal_diff=hg - ag, result=result,
            odds=odds, stats=stats or None, source_index=len(records),
        ))
    return Dataset(tuple(records), issues=tuple(issues), unmapped_columns=unmapped)


def canonical_sort(dataset: Dataset) -> Dataset:
    """Stable sort by ``(date, league, source_index)``."""
    ordered = sorted(dataset.matches, key=lambda m: (m.date, m.league, m.source_index))
    return replace(dataset, matches=tuple(ordered), ordering_flag=True)


def is_canonical(matches: Sequence[MatchRecord]) -> bool:
    keys = [(m.date, m.league, m.source_index) for m in matches]
    return all(a <= b for a, b in zip(keys, keys[1:]))


@dataclass
class ValidationReport:
    counts: dict[str, int]
    details: list[str] = field(default_factory=list)

    RULES = ("result_goal_mismatch", "duplicate_fixture", "date_gap", "self_play", "parse_finding")

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def clean(self) -> bool:
        return self.total == 0

    def summary(self) -> str:
        lines = [f"{name}: {self.counts[name]}" for name in self.RULES]
        return "\n".join(lines + self.details[:20])


def validate(dataset: Dataset, max_gap_days: int = 120) -> ValidationReport:
    """Count rule violations without modifying anything.

    A date gap is two consecutive matches of the same league and season
    more than ``max_gap_days`` apart.
    """
    counts = dict.fromkeys(ValidationReport.RULES, 0)
    details: list[str] = []
    seen: Counter = Counter()
    by_season: dict[tuple[str, str], list[date]] = defaultdict(list)
    for m in dataset.matches:
        if not m.is_consistent():
            counts["result_goal_mismatch"] += 1
            details.append(f"result/goal mismatch: {m.key}")
        if m.home_team == m.away_team:
            counts["self_play"] += 1
            details.append(f"self-play: {m.key}")
        fixture = (m.date, m.home_team, m.away_team)
        if seen[fixture]:
            counts["duplicate_fixture"] += 1
            details.append(f"duplicate fixture: {m.key}")
        seen[fixture] += 1
        by_season[(m.league, m.season)].append(m.date)
    for (league, season), dates in by_season.items():
        dates.sort()
        for a, b in zip(dates, dates[1:]):
            if (b - a).days > max_gap_days:
                counts["date_gap"] += 1
                details.append(f"date gap: {league} {season} {a} -> {b}")
    counts["parse_finding"] = len(dataset.issues)
    details.extend(f"row {i.row} {i.column}: {i.message}" for i in dataset.issues)
    return ValidationReport(counts, details)


def _fmt_float(v: float) -> str:
    return repr(float(v))


def dump_dataset(dataset: Dataset) -> str:
    """Serialise to the canonical ``pitchrater-dataset v1`` text format."""
    buf = io.StringIO()
    buf.write(CANONICAL_HEADER + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    for m in dataset.matches:
        odds = [_fmt_float(v) for v in m.odds.as_tuple()] if m.odds else ["", "", ""]
        stats = ";".join(f"{k}={_fmt_float(v)}" for k, v in sorted((m.stats or {}).items()))
        writer.writerow([m.season, m.league, m.date.isoformat(), m.home_team, m.away_team,
                         m.home_goals, m.away_goals, *odds, stats])
    return buf.getvalue()


def load_dataset(text: str) -> Dataset:
    """Parse the canonical format written by :func:`dump_dataset`."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != CANONICAL_HEADER:
        raise DataError(f"expected header line {CANONICAL_HEADER!r}", 1)
    records = []
    for offset, raw in enumerate(csv.reader(lines[1:])):
        rownum = offset + 2
        if not raw:
            continue
        if len(raw) != len(CANONICAL_COLUMNS):
            raise DataError(f"expected {len(CANONICAL_COLUMNS)} fields, got {len(raw)}", rownum)
        season, league, d, home, away, hg, ag, oh, od, oa, stats_field = raw
        odds = None
        if oh or od or oa:
            try:
                odds = OddsTriple(_float_field(oh, rownum, "odds_h"),
                                  _float_field(od, rownum, "odds_d"),
                                  _float_field(oa, rownum, "odds_a"))
            except ValidationError as exc:
                raise ValidationError(str(exc), rownum, "odds") from None
        stats = {}
        for pair in filter(None, stats_field.split(";")):
            name, sep, value = pair.partition("=")
            if not sep:
                raise DataError(f"malformed statistic {pair!r}", rownum, "stats")
            stats[name] = _float_field(value, rownum, "stats")
        records.append(MatchRecord.from_score(
            season, league, _date_field(d, rownum, "date"), normalize_team(home),
            normalize_team(away), _int_field(hg, rownum, "hg"), _int_field(ag, rownum, "ag"),
            odds=odds, stats=stats or None, source_index=len(records),
        ))
    return Dataset(tuple(records), ordering_flag=is_canonical(records))


def read_dataset(path) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return load_dataset(fh.read())
