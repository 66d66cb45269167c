"""Pre-match feature builders.

Everything here looks only at matches strictly before the one being
described. Streak features use league points per game (0, 1 or 3).
"""

from __future__ import annotations

import csv
import io
import math
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .data import Dataset, MatchRecord, OddsTriple

VALID_SCORES = (0, 1, 3)


@dataclass(frozen=True)
class HistoryWindow:
    """A team's past values, oldest first, with their ages in days."""

    values: tuple[float, ...]
    ages_days: tuple[float, ...] = ()

    def __post_init__(self):
        if self.ages_days and len(self.ages_days) != len(self.values):
            raise ValueError("values and ages_days must have equal length")
        if any(a < b for a, b in zip(self.ages_days, self.ages_days[1:])):
            raise ValueError("ages must not increase toward the most recent entry")


@dataclass(frozen=True)
class RecencyMean:
    value: float
    short_history: bool


def recency_mean(window: HistoryWindow | Sequence[float], n: int) -> RecencyMean:
    """Mean of the last ``n`` values, flagged when fewer than ``n`` exist."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    values = window.values if isinstance(window, HistoryWindow) else tuple(window)
    if not values:
        raise ValueError("no history to aggregate")
    recent = values[-n:]
    return RecencyMean(sum(recent) / len(recent), len(values) < n)


def exp_weights(ages_days: Sequence[float], xi: float) -> np.ndarray:
    """Exponential time-decay weights ``exp(-xi * age)``."""
    if xi < 0:
        raise ValueError(f"xi must be non-negative, got {xi}")
    ages = np.asarray(ages_days, dtype=float)
    if np.any(ages < 0):
        raise ValueError("ages must be non-negative")
    return np.exp(-xi * ages)


def weighted_recency_mean(window: HistoryWindow, xi: float) -> float:
    w = exp_weights(window.ages_days, xi)
    return float(np.dot(w, window.values) / w.sum())


def _check_scores(scores: Sequence[int], k: int) -> Sequence[int]:
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")
    if len(scores) < k:
        raise ValueError(f"need at least {k} scores, got {len(scores)}")
    recent = scores[-k:]
    for s in recent:
        if s not in VALID_SCORES:
            raise ValueError(f"score must be one of {VALID_SCORES}, got {s!r}")
    return recent


def streak(scores: Sequence[int], k: int = 6) -> float:
    """Points from the last ``k`` games over the maximum ``3k``."""
    return sum(_check_scores(scores, k)) / (3 * k)


def weighted_streak(scores: Sequence[int], k: int = 6) -> float:
    """Streak with linear recency weights; the latest game weighs ``k`` times the oldest."""
    recent = _check_scores(scores, k)
    return sum(2 * i * s for i, s in enumerate(recent, start=1)) / (3 * k * (k + 1))


def form_step(form_a: float, form_b: float, outcome: int, alpha: float = 0.33) -> tuple[float, float]:
    """Update two teams' forms after A met B.

    ``outcome`` is +1 if A won, 0 for a draw and -1 if B won. Both new
    values are computed from the pre-match forms.
    """
    if not 0 <= alpha <= 1:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if outcome > 0:
        return form_a + alpha * form_b, form_b - alpha * form_a
    if outcome < 0:
        new_b, new_a = form_b + alpha * form_a, form_a - alpha * form_b
        return new_a, new_b
    return form_a - alpha * (form_a - form_b), form_b - alpha * (form_b - form_a)


@dataclass
class FormState:
    alpha: float = 0.33
    form: dict[str, float] = field(default_factory=dict)

    def get(self, team: str) -> float:
        return self.form.get(team, 1.0)

    def update(self, match: MatchRecord) -> None:
        a, b = form_step(self.get(match.home_team), self.get(match.away_team),
                         int(match.result), self.alpha)
        self.form[match.home_team] = a
        self.form[match.away_team] = b


@dataclass(frozen=True)
class ImpliedProbabilities:
    probs: tuple[float, ...]
    overround: float

    @property
    def normalization_factor(self) -> float:
        return 1.0 + self.overround


def odds_to_probs(odds: OddsTriple | Sequence[float]) -> ImpliedProbabilities:
    """Reciprocal odds rescaled to sum to one, plus the bookmaker overround.

    Works for any number of outcomes; an :class:`OddsTriple` gives
    (home, draw, away).
    """
    prices = odds.as_tuple() if isinstance(odds, OddsTriple) else tuple(odds)
    for p in prices:
        if not (math.isfinite(p) and p > 1.0):
            raise ValueError(f"decimal odds must exceed 1.0, got {p!r}")
    raw = [1.0 / p for p in prices]
    total = math.fsum(raw)
    return ImpliedProbabilities(tuple(r / total for r in raw), total - 1.0)


def points(goals_for: int, goals_against: int) -> int:
    return 3 if goals_for > goals_against else (1 if goals_for == goals_against else 0)


@dataclass
class FeatureConfig:
    recency_n: int = 9
    streak_k: int = 6
    form_alpha: float = 0.33
    xi: float | None = None


def build_features(dataset: Dataset, config: FeatureConfig = FeatureConfig()) -> list[dict]:
    """One feature row per match, computed from strictly earlier matches only.

    Columns are named ``feature.team.side``: ``team`` is ``home``/``away``
    (whose history) and ``side`` is ``for``/``against`` or ``all``.
    Missing history yields NaN; short recency windows are flagged.
    """
    goals_for: dict[str, list[float]] = defaultdict(list)
    goals_against: dict[str, list[float]] = defaultdict(list)
    dates: dict[str, list] = defaultdict(list)
    scores: dict[str, deque] = defaultdict(lambda: deque(maxlen=config.streak_k))
    form = FormState(config.form_alpha)
    rows = []
    for m in dataset.matches:
        row = {"match": m.key}
        for role, team in (("home", m.home_team), ("away", m.away_team)):
            for side, hist in (("for", goals_for[team]), ("against", goals_against[team])):
                if hist:
                    if config.xi is None:
                        rm = recency_mean(hist, config.recency_n)
                        value, short = rm.value, rm.short_history
                    else:
                        ages = [(m.date - d).days for d in dates[team]]
                        value = weighted_recency_mean(HistoryWindow(tuple(hist), tuple(ages)), config.xi)
                        short = len(hist) < config.recency_n
                else:
                    value, short = math.nan, True
                row[f"goals_mean.{role}.{side}"] = value
                row[f"short_history.{role}.{side}"] = int(short)
            past = list(scores[team])
            k = config.streak_k
            row[f"streak.{role}.all"] = streak(past, k) if len(past) >= k else math.nan
            row[f"weighted_streak.{role}.all"] = weighted_streak(past, k) if len(past) >= k else math.nan
            row[f"form.{role}.all"] = form.get(team)
        if m.odds is not None:
            implied = odds_to_probs(m.odds)
            for name, p in zip(("home", "draw", "away"), implied.probs):
                row[f"odds_prob.match.{name}"] = p
            row["overround.match.all"] = implied.overround
        rows.append(row)

        for team, gf, ga in ((m.home_team, m.home_goals, m.away_goals),
                             (m.away_team, m.away_goals, m.home_goals)):
            goals_for[team].append(gf)
            goals_against[team].append(ga)
            dates[team].append(m.date)
            scores[team].append(points(gf, ga))
        form.update(m)
    return rows


def write_feature_csv(rows: Sequence[dict]) -> str:
    columns: list[str] = []
    for row in rows:
        for c in row:
            if c not in columns:
                columns.append(c)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", restval="")
    writer.writeheader()
    writer.writerows(rows)
    return buf.getvalue()
