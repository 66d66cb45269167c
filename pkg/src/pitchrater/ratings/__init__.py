"""Sequential rating engines.

Each engine is a single-writer state machine: feed it matches in canonical
temporal order through :meth:`update`. All engines share a small duck-typed
surface used by the backtester:

``covariate(home, away)``
    scalar pre-match strength difference (home minus away)
``expected_goals(home, away)``
    ``(home, away)`` goal expectations, or ``None`` if the engine has none
``components(team)``
    named rating components, for timelines
``strength(team)``
    a single number for ranking teams
"""

from __future__ import annotations

import csv
import io
from typing import Callable, Iterable, Sequence

from ..data import MatchRecord
from .berrar import (BerrarConfig, BerrarEngine, BerrarRating, BerrarState, berrar_cost,
                     berrar_expect, berrar_tune, berrar_update)
from .elo import (ClubK, EloConfig, EloEngine, EloState, FixedK, GoalBasedK, InternationalK,
                  INTERNATIONAL_IMPORTANCE, bt_prob, bt_to_elo, effective_k, elo_expect,
                  elo_to_bt, elo_update)
from .gap import (GapConfig, GapEngine, GapFit, GapRating, GapState, excluded_matches,
                  gap_expect, gap_fit, gap_season_rollover, gap_update, season_rosters)
from .pi import PiConfig, PiEngine, PiRating, PiState, pi_expected_gd, pi_update, psi, rating_to_gd

ENGINES = {
    "elo": (EloEngine, EloConfig),
    "pi": (PiEngine, PiConfig),
    "berrar": (BerrarEngine, BerrarConfig),
    "gap": (GapEngine, GapConfig),
}


class SeasonTracker:
    """Calls ``engine.start_season`` when a league moves to a new season.

    Rosters come from the fixture list, which is known before a season's
    results are, so using them does not leak outcomes.
    """

    def __init__(self, matches: Sequence[MatchRecord]):
        self.rosters = season_rosters(matches)
        self.current: dict[str, str] = {}

    def observe(self, engine, match: MatchRecord) -> None:
        prev = self.current.get(match.league)
        if prev == match.season:
            return
        self.current[match.league] = match.season
        hook = getattr(engine, "start_season", None)
        if prev is not None and hook is not None:
            hook(self.rosters[(match.league, prev)], self.rosters[(match.league, match.season)])


def replay(engine, matches: Sequence[MatchRecord]):
    """Feed every match to ``engine`` in order and return it."""
    tracker = SeasonTracker(matches)
    update = engine.update
    for m in matches:
        tracker.observe(engine, m)
        update(m)
    return engine


TIMELINE_COLUMNS = ("date", "league", "team", "engine", "component_name", "value")


def rating_timeline(engine, matches: Sequence[MatchRecord]) -> Iterable[tuple]:
    """Yield post-match rating components of both teams after every match."""
    tracker = SeasonTracker(matches)
    for m in matches:
        tracker.observe(engine, m)
        engine.update(m)
        for team in (m.home_team, m.away_team):
            for name, value in engine.components(team).items():
                yield (m.date.isoformat(), m.league, team, engine.name, name, value)


def write_timeline(rows: Iterable[tuple]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TIMELINE_COLUMNS)
    for row in rows:
        writer.writerow(row[:-1] + (repr(float(row[-1])),))
    return buf.getvalue()


def make_engine(name: str, config=None):
    try:
        engine_cls, config_cls = ENGINES[name]
    except KeyError:
        raise ValueError(f"unknown engine {name!r}; choose from {', '.join(ENGINES)}") from None
    return engine_cls(config if config is not None else config_cls())


def engine_factory(name: str, config=None) -> Callable[[], object]:
    make_engine(name, config)
    return lambda: make_engine(name, config)


__all__ = [
    "BerrarConfig", "BerrarEngine", "BerrarRating", "BerrarState", "ClubK", "ENGINES",
    "EloConfig", "EloEngine", "EloState", "FixedK", "GapConfig", "GapEngine", "GapFit",
    "GapRating", "GapState", "GoalBasedK", "INTERNATIONAL_IMPORTANCE", "InternationalK",
    "PiConfig", "PiEngine", "PiRating", "PiState", "SeasonTracker", "berrar_cost",
    "berrar_expect", "berrar_tune", "berrar_update", "bt_prob", "bt_to_elo", "effective_k",
    "elo_expect", "elo_to_bt", "elo_update", "engine_factory", "excluded_matches",
    "gap_expect", "gap_fit", "gap_season_rollover", "gap_update", "make_engine",
    "pi_expected_gd", "pi_update", "psi", "rating_timeline", "rating_to_gd", "replay",
    "season_rosters", "write_timeline",
]
