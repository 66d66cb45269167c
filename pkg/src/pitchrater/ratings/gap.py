"""Generalised Attacking Performance (GAP) ratings.

Every team carries four non-negative ratings: home attack, home defence,
away attack and away defence, expressed in units of the modelled match
statistic (goals, shots, corners, ...). The expected statistic of a side is
the mean of its attack rating and the opponent's matching defence rating.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

from ..data import MatchRecord


class GapRating(NamedTuple):
    home_attack: float = 0.0
    home_defence: float = 0.0
    away_attack: float = 0.0
    away_defence: float = 0.0

    @property
    def net(self) -> float:
        """Mean attack minus mean defence; higher is stronger."""
        return (self.home_attack + self.away_attack - self.home_defence - self.away_defence) / 2


_ZERO = GapRating()


@dataclass(frozen=True)
class GapConfig:
    lam: float = 0.1
    phi1: float = 0.5
    phi2: float = 0.5
    stat_name: str = "goals"
    rollover: bool = True

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        for name in ("phi1", "phi2"):
            v = getattr(self, name)
            if not 0 <= v <= 1:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")


@dataclass
class GapState:
    ratings: dict[str, GapRating] = field(default_factory=dict)

    def copy(self) -> "GapState":
        return GapState(dict(self.ratings))

    def get(self, team: str) -> GapRating:
        return self.ratings.get(team, _ZERO)


def gap_expect(state: GapState, home_team: str, away_team: str) -> tuple[float, float]:
    """Expected statistic ``(home, away)`` for a fixture."""
    h, a = state.get(home_team), state.get(away_team)
    return (h.home_attack + a.away_defence) / 2, (a.away_attack + h.home_defence) / 2


def _apply(state: GapState, home_team: str, away_team: str, s_home: float, s_away: float,
           lam: float, phi1: float, phi2: float) -> tuple[float, float]:
    h, a = state.get(home_team), state.get(away_team)
    exp_h = (h.home_attack + a.away_defence) / 2
    exp_a = (a.away_attack + h.home_defence) / 2
    err_h = s_home - exp_h
    err_a = s_away - exp_a
    state.ratings[home_team] = GapRating(
        home_attack=max(h.home_attack + lam * phi1 * err_h, 0.0),
        home_defence=max(h.home_defence + lam * phi1 * err_a, 0.0),
        away_attack=max(h.away_attack + lam * (1 - phi1) * err_h, 0.0),
        away_defence=max(h.away_defence + lam * (1 - phi1) * err_a, 0.0),
    )
    state.ratings[away_team] = GapRating(
        home_attack=max(a.home_attack + lam * (1 - phi2) * err_a, 0.0),
        home_defence=max(a.home_defence + lam * (1 - phi2) * err_h, 0.0),
        away_attack=max(a.away_attack + lam * phi2 * err_a, 0.0),
        away_defence=max(a.away_defence + lam * phi2 * err_h, 0.0),
    )
    return exp_h, exp_a


def gap_update(state: GapState, home_team: str, away_team: str, s_home: float, s_away: float,
               config: GapConfig = GapConfig()) -> GapState:
    """Apply one match's statistic pair; all eight components clamp at zero."""
    if s_home < 0 or s_away < 0:
        raise ValueError(f"match statistics must be non-negative, got {s_home}, {s_away}")
    new = state.copy()
    _apply(new, home_team, away_team, s_home, s_away, config.lam, config.phi1, config.phi2)
    return new


def gap_season_rollover(state: GapState, promoted_teams: Iterable[str],
                        relegated_teams: Iterable[str]) -> GapState:
    """Seed promoted teams with the mean ratings of the relegated teams.

    Relegated teams receive the mean of the promoted teams' previous
    ratings in exchange, so a team returning later resumes from a sensible
    level. Continuing teams are untouched.
    """
    promoted, relegated = list(promoted_teams), list(relegated_teams)
    if not promoted:
        return state.copy()
    if not relegated:
        raise ValueError("promoted teams need at least one relegated team to inherit ratings from")
    new = state.copy()
    donor = _mean_rating([state.get(t) for t in relegated])
    returning = _mean_rating([state.get(t) for t in promoted])
    for t in promoted:
        new.ratings[t] = donor
    for t in relegated:
        new.ratings[t] = returning
    return new


def _mean_rating(ratings: Sequence[GapRating]) -> GapRating:
    n = len(ratings)
    return GapRating(*(sum(col) / n for col in zip(*ratings)))


def season_rosters(matches: Sequence[MatchRecord]) -> dict[tuple[str, str], set[str]]:
    """Teams appearing in each ``(league, season)``."""
    rosters: dict[tuple[str, str], set[str]] = defaultdict(set)
    for m in matches:
        rosters[(m.league, m.season)].update((m.home_team, m.away_team))
    return rosters


def excluded_matches(matches: Sequence[MatchRecord], first: int = 6, last: int = 6) -> list[bool]:
    """Flag matches among the home team's first or last games of its season.

    Counting uses every match the home team plays that season, home or away.
    """
    per_team: dict[tuple[str, str, str], list[int]] = defaultdict(list)
    for i, m in enumerate(matches):
        per_team[(m.league, m.season, m.home_team)].append(i)
        per_team[(m.league, m.season, m.away_team)].append(i)
    excluded = [False] * len(matches)
    for i, m in enumerate(matches):
        games = per_team[(m.league, m.season, m.home_team)]
        pos = games.index(i)
        if pos < first or pos >= len(games) - last:
            excluded[i] = True
    return excluded


class GapEngine:
    name = "gap"

    def __init__(self, config: GapConfig = GapConfig()):
        self.config = config
        self.state = GapState()

    def covariate(self, home: str, away: str) -> float:
        s_h, s_a = gap_expect(self.state, home, away)
        return s_h - s_a

    def expected_goals(self, home: str, away: str):
        if self.config.stat_name != "goals":
            return None
        return gap_expect(self.state, home, away)

    def update(self, match: MatchRecord) -> None:
        s_h, s_a = match.stat(self.config.stat_name)
        if s_h < 0 or s_a < 0:
            raise ValueError(f"negative statistic in match {match.key}")
        c = self.config
        _apply(self.state, match.home_team, match.away_team, s_h, s_a, c.lam, c.phi1, c.phi2)

    def start_season(self, previous: set[str], current: set[str]) -> None:
        if not self.config.rollover or not previous:
            return
        promoted = sorted(current - previous)
        relegated = sorted(previous - current)
        if promoted and relegated:
            self.state = gap_season_rollover(self.state, promoted, relegated)

    def components(self, team: str) -> dict[str, float]:
        return self.state.get(team)._asdict()

    def strength(self, team: str) -> float:
        return self.state.get(team).net

    def teams(self):
        return self.state.ratings.keys()


def gap_replay_cost(matches: Sequence[MatchRecord], lam: float, phi1: float, phi2: float,
                    stats: Sequence[tuple[float, float]], excluded: Sequence[bool],
                    rollover: bool = True) -> float:
    """Replay from zero ratings and sum absolute errors over included matches."""
    state = GapState()
    cost = 0.0
    rosters = season_rosters(matches) if rollover else {}
    current: dict[str, str] = {}
    for m, (s_h, s_a), skip in zip(matches, stats, excluded):
        if rollover and current.get(m.league) != m.season:
            prev = current.get(m.league)
            if prev is not None:
                before, after = rosters[(m.league, prev)], rosters[(m.league, m.season)]
                promoted, relegated = sorted(after - before), sorted(before - after)
                if promoted and relegated:
                    state = gap_season_rollover(state, promoted, relegated)
            current[m.league] = m.season
        exp_h, exp_a = _apply(state, m.home_team, m.away_team, s_h, s_a, lam, phi1, phi2)
        if not skip:
            cost += abs(s_h - exp_h) + abs(s_a - exp_a)
    return cost


@dataclass(frozen=True)
class GapFit:
    lam: float
    phi1: float
    phi2: float
    cost: float

    def config(self, stat_name: str = "goals") -> GapConfig:
        return GapConfig(self.lam, self.phi1, self.phi2, stat_name)


def _expand_grid(grid) -> list[tuple[float, float, float]]:
    if isinstance(grid, Mapping):
        return list(itertools.product(grid["lam"], grid["phi1"], grid["phi2"]))
    return [tuple(map(float, p)) for p in grid]


def gap_fit(matches: Sequence[MatchRecord], grid, stat_name: str = "goals",
            exclude_first: int = 6, exclude_last: int = 6, rollover: bool = True) -> GapFit:
    """Exhaustive grid search over ``(lam, phi1, phi2)``.

    ``grid`` is a sequence of triples or a mapping with ``lam``, ``phi1``
    and ``phi2`` value lists. Every candidate replays ``matches`` (which
    must be in canonical order) from zero ratings; ratings update on every
    match but only matches outside each home team's first and last games
    of the season contribute to the cost. Ties go to the lexicographically
    smallest triple.
    """
    candidates = _expand_grid(grid)
    if not candidates:
        raise ValueError("parameter grid is empty")
    matches = list(matches)
    stats = []
    for m in matches:
        try:
            stats.append(m.stat(stat_name))
        except KeyError as exc:
            raise ValueError(exc.args[0]) from None
    excluded = excluded_matches(matches, exclude_first, exclude_last)
    best = None
    for lam, phi1, phi2 in candidates:
        cost = gap_replay_cost(matches, lam, phi1, phi2, stats, excluded, rollover)
        key = (cost, lam, phi1, phi2)
        if best is None or key < best:
            best = key
    cost, lam, phi1, phi2 = best
    return GapFit(lam, phi1, phi2, cost)
