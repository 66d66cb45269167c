"""Elo ratings with configurable K-factor rules and home advantage.

The expected score of the home side is

    p_home = 1 / (1 + base ** (-(r_home - r_away + H) / scale))

and after a match both teams move by ``K * (actual - expected)`` with the
same effective K, so rating points are conserved.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from ..data import MatchRecord

# Anchor values of the World Football Elo importance schedule. Intermediate
# competition tiers are not published with the method and are left to users.
INTERNATIONAL_IMPORTANCE = {
    "world_cup_finals": 60.0,
    "friendly": 20.0,
}


@dataclass(frozen=True)
class FixedK:
    k: float = 20.0


@dataclass(frozen=True)
class GoalBasedK:
    """``K = k0 * (1 + margin) ** lam``."""

    k0: float = 10.0
    lam: float = 1.0


@dataclass(frozen=True)
class InternationalK:
    """K looked up by match importance, then raised for wide winning margins.

    ``importance_of`` names the :class:`MatchRecord` attribute that holds
    the importance key when ratings are replayed; by default the league
    label doubles as the competition name.
    """

    table: Mapping[str, float] = field(default_factory=lambda: dict(INTERNATIONAL_IMPORTANCE))
    importance_of: str = "league"


@dataclass(frozen=True)
class ClubK:
    """``K = k_base * G(margin)`` with the footballdatabase.com multiplier."""

    k_base: float = 20.0


KMode = FixedK | GoalBasedK | InternationalK | ClubK


@dataclass(frozen=True)
class EloConfig:
    initial_rating: float = 1500.0
    scale: float = 400.0
    base: float = 10.0
    k_mode: KMode = field(default_factory=FixedK)
    home_advantage: float = 0.0

    def __post_init__(self):
        if not self.scale > 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        if not self.base > 1:
            raise ValueError(f"base must exceed 1, got {self.base}")
        if self.home_advantage < 0:
            raise ValueError(f"home_advantage must be >= 0, got {self.home_advantage}")
        k = self.k_mode
        params = {
            FixedK: lambda: [k.k],
            GoalBasedK: lambda: [k.k0, k.lam],
            ClubK: lambda: [k.k_base],
            InternationalK: lambda: list(k.table.values()),
        }[type(k)]()
        if any(not p > 0 for p in params):
            raise ValueError(f"K parameters must be positive, got {k}")


@dataclass
class EloState:
    ratings: dict[str, float] = field(default_factory=dict)

    def copy(self) -> "EloState":
        return EloState(dict(self.ratings))


def elo_expect(r_home: float, r_away: float, config: EloConfig = EloConfig()) -> tuple[float, float]:
    """Win expectancies ``(p_home, p_away)``; they sum to one."""
    p_home = 1.0 / (1.0 + config.base ** (-(r_home - r_away + config.home_advantage) / config.scale))
    return p_home, 1.0 - p_home


def international_bump(margin: int) -> float:
    if margin <= 1:
        return 0.0
    if margin == 2:
        return 0.5
    if margin == 3:
        return 0.75
    return 0.75 + (margin - 3) / 8


def club_multiplier(margin: int) -> float:
    if margin == 0:
        return 1.0
    if margin <= 2:
        return 1.5
    return (11 + margin) / 8


def effective_k(config: EloConfig, goal_margin: int = 0, importance: str | None = None) -> float:
    """K for a match decided by ``goal_margin`` goals (absolute value)."""
    if goal_margin < 0:
        raise ValueError(f"goal margin must be non-negative, got {goal_margin}")
    mode = config.k_mode
    if isinstance(mode, FixedK):
        return mode.k
    if isinstance(mode, GoalBasedK):
        return mode.k0 * (1 + goal_margin) ** mode.lam
    if isinstance(mode, ClubK):
        return mode.k_base * club_multiplier(goal_margin)
    if importance is None:
        raise ValueError("international K schedule needs a match importance")
    try:
        base_k = mode.table[importance]
    except KeyError:
        raise ValueError(
            f"unknown importance {importance!r}; known: {', '.join(sorted(mode.table))}") from None
    return base_k * (1 + international_bump(goal_margin))


def _apply(ratings: dict[str, float], match: MatchRecord, config: EloConfig) -> float:
    init = config.initial_rating
    h, a = match.home_team, match.away_team
    rh = ratings.get(h, init)
    ra = ratings.get(a, init)
    p_home = 1.0 / (1.0 + config.base ** (-(rh - ra + config.home_advantage) / config.scale))
    actual = 1.0 if match.home_goals > match.away_goals else (
        0.5 if match.home_goals == match.away_goals else 0.0)
    importance = None
    if isinstance(config.k_mode, InternationalK):
        importance = getattr(match, config.k_mode.importance_of)
    delta = effective_k(config, match.margin, importance) * (actual - p_home)
    ratings[h] = rh + delta
    ratings[a] = ra - delta
    return p_home


def elo_update(state: EloState, match: MatchRecord, config: EloConfig = EloConfig()) -> EloState:
    """Return a new state with both teams' ratings moved by the match result."""
    new = state.copy()
    _apply(new.ratings, match, config)
    return new


def elo_to_bt(r: float, scale: float = 400.0, base: float = 10.0) -> float:
    """Bradley-Terry strength of an Elo rating."""
    return base ** (r / scale)


def bt_to_elo(s: float, scale: float = 400.0, base: float = 10.0) -> float:
    if not s > 0:
        raise ValueError(f"Bradley-Terry strength must be positive, got {s}")
    return scale * math.log(s, base) if base != 10.0 else scale * math.log10(s)


def bt_prob(s_i: float, s_j: float) -> float:
    """P(i beats j) under Bradley-Terry."""
    if not (s_i > 0 and s_j > 0):
        raise ValueError(f"Bradley-Terry strengths must be positive, got {s_i}, {s_j}")
    return s_i / (s_i + s_j)


class EloEngine:
    name = "elo"

    def __init__(self, config: EloConfig = EloConfig()):
        self.config = config
        self.state = EloState()

    def rating(self, team: str) -> float:
        return self.state.ratings.get(team, self.config.initial_rating)

    def probabilities(self, home: str, away: str) -> tuple[float, float]:
        return elo_expect(self.rating(home), self.rating(away), self.config)

    def covariate(self, home: str, away: str) -> float:
        return self.rating(home) - self.rating(away)

    def expected_goals(self, home: str, away: str):
        return None

    def update(self, match: MatchRecord) -> None:
        _apply(self.state.ratings, match, self.config)

    def components(self, team: str) -> dict[str, float]:
        return {"rating": self.rating(team)}

    def strength(self, team: str) -> float:
        return self.rating(team)

    def teams(self):
        return self.state.ratings.keys()
