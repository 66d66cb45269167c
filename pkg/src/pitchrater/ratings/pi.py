"""pi-ratings: separate home and away ratings on a goal-difference scale.

A rating R maps to an expected goal difference against an average
opponent of ``sign(R) * (b ** (|R| / c) - 1)``. After each match the
error between actual and expected goal difference is damped by
``psi(e) = c * log10(1 + e)`` before it moves the ratings.

Update convention (signed error ``s = actual - expected``):

* home team, home rating: ``+ lam * psi(|s|) * sign(s)``
* home team, away rating: ``gamma`` times that change
* away team, away rating: ``- lam * psi(|s|) * sign(s)``
* away team, home rating: ``gamma`` times that change
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

from ..data import MatchRecord


class PiRating(NamedTuple):
    home: float = 0.0
    away: float = 0.0

    @property
    def overall(self) -> float:
        return (self.home + self.away) / 2


@dataclass(frozen=True)
class PiConfig:
    lam: float = 0.035
    gamma: float = 0.7
    b: float = 10.0
    c: float = 3.0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if not 0 <= self.gamma <= 1:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not (self.b > 1 and self.c > 0):
            raise ValueError("b must exceed 1 and c must be positive")


@dataclass
class PiState:
    ratings: dict[str, PiRating] = field(default_factory=dict)

    def copy(self) -> "PiState":
        return PiState(dict(self.ratings))

    def get(self, team: str) -> PiRating:
        return self.ratings.get(team, _ZERO)

    def overall(self, team: str) -> float:
        return self.get(team).overall


_ZERO = PiRating()


def psi(error: float, c: float = 3.0) -> float:
    return c * math.log10(1.0 + error)


def rating_to_gd(r: float, config: PiConfig = PiConfig()) -> float:
    """Expected goal difference against an average opponent."""
    g = config.b ** (abs(r) / config.c) - 1.0
    return g if r >= 0 else -g


def pi_expected_gd(state: PiState, home_team: str, away_team: str,
                   config: PiConfig = PiConfig()) -> float:
    return (rating_to_gd(state.get(home_team).home, config)
            - rating_to_gd(state.get(away_team).away, config))


def _apply(state: PiState, match: MatchRecord, config: PiConfig) -> float:
    h, a = match.home_team, match.away_team
    rh, ra = state.get(h), state.get(a)
    expected = rating_to_gd(rh.home, config) - rating_to_gd(ra.away, config)
    err = (match.home_goals - match.away_goals) - expected
    if err == 0:
        return expected
    step = config.lam * psi(abs(err), config.c)
    if err < 0:
        step = -step
    state.ratings[h] = PiRating(rh.home + step, rh.away + config.gamma * step)
    state.ratings[a] = PiRating(ra.home - config.gamma * step, ra.away - step)
    return expected


def pi_update(state: PiState, match: MatchRecord, config: PiConfig = PiConfig()) -> PiState:
    new = state.copy()
    _apply(new, match, config)
    return new


class PiEngine:
    name = "pi"

    def __init__(self, config: PiConfig = PiConfig()):
        self.config = config
        self.state = PiState()

    def covariate(self, home: str, away: str) -> float:
        return pi_expected_gd(self.state, home, away, self.config)

    def expected_goals(self, home: str, away: str):
        return None

    def update(self, match: MatchRecord) -> None:
        _apply(self.state, match, self.config)

    def components(self, team: str) -> dict[str, float]:
        r = self.state.get(team)
        return {"home": r.home, "away": r.away, "overall": r.overall}

    def strength(self, team: str) -> float:
        return self.state.overall(team)

    def teams(self):
        return self.state.ratings.keys()
