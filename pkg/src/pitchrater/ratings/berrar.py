"""Berrar ratings: offensive/defensive strengths behind a bounded expected-goals curve."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, NamedTuple, Sequence

from ..data import MatchRecord


class BerrarRating(NamedTuple):
    offence: float = 0.0
    defence: float = 0.0


_ZERO = BerrarRating()


@dataclass(frozen=True)
class BerrarConfig:
    """Expected-goals curve and learning rates.

    ``alpha_*`` caps expected goals, ``beta_*`` is the slope and
    ``gamma_*`` the bias of the logistic. ``omega`` holds the learning rates
    for (home offence, home defence, away offence, away defence). Defaults
    put a fresh pairing at roughly 1.5 home and 1.1 away goals.

    By default a defence rating grows by ``omega * (conceded - expected)``.
    Because a higher defence rating also lowers the opponent's expected
    goals, that feedback is self-reinforcing and ratings drift to the
    logistic's bounds over long replays. ``defence_is_strength=True`` flips
    the sign of the defence updates so conceding fewer than expected raises
    the rating, which keeps replays stable.
    """

    alpha_h: float = 5.0
    alpha_a: float = 5.0
    beta_h: float = 1.0
    beta_a: float = 1.0
    gamma_h: float = -0.85
    gamma_a: float = -1.25
    omega: tuple[float, float, float, float] = (0.1, 0.1, 0.1, 0.1)
    defence_is_strength: bool = False

    def __post_init__(self):
        if not (self.alpha_h > 0 and self.alpha_a > 0):
            raise ValueError("alpha parameters must be positive")
        if self.beta_h < 0 or self.beta_a < 0:
            raise ValueError("beta parameters must be non-negative")
        if len(self.omega) != 4 or any(not w > 0 for w in self.omega):
            raise ValueError(f"omega must be four positive learning rates, got {self.omega}")


@dataclass
class BerrarState:
    ratings: dict[str, BerrarRating] = field(default_factory=dict)

    def copy(self) -> "BerrarState":
        return BerrarState(dict(self.ratings))

    def get(self, team: str) -> BerrarRating:
        return self.ratings.get(team, _ZERO)


def _logistic_goals(alpha: float, beta: float, gamma: float, diff: float) -> float:
    t = beta * diff + gamma
    if t >= 0:
        return alpha / (1.0 + math.exp(-t))
    e = math.exp(t)
    return alpha * e / (1.0 + e)


def berrar_expect(state: BerrarState, home_team: str, away_team: str,
                  config: BerrarConfig = BerrarConfig()) -> tuple[float, float]:
    """Expected goals ``(home, away)``; each lies strictly inside ``(0, alpha)``."""
    h, a = state.get(home_team), state.get(away_team)
    g_home = _logistic_goals(config.alpha_h, config.beta_h, config.gamma_h, h.offence - a.defence)
    g_away = _logistic_goals(config.alpha_a, config.beta_a, config.gamma_a, a.offence - h.defence)
    return g_home, g_away


def _apply(state: BerrarState, match: MatchRecord, config: BerrarConfig) -> tuple[float, float]:
    exp_h, exp_a = berrar_expect(state, match.home_team, match.away_team, config)
    err_h = match.home_goals - exp_h
    err_a = match.away_goals - exp_a
    w_oh, w_dh, w_oa, w_da = config.omega
    if config.defence_is_strength:
        w_dh, w_da = -w_dh, -w_da
    h, a = state.get(match.home_team), state.get(match.away_team)
    state.ratings[match.home_team] = BerrarRating(h.offence + w_oh * err_h, h.defence + w_dh * err_a)
    state.ratings[match.away_team] = BerrarRating(a.offence + w_oa * err_a, a.defence + w_da * err_h)
    return exp_h, exp_a


def berrar_update(state: BerrarState, match: MatchRecord,
                  config: BerrarConfig = BerrarConfig()) -> BerrarState:
    new = state.copy()
    _apply(new, match, config)
    return new


def berrar_cost(matches: Iterable[MatchRecord], config: BerrarConfig) -> float:
    """Summed squared goal error of a replay from zero ratings."""
    state = BerrarState()
    cost = 0.0
    for m in matches:
        exp_h, exp_a = _apply(state, m, config)
        cost += (m.home_goals - exp_h) ** 2 + (m.away_goals - exp_a) ** 2
    return cost


def berrar_tune(matches: Sequence[MatchRecord], config: BerrarConfig,
                omega_grid: Iterable) -> tuple[BerrarConfig, float]:
    """Grid-search the learning rates, holding the curve parameters fixed.

    Each grid entry is either one rate shared by all four components or a
    4-tuple. Ties go to the earliest entry.
    """
    best = None
    for entry in omega_grid:
        omega = tuple(entry) if isinstance(entry, Sequence) else (float(entry),) * 4
        candidate = replace(config, omega=omega)
        cost = berrar_cost(matches, candidate)
        if best is None or cost < best[1]:
            best = (candidate, cost)
    if best is None:
        raise ValueError("omega grid is empty")
    return best


def omega_product(values: Sequence[float]) -> list[tuple[float, ...]]:
    """All 4-tuples over ``values``; a convenience for :func:`berrar_tune`."""
    return list(itertools.product(values, repeat=4))


class BerrarEngine:
    name = "berrar"

    def __init__(self, config: BerrarConfig = BerrarConfig()):
        self.config = config
        self.state = BerrarState()

    def covariate(self, home: str, away: str) -> float:
        g_h, g_a = berrar_expect(self.state, home, away, self.config)
        return g_h - g_a

    def expected_goals(self, home: str, away: str):
        return berrar_expect(self.state, home, away, self.config)

    def update(self, match: MatchRecord) -> None:
        _apply(self.state, match, self.config)

    def components(self, team: str) -> dict[str, float]:
        r = self.state.get(team)
        return {"offence": r.offence, "defence": r.defence}

    def strength(self, team: str) -> float:
        r = self.state.get(team)
        if self.config.defence_is_strength:
            return r.offence + r.defence
        return r.offence - r.defence

    def teams(self):
        return self.state.ratings.keys()
