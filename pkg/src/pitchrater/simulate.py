"""Synthetic leagues with known team strengths.

Goals are independent Poisson draws with means

    mu_home = base_rate * home_factor * (s_home / s_away) ** kappa
    mu_away = base_rate * (s_away / s_home) ** kappa

Randomness comes from :class:`numpy.random.Generator` on the PCG64 bit
generator, so a seed fixes every output bit for a given numpy version.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import date, timedelta
from typing import Sequence

import numpy as np

from .data import Dataset, MatchRecord

BASE_RATE = 1.35
KAPPA = 0.5


@dataclass(frozen=True)
class SimLeague:
    teams: tuple[str, ...]
    strengths: tuple[float, ...]
    home_factor: float = 1.25
    seasons: int = 1
    seed: int = 0
    league: str = "SIM"
    start: date = date(2001, 8, 4)
    base_rate: float = BASE_RATE
    kappa: float = KAPPA

    def __post_init__(self):
        if len(self.teams) < 2:
            raise ValueError("a league needs at least two teams")
        if len(self.teams) != len(self.strengths):
            raise ValueError("one strength per team is required")
        if len(set(self.teams)) != len(self.teams):
            raise ValueError("team names must be unique")
        if any(not s > 0 for s in self.strengths):
            raise ValueError("strengths must be positive")
        if self.home_factor < 1:
            raise ValueError(f"home_factor must be >= 1, got {self.home_factor}")
        if self.seasons < 1:
            raise ValueError("need at least one season")

    @classmethod
    def log_spaced(cls, n_teams: int = 20, low: float = 0.5, high: float = 2.0, **kwargs) -> "SimLeague":
        teams = tuple(f"team{i + 1:02d}" for i in range(n_teams))
        strengths = tuple(float(s) for s in np.geomspace(low, high, n_teams))
        return cls(teams, strengths, **kwargs)

    def truth(self) -> dict[str, float]:
        return dict(zip(self.teams, self.strengths))


def goal_means(strength_home: float, strength_away: float, home_factor: float = 1.0,
               base_rate: float = BASE_RATE, kappa: float = KAPPA) -> tuple[float, float]:
    ratio = strength_home / strength_away
    return base_rate * home_factor * ratio ** kappa, base_rate * ratio ** -kappa


def sample_match(strength_home: float, strength_away: float, home_factor: float,
                 rng: np.random.Generator, base_rate: float = BASE_RATE,
                 kappa: float = KAPPA) -> tuple[int, int]:
    if not (strength_home > 0 and strength_away > 0):
        raise ValueError("strengths must be positive")
    if home_factor < 1:
        raise ValueError(f"home_factor must be >= 1, got {home_factor}")
    mu_h, mu_a = goal_means(strength_home, strength_away, home_factor, base_rate, kappa)
    return int(rng.poisson(mu_h)), int(rng.poisson(mu_a))


def round_robin(n: int) -> list[list[tuple[int, int]]]:
    """Double round-robin rounds of (home, away) index pairs (circle method).

    Every ordered pair appears exactly once; the second half of the season
    mirrors the first with venues swapped.
    """
    idx = list(range(n)) + ([None] if n % 2 else [])
    m = len(idx)
    first_half = []
    for r in range(m - 1):
        pairs = []
        for i in range(m // 2):
            a, b = idx[i], idx[m - 1 - i]
            if a is None or b is None:
                continue
            # alternate venues so no team is always at home
            pairs.append((a, b) if (r + i) % 2 == 0 else (b, a))
        first_half.append(pairs)
        idx = [idx[0], idx[-1], *idx[1:-1]]
    return first_half + [[(b, a) for a, b in rnd] for rnd in first_half]


def gen_league(sim: SimLeague) -> tuple[Dataset, dict[str, float]]:
    """Simulate every season of ``sim`` and return the dataset and true strengths.

    Rounds are a week apart and seasons start on the same weekday one year
    apart (or later, for leagues too long to fit in a year).
    """
    rng = np.random.Generator(np.random.PCG64(sim.seed))
    rounds = round_robin(len(sim.teams))
    s = np.asarray(sim.strengths, dtype=float)
    weeks = max(52, len(rounds) + 8)
    records: list[MatchRecord] = []
    for season in range(sim.seasons):
        start = sim.start + timedelta(weeks=weeks * season)
        label = f"{start.year}-{(start.year + 1) % 100:02d}"
        pairs = np.array([p for rnd in rounds for p in rnd])
        mu_h, mu_a = goal_means(s[pairs[:, 0]], s[pairs[:, 1]], sim.home_factor,
                                sim.base_rate, sim.kappa)
        goals = rng.poisson(np.column_stack([mu_h, mu_a]))
        k = 0
        for r, rnd in enumerate(rounds):
            day = start + timedelta(weeks=r)
            for h, a in rnd:
                records.append(MatchRecord.from_score(
                    label, sim.league, day, sim.teams[h], sim.teams[a],
                    int(goals[k, 0]), int(goals[k, 1]), source_index=len(records)))
                k += 1
    return Dataset(tuple(records), ordering_flag=True), sim.truth()


def truth_csv(truth: dict[str, float]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["team", "true_strength"])
    for team, strength in truth.items():
        w.writerow([team, repr(strength)])
    return buf.getvalue()


def concat(datasets: Sequence[Dataset]) -> Dataset:
    """Join datasets, renumbering ``source_index`` in input order."""
    out = []
    for ds in datasets:
        for m in ds.matches:
            out.append(MatchRecord(**{**{f: getattr(m, f) for f in MatchRecord.__dataclass_fields__},
                                      "source_index": len(out)}))
    return Dataset(tuple(out))
