"""Scoring rules for ordered three-way forecasts.

Forecasts are probability vectors in (home win, draw, away win) order and
outcomes are :class:`~pitchrater.data.Result` members, class indices or
one-hot vectors. Lower is better for every score except accuracy.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from ..data import Result

IGN_CLAMP = 1e-15
SUM_TOL = 1e-9


def outcome_vector(outcome, r: int = 3) -> np.ndarray:
    """One-hot vector for a result, class index or existing one-hot vector."""
    if isinstance(outcome, Result):
        idx = outcome.index
    elif np.ndim(outcome) == 0:
        idx = int(outcome)
    else:
        vec = np.asarray(outcome, dtype=float)
        if vec.shape != (r,) or sorted(vec) != [0.0] * (r - 1) + [1.0]:
            raise ValueError(f"not a one-hot outcome vector: {outcome}")
        return vec
    if not 0 <= idx < r:
        raise ValueError(f"outcome index {idx} out of range for {r} classes")
    vec = np.zeros(r)
    vec[idx] = 1.0
    return vec


def _forecast(p) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or np.any(p < 0) or np.any(p > 1) or abs(p.sum() - 1.0) > SUM_TOL:
        raise ValueError(f"forecast is not a probability distribution: {p}")
    return p


def _pairs(forecasts, outcomes):
    if len(forecasts) != len(outcomes):
        raise ValueError(f"{len(forecasts)} forecasts but {len(outcomes)} outcomes")
    if len(forecasts) == 0:
        raise ValueError("cannot score an empty forecast set")
    return zip(forecasts, outcomes)


def accuracy(predicted: Sequence, actual: Sequence) -> float:
    """Fraction of predicted classes equal to the actual class."""
    if len(predicted) != len(actual):
        raise ValueError(f"{len(predicted)} predictions but {len(actual)} outcomes")
    if not predicted:
        raise ValueError("cannot score an empty prediction set")
    return sum(p == a for p, a in zip(predicted, actual)) / len(predicted)


def brier_score(forecast, outcome) -> float:
    """Summed squared error over all classes for one match (range [0, 2])."""
    p = _forecast(forecast)
    return float(np.sum((p - outcome_vector(outcome, len(p))) ** 2))


def brier(forecasts, outcomes) -> float:
    return float(np.mean([brier_score(p, o) for p, o in _pairs(forecasts, outcomes)]))


def rps(forecast, outcome) -> float:
    """Ranked probability score of one forecast; works for any number of ordered classes."""
    p = _forecast(forecast)
    r = len(p)
    if r < 2:
        raise ValueError("ranked probability score needs at least two classes")
    a = outcome_vector(outcome, r)
    cum = np.cumsum(p - a)[:-1]
    return float(np.dot(cum, cum) / (r - 1))


def rps_avg(forecasts, outcomes) -> float:
    return float(np.mean([rps(p, o) for p, o in _pairs(forecasts, outcomes)]))


def ign_score(forecast, outcome, clamp: float = IGN_CLAMP) -> tuple[float, bool]:
    """``-log2`` of the probability given to the observed class.

    Probabilities below ``clamp`` are raised to it; the flag reports
    whether that happened.
    """
    p = _forecast(forecast)
    p_obs = float(p[int(np.argmax(outcome_vector(outcome, len(p))))])
    clamped = p_obs < clamp
    return -math.log2(max(p_obs, clamp)), clamped


def ign(forecasts, outcomes, clamp: float = IGN_CLAMP) -> float:
    return float(np.mean([ign_score(p, o, clamp)[0] for p, o in _pairs(forecasts, outcomes)]))


def rmse(predicted: Sequence[float], actual: Sequence[float]) -> float:
    pred = np.asarray(predicted, dtype=float)
    act = np.asarray(actual, dtype=float)
    if pred.shape != act.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {act.shape}")
    if pred.size == 0:
        raise ValueError("cannot score an empty prediction set")
    return float(np.sqrt(np.mean((pred - act) ** 2)))


def expected_score(rule, forecast, truth) -> float:
    """Expected value of ``rule(forecast, outcome)`` when outcomes follow ``truth``."""
    return float(sum(q * rule(forecast, i) for i, q in enumerate(truth) if q > 0))
