"""Win/draw/loss probability models and baselines."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np
from scipy import optimize, special, stats

from .data import OddsTriple, Result
from .features import odds_to_probs

PROB_TOL = 1e-9


class ProbTriple(NamedTuple):
    """Forecast over (home win, draw, away win)."""

    p_home: float
    p_draw: float
    p_away: float

    @classmethod
    def checked(cls, p_home: float, p_draw: float, p_away: float) -> "ProbTriple":
        t = cls(float(p_home), float(p_draw), float(p_away))
        if any(not (0.0 <= p <= 1.0) for p in t) or abs(sum(t) - 1.0) > PROB_TOL:
            raise ValueError(f"not a probability distribution: {t}")
        return t

    @property
    def predicted(self) -> Result:
        """Most probable result; ties go to the home side, then the draw."""
        return Result.from_index(int(np.argmax(self)))


def baseline_uniform() -> ProbTriple:
    return ProbTriple(1 / 3, 1 / 3, 1 / 3)


def baseline_majority(train: Iterable[Result]) -> ProbTriple:
    """Empirical class frequencies of the training outcomes.

    Its :attr:`ProbTriple.predicted` class is the majority class, with ties
    resolved toward the home win.
    """
    counts = [0, 0, 0]
    for r in train:
        counts[Result(r).index] += 1
    n = sum(counts)
    if n == 0:
        raise ValueError("majority baseline needs at least one training outcome")
    return ProbTriple(*(c / n for c in counts))


def baseline_odds(odds: OddsTriple) -> ProbTriple:
    return ProbTriple(*odds_to_probs(odds).probs)


@dataclass(frozen=True)
class OrderedLogitModel:
    """Cumulative logit over the ordered outcomes away < draw < home.

    ``P(away) = sigmoid(cut1 - beta * x)`` and
    ``P(away or draw) = sigmoid(cut2 - beta * x)``.
    """

    beta: float
    cut1: float
    cut2: float

    def __post_init__(self):
        if not self.cut1 < self.cut2:
            raise ValueError(f"cutpoints must be strictly increasing, got {self.cut1}, {self.cut2}")

    def predict(self, x: float) -> ProbTriple:
        return ologit_predict(self, x)


def ologit_predict(model: OrderedLogitModel, x: float) -> ProbTriple:
    if not math.isfinite(x):
        raise ValueError(f"covariate must be finite, got {x}")
    f1 = special.expit(model.cut1 - model.beta * x)
    f2 = special.expit(model.cut2 - model.beta * x)
    return ProbTriple(float(1.0 - f2), float(f2 - f1), float(f1))


def _outcome_codes(outcomes: Iterable) -> np.ndarray:
    """0 = away win, 1 = draw, 2 = home win."""
    return np.array([int(Result(o)) + 1 for o in outcomes], dtype=int)


def ologit_loglik(params: Sequence[float], x: np.ndarray, y: np.ndarray) -> float:
    """Log-likelihood of ``(beta, cut1, cut2)``; ``y`` uses codes 0/1/2 (away/draw/home)."""
    beta, c1, c2 = params
    z1 = c1 - beta * x
    z2 = c2 - beta * x
    ll = np.empty_like(x, dtype=float)
    a, d, h = y == 0, y == 1, y == 2
    ll[a] = special.log_expit(z1[a])
    ll[h] = special.log_expit(-z2[h])
    # log(F(z2) - F(z1)) = log F(z2) + log(1 - exp(log F(z1) - log F(z2)))
    lf1, lf2 = special.log_expit(z1[d]), special.log_expit(z2[d])
    ll[d] = lf2 + np.log1p(-np.exp(lf1 - lf2))
    return float(ll.sum())


def ologit_grad(params: Sequence[float], x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Analytic gradient of :func:`ologit_loglik` with respect to ``(beta, cut1, cut2)``."""
    beta, c1, c2 = params
    z1 = c1 - beta * x
    z2 = c2 - beta * x
    f1, f2 = special.expit(z1), special.expit(z2)
    g1 = np.zeros_like(x, dtype=float)
    g2 = np.zeros_like(x, dtype=float)
    a, d, h = y == 0, y == 1, y == 2
    g1[a] = 1.0 - f1[a]
    g2[h] = -f2[h]
    # F2 - F1 computed stably as sigma(z2)*sigma(-z1)*(1 - exp(z1 - z2))
    mid = f2[d] * special.expit(-z1[d]) * -np.expm1(z1[d] - z2[d])
    g1[d] = -f1[d] * (1.0 - f1[d]) / mid
    g2[d] = f2[d] * (1.0 - f2[d]) / mid
    return np.array([-(x * (g1 + g2)).sum(), g1.sum(), g2.sum()])


class DegenerateFitError(ValueError):
    pass


_CUT_BOUND = 40.0
_LOG_GAP_BOUNDS = (-25.0, 5.0)


def ologit_fit(samples: Iterable[tuple[float, object]]) -> OrderedLogitModel:
    """Maximum-likelihood ordered logit on ``(covariate, outcome)`` pairs.

    Outcomes may be :class:`Result` members or their integer values. A
    constant covariate leaves the slope unidentified; it is fixed to zero
    and the cutpoints reproduce the empirical outcome frequencies.
    """
    samples = list(samples)
    x = np.array([float(s[0]) for s in samples], dtype=float)
    y = _outcome_codes(s[1] for s in samples)
    if not np.all(np.isfinite(x)):
        raise ValueError("covariates must be finite")
    if len(np.unique(y)) < 2:
        raise DegenerateFitError("all samples share one outcome; ordered logit is not identifiable")

    if np.ptp(x) == 0:
        return _intercept_only(y)

    # Fit on a standardised covariate, then map back.
    mean, sd = x.mean(), x.std()
    xs = (x - mean) / sd

    def to_natural(u):
        b, c1, log_gap = u
        return np.array([b, c1, c1 + math.exp(log_gap)])

    def neg(u):
        p = to_natural(u)
        return -ologit_loglik(p, xs, y), p

    def fun(u):
        val, p = neg(u)
        g = ologit_grad(p, xs, y)
        gap = p[2] - p[1]
        return val, -np.array([g[0], g[1] + g[2], g[2] * gap])

    start = _intercept_only(y, clip=True)
    u0 = np.array([0.0, start.cut1, math.log(start.cut2 - start.cut1)])
    bounds = [(None, None), (-_CUT_BOUND, _CUT_BOUND), _LOG_GAP_BOUNDS]
    res = optimize.minimize(fun, u0, jac=True, method="L-BFGS-B", bounds=bounds,
                            options={"ftol": 1e-15, "gtol": 1e-10, "maxiter": 2000})
    b, c1, c2 = to_natural(res.x)
    return OrderedLogitModel(float(b / sd), float(c1 + b * mean / sd), float(c2 + b * mean / sd))


def _intercept_only(y: np.ndarray, clip: bool = False) -> OrderedLogitModel:
    n = len(y)
    cum1 = np.count_nonzero(y == 0) / n
    cum2 = np.count_nonzero(y <= 1) / n
    if clip or cum1 in (0.0, 1.0) or cum2 in (0.0, 1.0) or cum1 == cum2:
        eps = 1e-6
        cum1 = min(max(cum1, eps), 1 - 2 * eps)
        cum2 = min(max(cum2, cum1 + eps), 1 - eps)
    return OrderedLogitModel(0.0, float(special.logit(cum1)), float(special.logit(cum2)))


def poisson_outcome(mu_home: float, mu_away: float, g_max: int = 15) -> ProbTriple:
    """Result probabilities from independent Poisson scores.

    The score grid is truncated at ``g_max`` goals a side and renormalised.
    Means above ``8 * g_max / 15`` would lose noticeable tail mass and are
    rejected.
    """
    if mu_home < 0 or mu_away < 0:
        raise ValueError(f"goal means must be non-negative, got {mu_home}, {mu_away}")
    if g_max < 1:
        raise ValueError(f"g_max must be at least 1, got {g_max}")
    limit = 8.0 * g_max / 15.0
    if max(mu_home, mu_away) > limit:
        raise ValueError(f"goal mean above {limit:g} is too large for g_max={g_max}; "
                         f"increase g_max")
    goals = np.arange(g_max + 1)
    grid = np.outer(stats.poisson.pmf(goals, mu_home), stats.poisson.pmf(goals, mu_away))
    total = grid.sum()
    p_home = np.tril(grid, -1).sum() / total
    p_away = np.tril(grid.T, -1).sum() / total
    p_draw = np.trace(grid) / total
    return ProbTriple(float(p_home), float(p_draw), float(p_away))


class PreMatch(NamedTuple):
    """What a forecaster may see before kick-off, plus the outcome for fitting."""

    covariate: float | None
    expected_goals: tuple[float, float] | None
    odds: OddsTriple | None
    outcome: Result


class UniformForecaster:
    name = "uniform"
    needs = ()

    def fit(self, history: Sequence[PreMatch]) -> None:
        pass

    def predict(self, sample: PreMatch) -> ProbTriple:
        return baseline_uniform()


class MajorityForecaster:
    name = "majority"
    needs = ()

    def __init__(self):
        self.probs = None

    def fit(self, history: Sequence[PreMatch]) -> None:
        self.probs = baseline_majority(s.outcome for s in history)

    def predict(self, sample: PreMatch) -> ProbTriple:
        return self.probs


class OddsForecaster:
    name = "odds"
    needs = ("odds",)

    def fit(self, history: Sequence[PreMatch]) -> None:
        pass

    def predict(self, sample: PreMatch) -> ProbTriple:
        if sample.odds is None:
            raise ValueError("odds forecaster used on a match without odds")
        return baseline_odds(sample.odds)


class OrderedLogitForecaster:
    name = "ologit"
    needs = ("covariate",)

    def __init__(self):
        self.model = None

    def fit(self, history: Sequence[PreMatch]) -> None:
        self.model = ologit_fit((s.covariate, s.outcome) for s in history)

    def predict(self, sample: PreMatch) -> ProbTriple:
        return ologit_predict(self.model, sample.covariate)


class PoissonForecaster:
    name = "poisson"
    needs = ("expected_goals",)

    def __init__(self, g_max: int = 15):
        self.g_max = g_max

    def fit(self, history: Sequence[PreMatch]) -> None:
        pass

    def predict(self, sample: PreMatch) -> ProbTriple:
        mu_h, mu_a = sample.expected_goals
        return poisson_outcome(mu_h, mu_a, self.g_max)


FORECASTERS = {
    cls.name: cls for cls in (UniformForecaster, MajorityForecaster, OddsForecaster,
                              OrderedLogitForecaster, PoissonForecaster)
}


def make_forecaster(name: str):
    try:
        return FORECASTERS[name]()
    except KeyError:
        raise ValueError(f"unknown forecaster {name!r}; choose from {', '.join(FORECASTERS)}") from None
