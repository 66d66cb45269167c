"""
From bookmaker odds to scored forecasts
=======================================

Decimal odds carry an implied probability plus the bookmaker's margin.
This script strips the margin, then scores a few forecasts with the ranked
probability score, the Brier score and the ignorance score.
"""

from pitchrater.data import OddsTriple, Result
from pitchrater.evaluate import brier_score, ign_score, rps
from pitchrater.features import odds_to_probs

# A two-way market. The reciprocals sum to more than one; the excess is the
# overround, and dividing by the total leaves a proper distribution.
implied = odds_to_probs((1.34, 3.02))
print("two-way probabilities:", [round(p, 3) for p in implied.probs])
print("overround: %.4f" % implied.overround)

# A three-way market works the same way.
market = OddsTriple(2.5, 3.2, 3.0)
three = odds_to_probs(market)
print("home/draw/away:", [round(p, 4) for p in three.probs])

# Score three forecasts against a home win. RPS rewards putting the leftover
# mass on the draw rather than the away win, because the outcomes are ordered.
forecasts = {
    "odds": three.probs,
    "uniform": (1 / 3, 1 / 3, 1 / 3),
    "draw-leaning": (0.5, 0.4, 0.1),
    "away-leaning": (0.5, 0.1, 0.4),
}
print("\n%-14s %7s %7s %7s" % ("forecast", "RPS", "Brier", "IGN"))
for name, p in forecasts.items():
    ign, _ = ign_score(p, Result.HOME_WIN)
    print("%-14s %7.4f %7.4f %7.4f" % (name, rps(p, Result.HOME_WIN), brier_score(p, Result.HOME_WIN), ign))

# The last two rows share p(home) = 0.5, so their ignorance is identical:
# it only looks at the probability of what actually happened.
