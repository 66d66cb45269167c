"""
Walk-forward backtest against baselines
=======================================

Each season is predicted with a model fitted only on earlier seasons.
Ratings keep updating match by match, but a forecast never sees the result
it is forecasting, nor any match played on the same day.
"""

from pitchrater.evaluate import Pipeline, walk_forward
from pitchrater.forecast import (MajorityForecaster, OrderedLogitForecaster, PoissonForecaster,
                                 UniformForecaster)
from pitchrater.ratings import engine_factory
from pitchrater.simulate import SimLeague, gen_league

dataset, _ = gen_league(SimLeague.log_spaced(20, seasons=4, seed=7))

pipelines = [
    Pipeline(UniformForecaster),
    Pipeline(MajorityForecaster),
    Pipeline(OrderedLogitForecaster, engine_factory("elo")),
    Pipeline(OrderedLogitForecaster, engine_factory("pi")),
    Pipeline(PoissonForecaster, engine_factory("gap")),
]

print("%-16s %6s %8s %9s %7s" % ("model", "n", "RPS_avg", "accuracy", "IGN"))
for pipe in pipelines:
    report = walk_forward(dataset, pipe)
    m = report.overall()
    print("%-16s %6d %8.4f %9.3f %7.4f" % (report.model, m["n"], m["rps_avg"], m["accuracy"], m["ign"]))

# The first season has nothing earlier to learn from, so it only warms up the
# ratings. The report says so.
print("\n" + report.notes[0])

# Per-season breakdown for the last pipeline.
for agg in report.aggregates():
    if agg["scope"] == "season":
        print("season %s: RPS_avg %.4f over %d matches" % (agg["group"], agg["rps_avg"], agg["n"]))
